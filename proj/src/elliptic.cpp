#include "seglab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "seglab/profile.hpp"

namespace seglab {

namespace {

// Edge conductances of the discrete Dirichlet energy; its exact gradient
// at node (j,m) equals w_jm * (-Delta_h u) with the 5-point polar stencil.
//   radial (j,m)-(j+1,m): (j + 1/2) * dtheta      (j = 0 is the pole edge)
//   angular (j,m)-(j,m+1): dr^2 / (r_j dr dtheta) = 1 / (j dtheta)
double kappa_radial(const PolarGrid2D& g, int j) { return (j + 0.5) * g.dtheta(); }
double kappa_angular(const PolarGrid2D& g, int j) { return 1.0 / (j * g.dtheta()); }

// Node quadrature weight (interior rings full, boundary ring half, pole
// cell a disk of radius dr/2).
double node_weight(const PolarGrid2D& g, int j) {
    if (j == 0) return M_PI * (g.dr() / 2.0) * (g.dr() / 2.0);
    double w = g.radius(j) * g.dr() * g.dtheta();
    return (j == g.n_r) ? 0.5 * w : w;
}

double coupling_at(const MultiField& u, int skip, int j, int m) {
    double c = 0.0;
    for (int i = 0; i < u.k(); ++i) {
        if (i == skip) continue;
        double v = u.comp(i).at(j, m);
        c += v * v;
    }
    return c;
}

double coupling_pole(const MultiField& u, int skip) {
    double c = 0.0;
    for (int i = 0; i < u.k(); ++i) {
        if (i == skip) continue;
        double v = u.comp(i).pole();
        c += v * v;
    }
    return c;
}

}  // namespace

void SolveConfig::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("SolveConfig: beta must be positive");
    if (!beta_schedule.empty()) {
        for (size_t i = 0; i + 1 < beta_schedule.size(); ++i)
            if (!(beta_schedule[i] < beta_schedule[i + 1]))
                throw std::invalid_argument("SolveConfig: beta_schedule must be strictly increasing");
        if (beta_schedule.back() != beta)
            throw std::invalid_argument("SolveConfig: beta_schedule must end at beta");
    }
    if (!(tol_grad > 0.0)) throw std::invalid_argument("SolveConfig: tol_grad must be positive");
    if (max_iter < 1) throw std::invalid_argument("SolveConfig: max_iter must be >= 1");
    if (step_rule.kind == StepRule::Kind::fixed &&
        !(step_rule.omega > 0.0 && step_rule.omega < 2.0))
        throw std::invalid_argument("SolveConfig: fixed relaxation factor must lie in (0, 2)");
}

std::vector<std::vector<double>> BoundarySpec::trace_values(const PolarGrid2D& g,
                                                            int k) const {
    std::vector<std::vector<double>> out(static_cast<size_t>(k),
                                         std::vector<double>(static_cast<size_t>(g.n_theta), 0.0));
    if (kind == Kind::profile) {
        std::vector<int> asg = assignment.empty() ? default_assignment(d, k) : assignment;
        check_assignment(asg, d, k);
        for (int m = 0; m < g.n_theta; ++m) {
            int c = cone_index(g.theta(m), d, theta0);
            int i = asg[static_cast<size_t>(c)];
            out[static_cast<size_t>(i)][static_cast<size_t>(m)] =
                amplitude * psi_d_abs(g.r_max, g.theta(m), d, theta0);
        }
    } else {
        if (static_cast<int>(trace.size()) != k)
            throw std::invalid_argument("BoundarySpec: trace must have k components");
        for (int i = 0; i < k; ++i) {
            if (static_cast<int>(trace[static_cast<size_t>(i)].size()) != g.n_theta)
                throw std::invalid_argument("BoundarySpec: trace rows must have n_theta entries");
            for (int m = 0; m < g.n_theta; ++m) {
                double v = trace[static_cast<size_t>(i)][static_cast<size_t>(m)];
                if (!(v >= 0.0)) throw std::invalid_argument("BoundarySpec: trace must be nonnegative");
                out[static_cast<size_t>(i)][static_cast<size_t>(m)] = amplitude * v;
            }
        }
    }
    return out;
}

double energy(const MultiField& u, double beta) {
    const auto& g = u.grid();
    double grad = 0.0;
    for (int i = 0; i < u.k(); ++i) {
        const auto& ui = u.comp(i);
        for (int m = 0; m < g.n_theta; ++m) {
            double dp = ui.at(1, m) - ui.pole();
            grad += kappa_radial(g, 0) * dp * dp;
        }
        for (int j = 1; j < g.n_r; ++j)
            for (int m = 0; m < g.n_theta; ++m) {
                double dv = ui.at(j + 1, m) - ui.at(j, m);
                grad += kappa_radial(g, j) * dv * dv;
            }
        for (int j = 1; j <= g.n_r; ++j) {
            double ka = kappa_angular(g, j) * (j == g.n_r ? 0.5 : 1.0);
            for (int m = 0; m < g.n_theta; ++m) {
                double dv = ui.at(j, m + 1) - ui.at(j, m);
                grad += ka * dv * dv;
            }
        }
    }
    double coup = 0.0;
    for (int i = 0; i < u.k(); ++i)
        for (int l = i + 1; l < u.k(); ++l) {
            const auto& a = u.comp(i);
            const auto& b = u.comp(l);
            double s = node_weight(u.grid(), 0) * a.pole() * a.pole() * b.pole() * b.pole();
            for (int j = 1; j <= g.n_r; ++j) {
                double w = node_weight(g, j);
                for (int m = 0; m < g.n_theta; ++m) {
                    double ab = a.at(j, m) * b.at(j, m);
                    s += w * ab * ab;
                }
            }
            coup += s;
        }
    return 0.5 * grad + 0.5 * beta * coup;
}

namespace {

// Projected residual sup norm: |(-Delta_h u_i + beta g_i u_i)| at nodes
// with u_i > 0, only the negative part where u_i = 0.
double projected_residual(const MultiField& u, double beta) {
    const auto& g = u.grid();
    const double kp = kappa_radial(g, 0);
    double worst = 0.0;
    for (int i = 0; i < u.k(); ++i) {
        const auto& ui = u.comp(i);
        {  // pole
            double a = kp * g.n_theta, s = 0.0;
            for (int m = 0; m < g.n_theta; ++m) s += kp * ui.at(1, m);
            double w = node_weight(g, 0);
            double c = beta * w * coupling_pole(u, i);
            double r = ((a + c) * ui.pole() - s) / w;
            if (ui.pole() <= 0.0) r = std::min(r, 0.0);
            worst = std::max(worst, std::abs(r));
        }
        for (int j = 1; j < g.n_r; ++j) {
            const double kr_in = kappa_radial(g, j - 1);
            const double kr_out = kappa_radial(g, j);
            const double ka = kappa_angular(g, j);
            const double w = node_weight(g, j);
            for (int m = 0; m < g.n_theta; ++m) {
                double a = kr_in + kr_out + 2.0 * ka;
                double s = kr_in * ui.at(j - 1, m) + kr_out * ui.at(j + 1, m) +
                           ka * (ui.at(j, m - 1) + ui.at(j, m + 1));
                double c = beta * w * coupling_at(u, i, j, m);
                double r = ((a + c) * ui.at(j, m) - s) / w;
                if (ui.at(j, m) <= 0.0) r = std::min(r, 0.0);
                worst = std::max(worst, std::abs(r));
            }
        }
    }
    return worst;
}

// One projected SOR sweep; per-node exact minimization of the energy
// restricted to that unknown, relaxed by omega and clamped at 0.
void sweep(MultiField& u, double beta, double omega) {
    const auto& g = u.grid();
    const double kp = kappa_radial(g, 0);
    for (int i = 0; i < u.k(); ++i) {
        auto& ui = u.comp(i);
        {  // pole
            double a = kp * g.n_theta, s = 0.0;
            for (int m = 0; m < g.n_theta; ++m) s += kp * ui.at(1, m);
            double c = beta * node_weight(g, 0) * coupling_pole(u, i);
            double star = s / (a + c);
            ui.pole() = std::max(0.0, ui.pole() + omega * (star - ui.pole()));
        }
        for (int j = 1; j < g.n_r; ++j) {
            const double kr_in = kappa_radial(g, j - 1);
            const double kr_out = kappa_radial(g, j);
            const double ka = kappa_angular(g, j);
            const double bw = beta * node_weight(g, j);
            for (int m = 0; m < g.n_theta; ++m) {
                double a = kr_in + kr_out + 2.0 * ka;
                double s = kr_in * ui.at(j - 1, m) + kr_out * ui.at(j + 1, m) +
                           ka * (ui.at(j, m - 1) + ui.at(j, m + 1));
                double c = bw * coupling_at(u, i, j, m);
                double star = s / (a + c);
                double& v = ui.at(j, m);
                v = std::max(0.0, v + omega * (star - v));
            }
        }
    }
}

}  // namespace

std::pair<MultiField, SolveReport> solve_dirichlet(const PolarGrid2D& g, int k,
                                                   const BoundarySpec& boundary,
                                                   const SolveConfig& cfg,
                                                   const MultiField* warm_start) {
    cfg.validate();
    auto trace = boundary.trace_values(g, k);
    MultiField u = warm_start ? *warm_start : MultiField(g, k);
    if (warm_start) {
        if (!(u.grid() == g) || u.k() != k)
            throw std::invalid_argument("solve_dirichlet: warm start grid/k mismatch");
        for (int i = 0; i < k; ++i)
            for (int m = 0; m < g.n_theta; ++m)
                u.comp(i).at(g.n_r, m) =
                    trace[static_cast<size_t>(i)][static_cast<size_t>(m)];
    } else {
        for (int i = 0; i < k; ++i)
            for (int j = 1; j <= g.n_r; ++j)
                for (int m = 0; m < g.n_theta; ++m)
                    u.comp(i).at(j, m) =
                        trace[static_cast<size_t>(i)][static_cast<size_t>(m)] * g.radius(j) / g.r_max;
    }
    for (const auto& seed : cfg.seeds) {
        if (seed.component < 0 || seed.component >= k)
            throw std::invalid_argument("solve_dirichlet: seed component out of range");
        double cx = seed.r * std::cos(seed.theta), cy = seed.r * std::sin(seed.theta);
        for (int j = 1; j < g.n_r; ++j)
            for (int m = 0; m < g.n_theta; ++m) {
                double x = g.radius(j) * std::cos(g.theta(m));
                double y = g.radius(j) * std::sin(g.theta(m));
                double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                u.comp(seed.component).at(j, m) +=
                    seed.amplitude * std::exp(-d2 / (seed.width * seed.width));
            }
    }

    SolveReport rep;
    rep.beta_schedule = cfg.beta_schedule.empty() ? std::vector<double>{cfg.beta}
                                                  : cfg.beta_schedule;
    // SOR-optimal relaxation for the Laplacian part; the coupling term
    // only adds diagonal mass, which SOR tolerates.
    double omega = (cfg.step_rule.kind == StepRule::Kind::fixed)
                       ? cfg.step_rule.omega
                       : 2.0 / (1.0 + std::sin(M_PI / g.n_r));
    const int check_every = 25;
    int sweeps = 0;
    double resid = 0.0;
    bool converged = true;
    for (double beta : rep.beta_schedule) {
        bool stage_done = false;
        double e_prev = energy(u, beta);
        while (!stage_done && sweeps < cfg.max_iter) {
            MultiField backup = u;
            sweep(u, beta, omega);
            ++sweeps;
            if (cfg.step_rule.kind == StepRule::Kind::backtracking) {
                double e = energy(u, beta);
                if (e > e_prev * (1.0 + 1e-15) && omega > 1.0) {
                    u = backup;  // reject; halve the over-relaxation
                    --sweeps;
                    omega = std::max(1.0, 1.0 + 0.5 * (omega - 1.0));
                    continue;
                }
                e_prev = e;
            }
            if (sweeps % check_every == 0 || sweeps == cfg.max_iter) {
                resid = projected_residual(u, beta);
                if (resid <= cfg.tol_grad) stage_done = true;
            }
        }
        if (!stage_done) {
            resid = projected_residual(u, beta);
            if (resid > cfg.tol_grad) converged = false;
        }
    }
    rep.iterations = sweeps;
    rep.final_energy = energy(u, cfg.beta);
    rep.final_residual = projected_residual(u, cfg.beta);
    rep.converged = converged && rep.final_residual <= cfg.tol_grad;
    return {std::move(u), rep};
}

double pde_residual(const MultiField& u, double beta) {
    const auto& g = u.grid();
    double worst = 0.0;
    for (int i = 0; i < u.k(); ++i) {
        ScalarField lap = laplacian(u.comp(i));
        for (int j = 0; j < g.n_r; ++j)
            for (int m = 0; m < (j == 0 ? 1 : g.n_theta); ++m) {
                double v = u.comp(i).at(j, m);
                double gterm = (j == 0) ? coupling_pole(u, i) : coupling_at(u, i, j, m);
                double r = -lap.at(j, m) + beta * gterm * v;
                if (v <= 0.0) r = std::min(r, 0.0);
                worst = std::max(worst, std::abs(r));
            }
    }
    return worst;
}

MultiField equivariance_project(const MultiField& u, double d) {
    const auto& g = u.grid();
    const int k = u.k();
    if (!is_half_integer(d)) throw std::domain_error("equivariance_project: d must be a half-integer");
    const int twod = static_cast<int>(std::lround(2.0 * d));
    if (g.n_theta % (2 * twod) != 0)
        throw std::domain_error("equivariance_project: n_theta must be divisible by 4d");
    const int t_rot = g.n_theta / twod;  // pi/d in grid steps

    // Group elements (c, sigma, t): component i reads from component
    // (i+c) mod k at angle index sigma*m + t. Generators:
    //   T = (1, +1, t_rot)   u_i(z) = u_{i+1}(G_{pi/d} z)
    //   S = (1, -1, 0)       u_i(z) = u_{i+1}(conj z)
    using Elem = std::tuple<int, int, int>;
    std::set<Elem> group{{0, 1, 0}};
    std::vector<Elem> frontier{{0, 1, 0}};
    auto compose = [&](const Elem& e, const Elem& f) -> Elem {
        auto [c1, s1, t1] = e;
        auto [c2, s2, t2] = f;
        int c = (c1 + c2) % k;
        int t = (s1 * t2 + t1) % g.n_theta;
        if (t < 0) t += g.n_theta;
        return {c, s1 * s2, t};
    };
    const Elem T{1 % k, 1, t_rot}, S{1 % k, -1, 0};
    while (!frontier.empty()) {
        std::vector<Elem> next;
        for (const auto& e : frontier)
            for (const auto& gen : {T, S}) {
                Elem f = compose(e, gen);
                if (group.insert(f).second) next.push_back(f);
            }
        frontier = std::move(next);
    }

    MultiField out(g, k);
    const double inv = 1.0 / static_cast<double>(group.size());
    for (const auto& [c, sigma, t] : group)
        for (int i = 0; i < k; ++i) {
            int src = (i + c) % k;
            out.comp(i).pole() += inv * u.comp(src).pole();
            for (int j = 1; j <= g.n_r; ++j)
                for (int m = 0; m < g.n_theta; ++m)
                    out.comp(i).at(j, m) += inv * u.comp(src).at(j, sigma * m + t);
        }
    return out;
}

std::string SolveReport::to_json() const {
    nlohmann::ordered_json j;
    j["iterations"] = iterations;
    j["final_energy"] = final_energy;
    j["final_residual"] = final_residual;
    j["converged"] = converged;
    j["beta_schedule"] = beta_schedule;
    return j.dump(2);
}

}  // namespace seglab
