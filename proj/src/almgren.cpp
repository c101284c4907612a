#include "seglab/almgren.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "seglab/spectral.hpp"

namespace seglab {

namespace {

// integrand of E: sum |grad u_i|^2 + beta sum_{i<j} u_i^2 u_j^2
ScalarField energy_density(const MultiField& u, double beta) {
    ScalarField dens = gradient_sq_sum(u);
    auto d = dens.raw();
    for (int i = 0; i < u.k(); ++i)
        for (int j = i + 1; j < u.k(); ++j) {
            auto a = u.comp(i).raw();
            auto b = u.comp(j).raw();
            for (size_t n = 0; n < d.size(); ++n)
                d[n] += beta * a[n] * a[n] * b[n] * b[n];
        }
    return dens;
}

ScalarField sum_squares(const MultiField& u) {
    ScalarField s(u.grid());
    auto d = s.raw();
    for (int i = 0; i < u.k(); ++i) {
        auto a = u.comp(i).raw();
        for (size_t n = 0; n < d.size(); ++n) d[n] += a[n] * a[n];
    }
    return s;
}

}  // namespace

double compute_H(const MultiField& u, double r) {
    return integrate_circle(sum_squares(u), r) / r;
}

double compute_E(const MultiField& u, double beta, double r) {
    return integrate_disk(energy_density(u, beta), r);
}

double compute_N(const MultiField& u, double beta, double r) {
    double H = compute_H(u, r);
    if (!(H > 0.0)) throw std::domain_error("compute_N: H(r) = 0, frequency undefined");
    return compute_E(u, beta, r) / H;
}

double AlmgrenTrace::max_violation() const {
    double v = 0.0;
    for (size_t i = 0; i + 1 < N.size(); ++i) v = std::max(v, N[i] - N[i + 1]);
    return std::max(v, 0.0);
}

AlmgrenTrace frequency_trace(const MultiField& u, double beta,
                             std::span<const double> radii) {
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("frequency_trace: radii must be increasing");
    AlmgrenTrace t;
    t.beta = beta;
    ScalarField usq = sum_squares(u);
    ScalarField dens = energy_density(u, beta);
    for (double r : radii) {
        double H = integrate_circle(usq, r) / r;
        if (!(H > 0.0)) {
            t.truncated = true;
            break;
        }
        double E = integrate_disk(dens, r);
        t.radii.push_back(r);
        t.H.push_back(H);
        t.E.push_back(E);
        t.N.push_back(E / H);
    }
    return t;
}

std::vector<double> node_radii_geometric(const PolarGrid2D& g, double r_lo,
                                         double r_hi, int per_octave) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || r_hi > g.r_max * (1.0 + 1e-12))
        throw std::invalid_argument("node_radii_geometric: bad range");
    if (per_octave < 1) throw std::invalid_argument("node_radii_geometric: per_octave >= 1");
    std::vector<double> out;
    const double dr = g.dr();
    const double step = std::pow(2.0, 1.0 / per_octave);
    int last_j = -1;
    for (double r = r_lo; r <= r_hi * (1.0 + 1e-12); r *= step) {
        int j = static_cast<int>(std::lround(std::min(r, r_hi) / dr));
        j = std::clamp(j, 1, g.n_r);
        if (j != last_j) {
            out.push_back(g.radius(j));
            last_j = j;
        }
    }
    return out;
}

DoublingReport check_doubling(const AlmgrenTrace& t, double d, double slack) {
    const size_t n = t.radii.size();
    for (double Nv : t.N)
        if (Nv > d + slack + 1e-12)
            throw std::invalid_argument("check_doubling: requires d >= max N on the trace");
    DoublingReport rep;
    rep.worst_margin_i = std::numeric_limits<double>::infinity();
    rep.worst_margin_ii = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double dlogH = std::log(t.H[j]) - std::log(t.H[i]);
            double dlogr = std::log(t.radii[j] / t.radii[i]);
            double m_i = dlogH - 2.0 * t.N[i] * dlogr;        // >= 0 wanted
            double m_ii = d + (2.0 * d * dlogr - dlogH);      // >= 0 wanted
            rep.worst_margin_i = std::min(rep.worst_margin_i, m_i);
            rep.worst_margin_ii = std::min(rep.worst_margin_ii, m_ii);
            if (m_i < -slack) rep.pass_i = false;
            if (m_ii < -slack) rep.pass_ii = false;
            ++rep.pairs;
        }
    if (rep.pairs == 0) rep.worst_margin_i = rep.worst_margin_ii = 0.0;
    return rep;
}

GrowthRate growth_rate(const AlmgrenTrace& t) {
    if (t.radii.size() < 10)
        throw std::invalid_argument("growth_rate: need at least 10 radii");
    const double r_cut = 0.9 * t.radii.back();  // drop the outermost 10%
    size_t hi = t.radii.size();
    while (hi > 0 && t.radii[hi - 1] > r_cut) --hi;
    if (hi < 3) hi = t.radii.size();  // degenerate spacing; keep everything
    size_t lo = hi - hi / 3;
    if (hi - lo < 2) lo = (hi >= 2) ? hi - 2 : 0;
    std::vector<double> win(t.N.begin() + static_cast<long>(lo),
                            t.N.begin() + static_cast<long>(hi));
    std::sort(win.begin(), win.end());
    GrowthRate g;
    g.d_hat = (win.size() % 2 == 1)
                  ? win[win.size() / 2]
                  : 0.5 * (win[win.size() / 2 - 1] + win[win.size() / 2]);
    g.plateau_quality = win.back() - win.front();
    g.low_confidence = g.plateau_quality > 0.2;
    return g;
}

double f_weight(double r, int dim) {
    if (dim < 2) throw std::domain_error("f_weight: dimension must be >= 2");
    if (r <= 0.0) throw std::domain_error("f_weight: r must be positive");
    if (r <= 1.0) return 0.5 * (2.0 - dim) * r * r + 0.5 * dim;
    return std::pow(r, 2.0 - dim);
}

AcfDiagnostics acf_diagnostics(const MultiField& u, double beta,
                               std::span<const int> group, double q,
                               std::span<const double> radii) {
    if (group.empty()) throw std::invalid_argument("acf_diagnostics: empty group");
    if (!(q > 0.0)) throw std::invalid_argument("acf_diagnostics: q must be positive");
    const auto& g = u.grid();
    const double dt = g.dtheta();

    AcfDiagnostics out;
    out.group.assign(group.begin(), group.end());
    out.q = q;
    for (double r : radii)
        if (r > 1.0) out.radii.push_back(r);  // f changes branch at r = 1

    const size_t nr = out.radii.size();
    out.Lambda.assign(group.size(), std::vector<double>(nr, 0.0));
    out.J.assign(group.size(), std::vector<double>(nr, 0.0));
    out.boundary.assign(group.size(), std::vector<double>(nr, 0.0));
    out.product.assign(nr, 1.0);

    ScalarField fw(g);
    for (int j = 1; j <= g.n_r; ++j)
        for (int m = 0; m < g.n_theta; ++m) fw.at(j, m) = f_weight(g.radius(j), 2);
    fw.pole() = 1.0;  // f(0+) in dimension 2

    for (size_t gi = 0; gi < group.size(); ++gi) {
        const int i = group[gi];
        const auto& ui = u.comp(i);
        // g_i = beta * sum_{j != i} u_j^2
        ScalarField gfac(g);
        {
            auto d = gfac.raw();
            for (int j = 0; j < u.k(); ++j) {
                if (j == i) continue;
                auto a = u.comp(j).raw();
                for (size_t n = 0; n < d.size(); ++n) d[n] += beta * a[n] * a[n];
            }
        }
        ScalarField usq(g), tang(g), jdens(g), bdens(g);
        ScalarField gsq = gradient_sq(ui);
        for (int j = 1; j <= g.n_r; ++j) {
            const double rj = g.radius(j);
            for (int m = 0; m < g.n_theta; ++m) {
                double v = ui.at(j, m);
                double dut = (ui.at(j, m + 1) - ui.at(j, m - 1)) / (2.0 * dt);
                double gt = (dut / rj) * (dut / rj);
                usq.at(j, m) = v * v;
                tang.at(j, m) = gt + v * v * gfac.at(j, m);
                bdens.at(j, m) = fw.at(j, m) * (gsq.at(j, m) + v * v * gfac.at(j, m));
                jdens.at(j, m) = bdens.at(j, m);
            }
        }
        usq.pole() = ui.pole() * ui.pole();
        jdens.pole() = fw.pole() * (gsq.pole() + usq.pole() * gfac.pole());
        for (size_t ri = 0; ri < nr; ++ri) {
            const double r = out.radii[ri];
            double denom = integrate_circle(usq, r);
            out.Lambda[gi][ri] = (denom > 0.0)
                                     ? r * r * integrate_circle(tang, r) / denom
                                     : std::numeric_limits<double>::infinity();
            out.J[gi][ri] = integrate_disk(jdens, r);
            out.boundary[gi][ri] = integrate_circle(bdens, r);
            out.product[ri] *= std::pow(r, -q) * out.J[gi][ri];
        }
    }
    return out;
}

double AcfDiagnostics::monotone_from(double rel_slack) const {
    if (radii.empty()) return 0.0;
    size_t s = radii.size() - 1;
    while (s > 0) {
        double prev = product[s - 1];
        if (product[s] < prev * (1.0 - rel_slack)) break;
        --s;
    }
    return radii[s];
}

double AcfDiagnostics::worst_upper_bound_margin() const {
    double worst = std::numeric_limits<double>::infinity();
    for (size_t gi = 0; gi < J.size(); ++gi)
        for (size_t ri = 0; ri < radii.size(); ++ri) {
            double gam = gamma_exponent(Lambda[gi][ri], 2);
            if (!(gam > 0.0) || !(J[gi][ri] > 0.0)) continue;
            double bound = radii[ri] / (2.0 * gam) * boundary[gi][ri];
            worst = std::min(worst, (bound - J[gi][ri]) / J[gi][ri]);
        }
    return worst;
}

void write_trace_csv(const AlmgrenTrace& t, std::ostream& os) {
    os << "r,H,E,N\n";
    char buf[128];
    for (size_t i = 0; i < t.radii.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t.radii[i],
                      t.H[i], t.E[i], t.N[i]);
        os << buf;
    }
}

void write_acf_csv(const AcfDiagnostics& d, std::ostream& os) {
    os << "r";
    for (int i : d.group) os << ",Lambda_" << (i + 1);
    for (int i : d.group) os << ",J_" << (i + 1);
    os << ",product\n";
    char buf[32];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, ",%.17g", x);
        os << buf;
    };
    for (size_t ri = 0; ri < d.radii.size(); ++ri) {
        std::snprintf(buf, sizeof buf, "%.17g", d.radii[ri]);
        os << buf;
        for (size_t gi = 0; gi < d.group.size(); ++gi) put(d.Lambda[gi][ri]);
        for (size_t gi = 0; gi < d.group.size(); ++gi) put(d.J[gi][ri]);
        put(d.product[ri]);
        os << "\n";
    }
}

}  // namespace seglab
