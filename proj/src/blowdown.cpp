#include "seglab/blowdown.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "seglab/almgren.hpp"
#include "seglab/profile.hpp"

namespace seglab {

BlowdownFamily blowdown_family(const MultiField& u, std::span<const double> R_list,
                               const PolarGrid2D& target, double beta) {
    (void)beta;  // E is not needed for normalization; kept for symmetry with traces
    BlowdownFamily fam;
    const auto& src = u.grid();
    for (double R : R_list) {
        if (!(R > 0.0) || R * target.r_max > src.r_max * (1.0 + 1e-12)) {
            fam.R_skipped.push_back(R);
            continue;
        }
        double H = compute_H(u, R);
        if (!(H > 0.0)) {
            fam.R_skipped.push_back(R);
            continue;
        }
        fam.members.push_back(sample_rescaled(u, R, target, std::sqrt(H)));
        fam.R_used.push_back(R);
    }
    return fam;
}

namespace {

// ||sum_i u_i - |Psi_d(., theta - theta0)|||^2 over B_1 (squared).
double fit_distance_sq(const ScalarField& usum, double d, double theta0) {
    const auto& g = usum.grid();
    ScalarField diff(g);
    for (int j = 1; j <= g.n_r; ++j)
        for (int m = 0; m < g.n_theta; ++m) {
            double e = usum.at(j, m) - psi_d_abs(g.radius(j), g.theta(m), d, theta0);
            diff.at(j, m) = e * e;
        }
    diff.pole() = usum.pole() * usum.pole();
    return integrate_disk(diff, std::min(1.0, g.r_max));
}

}  // namespace

ProfileFit classify_profile(const MultiField& u_unit, double d) {
    const int nc = cone_count(d);
    const auto& g = u_unit.grid();
    const int k = u_unit.k();
    const double dt = g.dtheta();
    const double period = M_PI / d;

    ScalarField usum(g);
    for (int i = 0; i < k; ++i) {
        auto dst = usum.raw();
        auto src = u_unit.comp(i).raw();
        for (size_t n = 0; n < dst.size(); ++n) dst[n] += src[n];
    }

    // rotation search at grid resolution, then parabolic refinement
    int best_m = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<size_t>(g.n_theta));
    for (int m = 0; m < g.n_theta; ++m) {
        dist[static_cast<size_t>(m)] = fit_distance_sq(usum, d, m * dt);
        if (dist[static_cast<size_t>(m)] < best) {
            best = dist[static_cast<size_t>(m)];
            best_m = m;
        }
    }
    double ym = dist[static_cast<size_t>((best_m + g.n_theta - 1) % g.n_theta)];
    double yp = dist[static_cast<size_t>((best_m + 1) % g.n_theta)];
    double denom = ym - 2.0 * best + yp;
    double shift = (denom > 0.0) ? 0.5 * (ym - yp) / denom : 0.0;
    double theta0 = best_m * dt + std::clamp(shift, -0.5, 0.5) * dt;
    theta0 = std::fmod(theta0, period);
    if (theta0 < 0.0) theta0 += period;

    // per-cone squared masses decide the assignment
    std::vector<std::vector<double>> mass(static_cast<size_t>(nc),
                                          std::vector<double>(static_cast<size_t>(k), 0.0));
    const int jmax = std::min(g.n_r, static_cast<int>(std::floor(1.0 / g.dr() + 1e-12)));
    for (int j = 1; j <= jmax; ++j)
        for (int m = 0; m < g.n_theta; ++m) {
            int c = cone_index(g.theta(m), d, theta0);
            for (int i = 0; i < k; ++i) {
                double v = u_unit.comp(i).at(j, m);
                mass[static_cast<size_t>(c)][static_cast<size_t>(i)] += v * v * g.radius(j);
            }
        }

    ProfileFit fit;
    fit.d = d;
    fit.theta0 = theta0;
    fit.assignment.resize(static_cast<size_t>(nc));
    for (int c = 0; c < nc; ++c) {
        const auto& mc = mass[static_cast<size_t>(c)];
        int arg = 0;
        for (int i = 1; i < k; ++i)
            if (mc[static_cast<size_t>(i)] > mc[static_cast<size_t>(arg)]) arg = i;
        double second = 0.0;
        for (int i = 0; i < k; ++i)
            if (i != arg) second = std::max(second, mc[static_cast<size_t>(i)]);
        if (second > 0.99 * mc[static_cast<size_t>(arg)]) {
            fit.tie_flag = true;
            for (int i = 0; i < k; ++i)  // lowest index wins a tie
                if (mc[static_cast<size_t>(i)] >= 0.99 * mc[static_cast<size_t>(arg)]) {
                    arg = i;
                    break;
                }
        }
        fit.assignment[static_cast<size_t>(c)] = arg;
    }

    // residual of the vector field against the fitted profile over B_1
    ScalarField err(g), ref(g);
    for (int j = 1; j <= g.n_r; ++j)
        for (int m = 0; m < g.n_theta; ++m) {
            int c = cone_index(g.theta(m), d, theta0);
            int owner = fit.assignment[static_cast<size_t>(c)];
            double p = psi_d_abs(g.radius(j), g.theta(m), d, theta0);
            ref.at(j, m) = p * p;
            double e2 = 0.0;
            for (int i = 0; i < k; ++i) {
                double e = u_unit.comp(i).at(j, m) - (i == owner ? p : 0.0);
                e2 += e * e;
            }
            err.at(j, m) = e2;
        }
    for (int i = 0; i < k; ++i) err.pole() += u_unit.comp(i).pole() * u_unit.comp(i).pole();
    double r1 = std::min(1.0, g.r_max);
    fit.relative_l2_residual =
        std::sqrt(integrate_disk(err, r1) / integrate_disk(ref, r1));
    fit.segregation_value = segregation_residual(u_unit, 1.0);
    return fit;
}

double segregation_residual(const MultiField& u_unit, double scale_factor) {
    if (!(scale_factor > 0.0))
        throw std::domain_error("segregation_residual: scale_factor must be positive");
    const auto& g = u_unit.grid();
    ScalarField coup(g);
    auto dst = coup.raw();
    for (int i = 0; i < u_unit.k(); ++i)
        for (int l = i + 1; l < u_unit.k(); ++l) {
            auto a = u_unit.comp(i).raw();
            auto b = u_unit.comp(l).raw();
            for (size_t n = 0; n < dst.size(); ++n)
                dst[n] += a[n] * a[n] * b[n] * b[n];
        }
    return scale_factor * integrate_disk(coup, std::min(1.0, g.r_max));
}

VanishingReport vanishing_diagnostic(const std::vector<MultiField>& family,
                                     double threshold) {
    if (family.empty()) throw std::invalid_argument("vanishing_diagnostic: empty family");
    const int k = family.front().k();
    VanishingReport rep;
    rep.threshold = threshold;
    rep.min_boundary_mass.assign(static_cast<size_t>(k),
                                 std::numeric_limits<double>::infinity());
    for (const auto& u : family) {
        if (u.k() != k) throw std::invalid_argument("vanishing_diagnostic: mixed k");
        for (int i = 0; i < k; ++i) {
            ScalarField sq(u.grid());
            auto dst = sq.raw();
            auto src = u.comp(i).raw();
            for (size_t n = 0; n < dst.size(); ++n) dst[n] = src[n] * src[n];
            double m = integrate_circle(sq, std::min(1.0, u.grid().r_max));
            rep.min_boundary_mass[static_cast<size_t>(i)] =
                std::min(rep.min_boundary_mass[static_cast<size_t>(i)], m);
        }
    }
    for (double m : rep.min_boundary_mass) rep.vanishing.push_back(m < threshold);
    return rep;
}

std::pair<double, double> quantization_check(double d_hat) {
    if (!(d_hat > 0.0)) throw std::domain_error("quantization_check: d_hat must be positive");
    double nearest = 0.5 * std::round(2.0 * d_hat);
    return {nearest, std::abs(d_hat - nearest)};
}

std::string ProfileFit::to_json() const {
    nlohmann::ordered_json j;
    j["d"] = d;
    j["theta0"] = theta0;
    j["assignment"] = assignment;
    j["residual"] = relative_l2_residual;
    j["segregation"] = segregation_value;
    j["tie_flag"] = tie_flag;
    return j.dump(2);
}

}  // namespace seglab
