#include "seglab/profiles1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace seglab {

namespace {

struct State {
    double u, v, du, dv;
};

State deriv(const State& s) { return {s.du, s.dv, s.u * s.v * s.v, s.u * s.u * s.v}; }

State rk4_step(const State& s, double h) {
    State k1 = deriv(s);
    State s2{s.u + 0.5 * h * k1.u, s.v + 0.5 * h * k1.v, s.du + 0.5 * h * k1.du,
             s.dv + 0.5 * h * k1.dv};
    State k2 = deriv(s2);
    State s3{s.u + 0.5 * h * k2.u, s.v + 0.5 * h * k2.v, s.du + 0.5 * h * k2.du,
             s.dv + 0.5 * h * k2.dv};
    State k3 = deriv(s3);
    State s4{s.u + h * k3.u, s.v + h * k3.v, s.du + h * k3.du, s.dv + h * k3.dv};
    State k4 = deriv(s4);
    return {s.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            s.du + h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du),
            s.dv + h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv)};
}

constexpr double kOverflow = 1e8;

}  // namespace

OdeTrajectory shoot(double m, double a, double X, double h) {
    if (!(a > 0.0) || !(X > 0.0) || !(h > 0.0) || h >= X)
        throw std::invalid_argument("shoot: need a > 0, 0 < h < X");
    OdeTrajectory t;
    t.m = m;
    t.a = a;
    State s{a, a, m, -m};
    const int n = static_cast<int>(std::llround(X / h));
    t.x.push_back(0.0);
    t.u.push_back(s.u);
    t.v.push_back(s.v);
    t.tag = OdeTrajectory::Tag::reached_end;
    for (int i = 1; i <= n; ++i) {
        s = rk4_step(s, h);
        if (!std::isfinite(s.u) || !std::isfinite(s.v) || std::abs(s.u) > kOverflow ||
            std::abs(s.v) > kOverflow) {
            t.tag = (s.dv >= 0.0) ? OdeTrajectory::Tag::too_small
                                  : OdeTrajectory::Tag::too_large;
            break;
        }
        t.x.push_back(i * h);
        t.u.push_back(s.u);
        t.v.push_back(s.v);
        if (s.v <= 0.0) {
            t.tag = OdeTrajectory::Tag::too_large;
            break;
        }
        if (s.dv >= 0.0 && s.v < a / 2.0) {
            t.tag = OdeTrajectory::Tag::too_small;
            break;
        }
    }
    if (t.tag == OdeTrajectory::Tag::reached_end && s.v < a / 2.0 && s.dv >= 0.0)
        t.tag = OdeTrajectory::Tag::too_small;
    return t;
}

namespace {

struct Half {
    std::vector<double> u, v;  // on x_i = i*h, i = 0..n
    double slope = 0.0;        // asymptotic slope of the growing component
    double x_switch = 0.0;
};

// One half of the critical orbit: direct RK4 while the decaying
// component stays above 1e-4*a, then linear continuation of the growing
// component and stable backward integration of the decaying one from X,
// scaled to match at the switch index. swap_roles selects the x < 0
// half (initial derivatives negated; u decays instead of v).
Half assemble_half(double a, double m, double X, double h, bool swap_roles) {
    const int n = static_cast<int>(std::llround(X / h));
    Half out;
    out.u.resize(static_cast<size_t>(n + 1));
    out.v.resize(static_cast<size_t>(n + 1));
    State s = swap_roles ? State{a, a, -m, m} : State{a, a, m, -m};
    auto grow = [&](const State& st) { return swap_roles ? st.v : st.u; };
    auto decay = [&](const State& st) { return swap_roles ? st.u : st.v; };
    auto grow_d = [&](const State& st) { return swap_roles ? st.dv : st.du; };

    out.u[0] = s.u;
    out.v[0] = s.v;
    int i_sw = -1;
    State s_sw{};
    for (int i = 1; i <= n; ++i) {
        s = rk4_step(s, h);
        if (!std::isfinite(s.u) || !std::isfinite(s.v))
            throw std::runtime_error("find_profile: critical orbit lost before the switch point");
        out.u[static_cast<size_t>(i)] = s.u;
        out.v[static_cast<size_t>(i)] = s.v;
        if (decay(s) < 1e-4 * a) {
            i_sw = i;
            s_sw = s;
            break;
        }
    }
    if (i_sw < 0) {  // window too short for the continuation: direct part only
        out.slope = grow_d(s);
        out.x_switch = X;
        return out;
    }
    out.x_switch = i_sw * h;
    out.slope = grow_d(s_sw);
    const double g_c = grow(s_sw);

    // growing component: linear beyond the switch
    auto g_lin = [&](double x) { return g_c + out.slope * (x - out.x_switch); };
    for (int i = i_sw + 1; i <= n; ++i) {
        double g = g_lin(i * h);
        if (swap_roles)
            out.v[static_cast<size_t>(i)] = g;
        else
            out.u[static_cast<size_t>(i)] = g;
    }

    // decaying component: z'' = g_lin^2 z integrated backward from X
    // (the forward-decaying mode grows backward, so this is stable),
    // WKB start z' = g_lin(X) z, then scaled to match at the switch.
    std::vector<double> z(static_cast<size_t>(n + 1 - i_sw));
    double zv = 1.0, zd = g_lin(X) * zv;
    z[static_cast<size_t>(n - i_sw)] = zv;
    for (int i = n - 1; i >= i_sw; --i) {
        // RK4 on (z, z') in the backward variable s = X - x
        auto f = [&](double x, double val, double der) {
            (void)x;
            return std::pair<double, double>{der, g_lin(x) * g_lin(x) * val};
        };
        double x_hi = (i + 1) * h;
        auto [k1v, k1d] = f(x_hi, zv, zd);
        auto [k2v, k2d] = f(x_hi - 0.5 * h, zv + 0.5 * h * k1v, zd + 0.5 * h * k1d);
        auto [k3v, k3d] = f(x_hi - 0.5 * h, zv + 0.5 * h * k2v, zd + 0.5 * h * k2d);
        auto [k4v, k4d] = f(x_hi - h, zv + h * k3v, zd + h * k3d);
        zv += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        zd += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        z[static_cast<size_t>(i - i_sw)] = zv;
        if (zv > 1e280) {  // renormalize; only ratios matter
            for (auto& w : z) w /= zv;
            zd /= zv;
            zv = 1.0;
        }
    }
    const double scale = decay(s_sw) / z[0];
    for (int i = i_sw + 1; i <= n; ++i) {
        double d = scale * z[static_cast<size_t>(i - i_sw)];
        if (swap_roles)
            out.u[static_cast<size_t>(i)] = d;
        else
            out.v[static_cast<size_t>(i)] = d;
    }
    return out;
}

}  // namespace

OdeTrajectory find_profile(double a, double X, double tol, double h) {
    if (!(a > 0.0) || !(X > 0.0) || !(tol > 0.0))
        throw std::invalid_argument("find_profile: parameters must be positive");
    double lo = 0.0;  // m = 0 gives u = v, never decaying -> too small
    double hi = a * a;
    while (shoot(hi, a, X, h).tag != OdeTrajectory::Tag::too_large) {
        hi *= 2.0;
        if (hi > 1e6 * a * a)
            throw std::runtime_error("find_profile: no bisection bracket found");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        auto tag = shoot(mid, a, X, h).tag;
        if (tag == OdeTrajectory::Tag::too_large)
            hi = mid;
        else
            lo = mid;
    }
    const double m_star = 0.5 * (lo + hi);

    Half fwd = assemble_half(a, m_star, X, h, false);
    Half bwd = assemble_half(a, m_star, X, h, true);
    const int n = static_cast<int>(fwd.u.size()) - 1;

    OdeTrajectory t;
    t.m = m_star;
    t.a = a;
    t.b = fwd.slope;
    t.x_switch = fwd.x_switch;
    t.tag = OdeTrajectory::Tag::reached_end;
    t.x.resize(static_cast<size_t>(2 * n + 1));
    t.u.resize(static_cast<size_t>(2 * n + 1));
    t.v.resize(static_cast<size_t>(2 * n + 1));
    for (int i = -n; i <= n; ++i) {
        size_t idx = static_cast<size_t>(i + n);
        t.x[idx] = i * h;
        if (i >= 0) {
            t.u[idx] = fwd.u[static_cast<size_t>(i)];
            t.v[idx] = fwd.v[static_cast<size_t>(i)];
        } else {
            t.u[idx] = bwd.u[static_cast<size_t>(-i)];
            t.v[idx] = bwd.v[static_cast<size_t>(-i)];
        }
    }
    double defect = 0.0;
    for (int i = 0; 2 * i <= n; ++i)
        defect = std::max(defect, std::abs(fwd.u[static_cast<size_t>(i)] -
                                           bwd.v[static_cast<size_t>(i)]));
    t.symmetry_defect = defect;
    if (defect > tol)
        throw std::runtime_error("find_profile: symmetry defect exceeds tolerance");
    return t;
}

DecayResult decay_experiment(double K, double A, double r, int dim) {
    if (K < 0.0 || !(A > 0.0) || !(r > 0.0) || dim < 1)
        throw std::invalid_argument("decay_experiment: need K >= 0, A > 0, r > 0, dim >= 1");
    DecayResult res;
    if (K == 0.0) {  // v' has no source: v is constant
        res.sup_Br = A;
        res.bound_coeff = 1.0;
        return res;
    }
    const int n = 4096;
    const double h = 2.0 * r / n;
    const int i0 = 8;  // series start index, clear of the 1/rho singularity

    // w(rho) = sum a_m rho^{2m}, a_{m+1} = K a_m / ((2m+2)(2m+dim))
    auto series = [&](double rho, double& w, double& dw) {
        double am = 1.0, r2m = 1.0;
        w = 1.0;
        dw = 0.0;
        for (int m = 0; m < 200; ++m) {
            double an = K * am / ((2.0 * m + 2.0) * (2.0 * m + dim));
            double term = an * r2m * rho * rho;
            w += term;
            dw += an * (2.0 * m + 2.0) * r2m * rho;
            if (std::abs(term) < 1e-30 * std::abs(w)) break;
            am = an;
            r2m *= rho * rho;
        }
    };
    double w, dw;
    series(i0 * h, w, dw);
    double wr = 0.0;
    for (int i = i0; i < n; ++i) {
        if (i == n / 2) wr = w;
        double x = i * h;
        auto f = [&](double xx, double val, double der) {
            return std::pair<double, double>{der, K * val - (dim - 1) * der / xx};
        };
        auto [k1v, k1d] = f(x, w, dw);
        auto [k2v, k2d] = f(x + 0.5 * h, w + 0.5 * h * k1v, dw + 0.5 * h * k1d);
        auto [k3v, k3d] = f(x + 0.5 * h, w + 0.5 * h * k2v, dw + 0.5 * h * k2d);
        auto [k4v, k4d] = f(x + h, w + h * k3v, dw + h * k3d);
        w += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        dw += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    res.sup_Br = A * wr / w;  // rescale by linearity so v(2r) = A
    res.bound_coeff = res.sup_Br * std::exp(std::sqrt(K) * r) / A;
    return res;
}

double decay_slope_fit(const std::vector<double>& K_list, double A, double r, int dim) {
    if (K_list.size() < 2)
        throw std::invalid_argument("decay_slope_fit: need at least two K values");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double K : K_list) {
        double x = std::sqrt(K);
        double y = std::log(decay_experiment(K, A, r, dim).sup_Br);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(K_list.size());
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void write_trajectory_csv(const OdeTrajectory& t, std::ostream& os) {
    os << "x,u,v\n";
    char buf[128];
    for (size_t i = 0; i < t.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t.x[i], t.u[i], t.v[i]);
        os << buf;
    }
}

}  // namespace seglab
