#include "seglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>

namespace seglab {

double gamma_exponent(double t, int dim) {
    if (t < 0.0) throw std::domain_error("gamma_exponent: t must be >= 0");
    if (dim < 2) throw std::domain_error("gamma_exponent: dimension must be >= 2");
    const double c = 0.5 * (dim - 2);
    return std::sqrt(c * c + t) - c;
}

double gamma_inverse(double d, int dim) {
    if (!(d > 0.0)) throw std::domain_error("gamma_inverse: d must be positive");
    if (dim < 2) throw std::domain_error("gamma_inverse: dimension must be >= 2");
    return d * (d + dim - 2);
}

double lambda1_arc(double length) {
    if (!(length > 0.0) || length > 2.0 * M_PI + 1e-12)
        throw std::domain_error("lambda1_arc: length outside (0, 2pi]");
    return (M_PI / length) * (M_PI / length);
}

double lambda1_lune(double alpha) {
    if (!(alpha > 0.0) || alpha > 2.0 * M_PI + 1e-12)
        throw std::domain_error("lambda1_lune: alpha outside (0, 2pi]");
    const double nu = M_PI / alpha;
    return nu * (nu + 1.0);
}

SphereGrid::SphereGrid(int n_phi_, int n_lam_) : n_phi(n_phi_), n_lam(n_lam_) {
    if (n_phi < 4) throw std::invalid_argument("SphereGrid: n_phi must be >= 4");
    if (n_lam < 8) throw std::invalid_argument("SphereGrid: n_lam must be >= 8");
}

double SphereGrid::dphi() const { return M_PI / n_phi; }
double SphereGrid::dlam() const { return 2.0 * M_PI / n_lam; }
double SphereGrid::phi(int p) const { return p * dphi(); }
double SphereGrid::lam(int q) const { return q * dlam(); }

int SphereGrid::index(int p, int q) const {
    int qq = q % n_lam;
    if (qq < 0) qq += n_lam;
    return (p - 1) * n_lam + qq;
}

double SphereGrid::weight(int p) const { return std::sin(phi(p)) * dphi() * dlam(); }

double SphereGrid::weight_sum() const {
    double s = 0.0;
    for (int p = 1; p < n_phi; ++p) s += weight(p) * n_lam;
    return s;
}

std::vector<bool> lune_mask(const SphereGrid& g, double alpha) {
    if (!(alpha > 0.0) || alpha > 2.0 * M_PI + 1e-12)
        throw std::domain_error("lune_mask: alpha outside (0, 2pi]");
    std::vector<bool> m(static_cast<size_t>(g.n_nodes()), false);
    for (int p = 1; p < g.n_phi; ++p)
        for (int q = 0; q < g.n_lam; ++q) {
            double l = g.lam(q);
            if (l > 1e-12 && l < alpha - 1e-12)
                m[static_cast<size_t>(g.index(p, q))] = true;
        }
    return m;
}

namespace {

// Symmetrized operator A u = -d_phi(sin phi d_phi u) - (1/sin phi) d_ll u
// (row scaling of -Laplace-Beltrami by sin phi). Generalized problem
// A u = lambda W u with W = diag(sin phi_p). Dirichlet outside the mask
// and at both poles.
void apply_operator(const SphereGrid& g, const std::vector<bool>& mask,
                    const std::vector<double>& x, std::vector<double>& y) {
    const double dphi = g.dphi();
    const double dlam = g.dlam();
    const double idp2 = 1.0 / (dphi * dphi);
    const double idl2 = 1.0 / (dlam * dlam);
    for (int p = 1; p < g.n_phi; ++p) {
        const double s_m = std::sin((p - 0.5) * dphi);
        const double s_p = std::sin((p + 0.5) * dphi);
        const double is = 1.0 / std::sin(g.phi(p));
        for (int q = 0; q < g.n_lam; ++q) {
            const int n = g.index(p, q);
            if (!mask[static_cast<size_t>(n)]) {
                y[static_cast<size_t>(n)] = 0.0;
                continue;
            }
            auto val = [&](int pp, int qq) -> double {
                if (pp < 1 || pp >= g.n_phi) return 0.0;
                int nn = g.index(pp, qq);
                return mask[static_cast<size_t>(nn)] ? x[static_cast<size_t>(nn)] : 0.0;
            };
            const double u = x[static_cast<size_t>(n)];
            double r = s_p * (u - val(p + 1, q)) * idp2 +
                       s_m * (u - val(p - 1, q)) * idp2 +
                       is * (2.0 * u - val(p, q + 1) - val(p, q - 1)) * idl2;
            y[static_cast<size_t>(n)] = r;
        }
    }
}

double dot_masked(const std::vector<bool>& mask, const std::vector<double>& a,
                  const std::vector<double>& b) {
    double s = 0.0;
    for (size_t n = 0; n < mask.size(); ++n)
        if (mask[n]) s += a[n] * b[n];
    return s;
}

// CG for A y = b on the mask; b must vanish off the mask.
void cg_solve(const SphereGrid& g, const std::vector<bool>& mask,
              const std::vector<double>& b, std::vector<double>& y) {
    const size_t n = b.size();
    std::fill(y.begin(), y.end(), 0.0);
    std::vector<double> r = b, p = b, Ap(n, 0.0);
    double rr = dot_masked(mask, r, r);
    const double rr0 = rr;
    if (!(rr0 > 0.0)) return;
    const int max_it = 20 * static_cast<int>(n);
    for (int it = 0; it < max_it && rr > 1e-24 * rr0; ++it) {
        apply_operator(g, mask, p, Ap);
        double pAp = dot_masked(mask, p, Ap);
        if (!(pAp > 0.0)) break;
        double alpha = rr / pAp;
        for (size_t i = 0; i < n; ++i)
            if (mask[i]) {
                y[i] += alpha * p[i];
                r[i] -= alpha * Ap[i];
            }
        double rr_new = dot_masked(mask, r, r);
        double beta = rr_new / rr;
        rr = rr_new;
        for (size_t i = 0; i < n; ++i)
            if (mask[i]) p[i] = r[i] + beta * p[i];
    }
}

void check_mask(const SphereGrid& g, const std::vector<bool>& mask) {
    if (mask.size() != static_cast<size_t>(g.n_nodes()))
        throw std::invalid_argument("lambda1_masked: mask size mismatch");
    int first = -1, count = 0;
    for (size_t n = 0; n < mask.size(); ++n)
        if (mask[n]) {
            if (first < 0) first = static_cast<int>(n);
            ++count;
        }
    if (count == 0) throw std::domain_error("lambda1_masked: empty mask");
    // connectivity over the 4-neighbor stencil, periodic in longitude
    std::vector<bool> seen(mask.size(), false);
    std::queue<int> bfs;
    bfs.push(first);
    seen[static_cast<size_t>(first)] = true;
    int reached = 0;
    while (!bfs.empty()) {
        int n = bfs.front();
        bfs.pop();
        ++reached;
        int p = n / g.n_lam + 1, q = n % g.n_lam;
        auto visit = [&](int pp, int qq) {
            if (pp < 1 || pp >= g.n_phi) return;
            int nn = g.index(pp, qq);
            if (mask[static_cast<size_t>(nn)] && !seen[static_cast<size_t>(nn)]) {
                seen[static_cast<size_t>(nn)] = true;
                bfs.push(nn);
            }
        };
        visit(p - 1, q);
        visit(p + 1, q);
        visit(p, q - 1);
        visit(p, q + 1);
    }
    if (reached != count)
        throw std::domain_error("lambda1_masked: mask is disconnected");
}

}  // namespace

double lambda1_masked(const SphereGrid& g, const std::vector<bool>& mask) {
    check_mask(g, mask);
    const size_t n = mask.size();
    std::vector<double> x(n, 0.0), b(n, 0.0), y(n, 0.0), Ax(n, 0.0);
    for (size_t i = 0; i < n; ++i)
        if (mask[i]) x[i] = 1.0;

    std::vector<double> w(n, 0.0);
    for (int p = 1; p < g.n_phi; ++p) {
        double sp = std::sin(g.phi(p));
        for (int q = 0; q < g.n_lam; ++q) w[static_cast<size_t>(g.index(p, q))] = sp;
    }

    double lambda_prev = 0.0;
    for (int it = 0; it < 200; ++it) {
        double nrm = std::sqrt(dot_masked(mask, x, x));
        for (size_t i = 0; i < n; ++i)
            if (mask[i]) b[i] = w[i] * x[i] / nrm;
        cg_solve(g, mask, b, y);
        x.swap(y);
        apply_operator(g, mask, x, Ax);
        double num = dot_masked(mask, x, Ax);
        double den = 0.0;
        for (size_t i = 0; i < n; ++i)
            if (mask[i]) den += w[i] * x[i] * x[i];
        double lambda = num / den;
        if (it > 0 && std::abs(lambda - lambda_prev) < 1e-8 * std::max(1.0, lambda))
            return lambda;
        lambda_prev = lambda;
    }
    throw std::runtime_error("lambda1_masked: inverse power iteration stagnated");
}

void ArcPartition::validate() const {
    if (arcs.empty()) throw std::domain_error("ArcPartition: no arcs");
    double prev_b = 0.0;
    for (size_t i = 0; i < arcs.size(); ++i) {
        auto [a, b] = arcs[i];
        if (!(b > a)) throw std::domain_error("ArcPartition: empty arc");
        if (a < (i == 0 ? -1e-12 : prev_b - 1e-12))
            throw std::domain_error("ArcPartition: arcs overlap or are unsorted");
        if (b > 2.0 * M_PI + 1e-12)
            throw std::domain_error("ArcPartition: arc exceeds 2pi");
        prev_b = b;
    }
}

double partition_value(const ArcPartition& p) {
    p.validate();
    double v = 0.0;
    for (auto [a, b] : p.arcs) v = std::max(v, lambda1_arc(b - a));
    return v;
}

double beta_value(const ArcPartition& p, int dim) {
    p.validate();
    double s = 0.0;
    for (auto [a, b] : p.arcs) s += gamma_exponent(lambda1_arc(b - a), dim);
    return 2.0 * s / p.k();
}

namespace {

std::vector<double> sphere_eigenvalues(const std::vector<SphereDomain>& parts,
                                       const SphereGrid& g) {
    if (parts.empty()) throw std::domain_error("partition_value: no parts");
    double alpha_sum = 0.0;
    std::vector<bool> covered;
    std::vector<double> lam;
    for (const auto& d : parts) {
        if (d.kind == SphereDomain::Kind::lune) {
            alpha_sum += d.alpha;
            lam.push_back(lambda1_lune(d.alpha));
        } else {
            if (covered.empty()) covered.assign(d.mask.size(), false);
            for (size_t n = 0; n < d.mask.size(); ++n) {
                if (d.mask[n] && covered[n])
                    throw std::domain_error("partition_value: masks overlap");
                if (d.mask[n]) covered[n] = true;
            }
            lam.push_back(lambda1_masked(g, d.mask));
        }
    }
    if (alpha_sum > 2.0 * M_PI + 1e-9)
        throw std::domain_error("partition_value: lune angles exceed 2pi");
    return lam;
}

}  // namespace

double partition_value(const std::vector<SphereDomain>& parts, const SphereGrid& g) {
    auto lam = sphere_eigenvalues(parts, g);
    return *std::max_element(lam.begin(), lam.end());
}

double beta_value(const std::vector<SphereDomain>& parts, const SphereGrid& g,
                  int dim) {
    auto lam = sphere_eigenvalues(parts, g);
    double s = 0.0;
    for (double l : lam) s += gamma_exponent(l, dim);
    return 2.0 * s / static_cast<double>(lam.size());
}

std::pair<ArcPartition, double> optimize_arcs(int k, int n_starts, uint64_t seed) {
    if (k < 2) throw std::domain_error("optimize_arcs: k must be >= 2");
    if (n_starts < 1) throw std::domain_error("optimize_arcs: n_starts must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);

    ArcPartition best;
    double best_value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_starts; ++s) {
        // Gap-closing step: the objective only improves when arcs expand,
        // so the k arc boundaries c_0 < ... < c_{k-1} tile the circle.
        std::vector<double> c(static_cast<size_t>(k));
        for (auto& x : c) x = unif(rng);
        std::sort(c.begin(), c.end());
        // Degenerate starts (coincident boundaries) are nudged apart.
        for (int i = 1; i < k; ++i)
            c[static_cast<size_t>(i)] =
                std::max(c[static_cast<size_t>(i)], c[static_cast<size_t>(i - 1)] + 1e-6);

        // Balance each shared endpoint between its two arcs (Gauss-Seidel
        // averaging on the circle); fixed point = equal arcs.
        for (int sweep = 0; sweep < 100000; ++sweep) {
            double moved = 0.0;
            for (int i = 0; i < k; ++i) {
                double lo = c[static_cast<size_t>((i + k - 1) % k)];
                double hi = c[static_cast<size_t>((i + 1) % k)];
                if (i == 0) lo -= 2.0 * M_PI;
                if (i == k - 1) hi += 2.0 * M_PI;
                double target = 0.5 * (lo + hi);
                moved = std::max(moved, std::abs(target - c[static_cast<size_t>(i)]));
                c[static_cast<size_t>(i)] = target;
            }
            if (moved < 1e-13) break;
        }

        // Normalize so the first boundary is 0 and read off arc lengths.
        ArcPartition p;
        for (int i = 0; i < k; ++i) {
            double a = c[static_cast<size_t>(i)] - c[0];
            double b = (i + 1 < k) ? c[static_cast<size_t>(i + 1)] - c[0] : 2.0 * M_PI;
            p.arcs.emplace_back(a, b);
        }
        double v = partition_value(p);
        if (v < best_value) {
            best_value = v;
            best = std::move(p);
        }
    }
    return {best, best_value};
}

LkMonotonicityReport monotonicity_Lk_check(int k_max, uint64_t seed) {
    if (k_max < 3) throw std::domain_error("monotonicity_Lk_check: k_max must be >= 3");
    LkMonotonicityReport rep;
    for (int k = 2; k <= k_max; ++k)
        rep.values.push_back(optimize_arcs(k, 4, seed + static_cast<uint64_t>(k)).second);
    rep.strictly_increasing = true;
    for (size_t i = 0; i + 1 < rep.values.size(); ++i)
        if (!(rep.values[i] < rep.values[i + 1])) rep.strictly_increasing = false;
    rep.L2_sphere = gamma_inverse(1.0, 3);
    rep.L3_sphere = partition_value(
        {SphereDomain::make_lune(2.0 * M_PI / 3.0), SphereDomain::make_lune(2.0 * M_PI / 3.0),
         SphereDomain::make_lune(2.0 * M_PI / 3.0)},
        SphereGrid(16, 16));
    rep.sphere_step_ok = rep.L3_sphere > rep.L2_sphere;
    return rep;
}

}  // namespace seglab
