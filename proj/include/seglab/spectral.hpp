#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace seglab {

// gamma(t) = sqrt(((N-2)/2)^2 + t) - (N-2)/2: converts a first Dirichlet
// eigenvalue on S^{N-1} to the homogeneity degree of its extension.
// Strictly increasing in t, gamma(0) = 0. For N = 2 it is sqrt(t).
double gamma_exponent(double t, int dim);

// Inverse map d -> d(d + N - 2): the first eigenvalue whose degree is d.
double gamma_inverse(double d, int dim);

// First Dirichlet eigenvalue of an arc of length l in (0, 2pi]: (pi/l)^2.
double lambda1_arc(double length);

// First Dirichlet eigenvalue of a lune of dihedral angle alpha on S^2:
// nu(nu+1) with nu = pi/alpha.
double lambda1_lune(double alpha);

// Colatitude-longitude grid on S^2. Interior nodes phi_p = p*dphi for
// p = 1..n_phi-1 (poles excluded), lambda_q = q*dlam periodic. Node
// quadrature weight is sin(phi_p)*dphi*dlam.
struct SphereGrid {
    int n_phi;
    int n_lam;

    SphereGrid(int n_phi_, int n_lam_);

    double dphi() const;
    double dlam() const;
    double phi(int p) const;
    double lam(int q) const;
    int n_nodes() const { return (n_phi - 1) * n_lam; }
    int index(int p, int q) const;  // p in 1..n_phi-1, q periodic

    double weight(int p) const;  // sin(phi_p)*dphi*dlam
    double weight_sum() const;   // -> 4pi under refinement
};

// Nodes strictly inside the lune 0 < lambda < alpha (the two bounding
// half great circles are Dirichlet boundary).
std::vector<bool> lune_mask(const SphereGrid& g, double alpha);

// First Dirichlet eigenvalue of the masked node set by inverse power
// iteration on the symmetrized Laplace-Beltrami operator, with
// conjugate-gradient inner solves and an all-ones start vector.
// Converged when successive Rayleigh quotients differ by < 1e-8.
// Throws if the mask is empty/disconnected or iteration stagnates.
double lambda1_masked(const SphereGrid& g, const std::vector<bool>& mask);

// k disjoint open arcs 0 <= a_1 < b_1 <= a_2 < ... <= a_k < b_k <= 2pi.
struct ArcPartition {
    std::vector<std::pair<double, double>> arcs;

    void validate() const;  // throws on overlap/empty arc/out of range
    int k() const { return static_cast<int>(arcs.size()); }
};

// Candidate domain on S^2: a lune of angle alpha (rotations immaterial
// for its eigenvalue) or an explicit node mask.
struct SphereDomain {
    enum class Kind { lune, mask } kind;
    double alpha = 0.0;
    std::vector<bool> mask;

    static SphereDomain make_lune(double a) { return {Kind::lune, a, {}}; }
    static SphereDomain make_mask(std::vector<bool> m) {
        return {Kind::mask, 0.0, std::move(m)};
    }
};

// max_i lambda1(omega_i): an upper bound for L_k when the candidate is a
// genuine partition.
double partition_value(const ArcPartition& p);
double partition_value(const std::vector<SphereDomain>& parts, const SphereGrid& g);

// (2/k) sum_i gamma(lambda1(omega_i)): an upper bound for beta(k, N).
double beta_value(const ArcPartition& p, int dim);
double beta_value(const std::vector<SphereDomain>& parts, const SphereGrid& g, int dim);

// Minimize max_i lambda1 over k-arc partitions of S^1 by coordinate
// descent (close gaps, then balance shared endpoints) from n_starts
// random starts. Returns the best candidate, normalized so the first
// endpoint is 0. Expected optimum: k equal arcs, value k^2/4.
std::pair<ArcPartition, double> optimize_arcs(int k, int n_starts, uint64_t seed);

struct LkMonotonicityReport {
    std::vector<double> values;  // optimize_arcs values for k = 2..k_max
    bool strictly_increasing = false;
    double L2_sphere = 0.0;  // gamma_inverse(1, 3) = 2
    double L3_sphere = 0.0;  // Y-partition value 15/4
    bool sphere_step_ok = false;
};

// Checks L_k(S^1) strictly increasing for k = 2..k_max and L_3 > L_2 on
// S^2. Requires k_max >= 3.
LkMonotonicityReport monotonicity_Lk_check(int k_max, uint64_t seed = 1);

}  // namespace seglab
