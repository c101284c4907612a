#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seglab/grid.hpp"

namespace seglab {

// How the per-sweep relaxation factor is chosen. Backtracking starts at
// the SOR-optimal factor and halves it (toward 1) whenever a sweep fails
// to decrease the energy; Fixed uses the given factor throughout.
struct StepRule {
    enum class Kind { fixed, backtracking } kind = Kind::backtracking;
    double omega = 1.0;  // used by Kind::fixed; must lie in (0, 2)
};

// Gaussian bump added to the initial guess of one component (used to
// seed components that the boundary data leaves empty).
struct InteriorSeed {
    int component = 0;
    double r = 0.5, theta = 0.0;  // center, polar coordinates
    double width = 0.1;
    double amplitude = 0.1;
};

struct SolveConfig {
    double beta = 1.0;
    std::vector<double> beta_schedule;  // strictly increasing, ends at beta
    double tol_grad = 1e-8;             // sup norm of the projected residual
    int max_iter = 100000;              // total sweeps across the schedule
    StepRule step_rule;
    std::vector<InteriorSeed> seeds;

    void validate() const;  // throws on an inconsistent config
};

// Dirichlet data on the outer ring: either the trace of a segregated
// profile (chi_{A_i})|Psi_d| or explicit per-component arrays.
struct BoundarySpec {
    enum class Kind { profile, explicit_trace } kind = Kind::profile;
    // profile
    double d = 1.0;
    std::vector<int> assignment;  // empty -> default alternating assignment
    double theta0 = 0.0;
    // explicit_trace
    std::vector<std::vector<double>> trace;  // [component][m], size n_theta
    double amplitude = 1.0;

    // Per-component boundary values at the n_theta outer nodes.
    std::vector<std::vector<double>> trace_values(const PolarGrid2D& g, int k) const;
};

struct SolveReport {
    int iterations = 0;  // energy-decreasing sweeps accepted
    double final_energy = 0.0;
    double final_residual = 0.0;  // projected PDE residual, sup norm
    bool converged = false;
    std::vector<double> beta_schedule;

    std::string to_json() const;
};

// int_{B_{r_max}} [ 1/2 sum |grad u_i|^2 + (beta/2) sum_{i<j} u_i^2 u_j^2 ]
// in the edge/node form whose exact gradient the solver descends.
double energy(const MultiField& u, double beta);

// Minimize the energy with the boundary row fixed, by projected SOR
// sweeps (exact per-node minimization, over-relaxed, clamped at 0),
// following cfg.beta_schedule. Nonnegativity and energy descent hold at
// every accepted sweep.
// warm_start (optional) replaces the default ramp initial guess, e.g. to
// continue a beta schedule from an earlier solve; its boundary row is
// overwritten by the trace.
std::pair<MultiField, SolveReport> solve_dirichlet(const PolarGrid2D& g, int k,
                                                   const BoundarySpec& boundary,
                                                   const SolveConfig& cfg,
                                                   const MultiField* warm_start = nullptr);

// sup over interior nodes of |Delta u_i - beta sum_{j != i} u_j^2 u_i|,
// with the one-sided (projected) value at nodes clamped to 0.
double pde_residual(const MultiField& u, double beta);

// Average of u over the symmetry group generated by
//   T: u_i(z) -> u_{i+1}(G_{pi/d} z)  and  S: u_i(z) -> u_{k-i+1}(conj z).
// Fixed points satisfy both relations exactly on grid nodes. Requires
// n_theta divisible by 4d.
MultiField equivariance_project(const MultiField& u, double d);

}  // namespace seglab
