#pragma once

#include <span>
#include <vector>
#include <iosfwd>

#include "seglab/grid.hpp"

namespace seglab {

// Almgren quantities at the origin in dimension 2:
//   H(r) = (1/r) * int_{dB_r} sum u_i^2
//   E(r) = int_{B_r} sum |grad u_i|^2 + beta * sum_{i<j} u_i^2 u_j^2
//   N(r) = E(r)/H(r)
double compute_H(const MultiField& u, double r);
double compute_E(const MultiField& u, double beta, double r);
double compute_N(const MultiField& u, double beta, double r);

struct AlmgrenTrace {
    std::vector<double> radii;
    std::vector<double> H, E, N;
    double beta = 0.0;
    bool truncated = false;  // hit H = 0 and dropped the remaining radii

    // largest max(0, N(r_i) - N(r_{i+1})) over consecutive radii
    double max_violation() const;
};

AlmgrenTrace frequency_trace(const MultiField& u, double beta,
                             std::span<const double> radii);

// Geometric (log-uniform) radii snapped to grid nodes, so that
// consecutive octaves give exact ratio-2 pairs up to snapping.
std::vector<double> node_radii_geometric(const PolarGrid2D& g, double r_lo,
                                         double r_hi, int per_octave);

// Doubling bounds for a frequency trace, in log form:
//  (i)  log H(r2) - log H(r1) >= 2 N(r1) log(r2/r1) - slack
//  (ii) log H(r2) - log H(r1) <= 2 d log(r2/r1) + d + slack
// over every ordered pair r1 < r2. Requires d >= max N - slack on the trace.
struct DoublingReport {
    bool pass_i = true, pass_ii = true;
    double worst_margin_i = 0.0;   // most negative slack-free margin of (i)
    double worst_margin_ii = 0.0;  // most negative slack-free margin of (ii)
    int pairs = 0;
};
DoublingReport check_doubling(const AlmgrenTrace& trace, double d,
                              double slack = 0.0);

struct GrowthRate {
    double d_hat = 0.0;
    double plateau_quality = 0.0;  // max - min of N over the plateau window
    bool low_confidence = false;   // plateau_quality > 0.2
};

// Plateau estimate of N(+infinity): median of N over the top third of
// radii after dropping the outermost 10% (truncation pollutes r near
// r_max). Needs at least 10 radii.
GrowthRate growth_rate(const AlmgrenTrace& trace);

// Superharmonic radial weight: f(r) = (2-N)/2 r^2 + N/2 for r <= 1,
// r^{2-N} for r > 1. Continuous with continuous derivative at r = 1.
double f_weight(double r, int dim);

// Alt-Caffarelli-Friedman style diagnostics for a group of components:
//   Lambda_i(r) = r^2 int_{dB_r}(|grad_theta u_i|^2 + u_i^2 g_i) / int_{dB_r} u_i^2
//   J_i(r)      = int_{B_r} f(|x|) (|grad u_i|^2 + u_i^2 g_i)
// with g_i = beta * sum_{j != i} u_j^2, and the product prod_i r^{-q} J_i(r).
struct AcfDiagnostics {
    std::vector<int> group;
    double q = 0.0;
    std::vector<double> radii;                  // all > 1
    std::vector<std::vector<double>> Lambda;    // [component][radius]
    std::vector<std::vector<double>> J;         // [component][radius]
    std::vector<std::vector<double>> boundary;  // int_{dB_r} f (|grad u_i|^2 + u_i^2 g_i)
    std::vector<double> product;                // prod_i r^{-q} J_i(r)

    // largest radius r' such that the product is non-decreasing (within
    // rel_slack relative drops) from r' on; radii.front() if everywhere
    double monotone_from(double rel_slack = 0.0) const;

    // worst margin of J_i(r) <= r/(2 gamma(Lambda_i(r))) * boundary term,
    // relative to J_i(r); >= 0 means the inequality holds everywhere
    double worst_upper_bound_margin() const;
};

AcfDiagnostics acf_diagnostics(const MultiField& u, double beta,
                               std::span<const int> group, double q,
                               std::span<const double> radii);

// CSV: r,H,E,N
void write_trace_csv(const AlmgrenTrace& t, std::ostream& os);
// CSV: r,Lambda_i...,J_i...,product
void write_acf_csv(const AcfDiagnostics& d, std::ostream& os);

}  // namespace seglab
