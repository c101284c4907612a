#pragma once

#include <string>
#include <vector>

#include "seglab/grid.hpp"

namespace seglab {

// Best fit of a unit-scale field against a segregated profile
// (chi_{A_1},...,chi_{A_k})|Psi_d|.
struct ProfileFit {
    double d = 0.0;
    double theta0 = 0.0;          // in [0, pi/d)
    std::vector<int> assignment;  // cone -> component, 2d entries
    double relative_l2_residual = 0.0;
    double segregation_value = 0.0;  // int_{B_1} sum_{i<j} u_i^2 u_j^2
    bool tie_flag = false;  // some cone's leading component won by < 1%

    std::string to_json() const;
};

struct BlowdownFamily {
    std::vector<MultiField> members;  // unit-normalized: H(.,0,1) = 1
    std::vector<double> R_used;
    std::vector<double> R_skipped;  // window exceeded the source grid
};

// u_R(x) = u(Rx)/H(u,0,R)^{1/2} sampled on target for each R; members
// whose window R*target.r_max exceeds the source grid are skipped and
// recorded.
BlowdownFamily blowdown_family(const MultiField& u, std::span<const double> R_list,
                               const PolarGrid2D& target, double beta);

// theta0 by grid search over angular offsets (3-point parabolic
// refinement) minimizing the L^2(B_1) distance of sum_i u_i to
// |Psi_d(., theta - theta0)|; each nodal cone is then assigned to the
// component with the largest squared mass in it.
ProfileFit classify_profile(const MultiField& u_unit, double d);

// scale_factor * int_{B_1} sum_{i<j} u_i^2 u_j^2; pass
// scale_factor = H(u,0,R) * R^2 for a blow-down member at scale R.
double segregation_residual(const MultiField& u_unit, double scale_factor);

struct VanishingReport {
    std::vector<double> min_boundary_mass;  // per component, over the family
    std::vector<bool> vanishing;            // mass < threshold
    double threshold = 1e-4;
};

// Per-component min over the family of int_{dB_1} u_i^2; components
// below the threshold are flagged as asymptotically vanishing.
VanishingReport vanishing_diagnostic(const std::vector<MultiField>& family,
                                     double threshold = 1e-4);

// Nearest half-integer and |deviation| of a measured growth rate.
std::pair<double, double> quantization_check(double d_hat);

}  // namespace seglab
