#pragma once

#include <vector>

#include "seglab/grid.hpp"

namespace seglab {

// Psi_d(r,theta) = (1/sqrt(pi)) r^d sin(d theta). For half-integer d this
// is single-valued on [0, 2pi) only through |Psi_d|, which is what the
// segregated profiles use. The 2d nodal cones of |sin(d(theta-theta0))|
// are numbered counterclockwise from theta0.
double psi_d_abs(double r, double theta, double d, double theta0 = 0.0);

// Number of nodal cones (= 2d, which must be a positive integer).
int cone_count(double d);

// Cone containing theta, in 0..2d-1.
int cone_index(double theta, double d, double theta0 = 0.0);

// True iff d is a positive multiple of 1/2 (up to tolerance).
bool is_half_integer(double d);

// cone c -> component (alternating for even cone counts, round-robin
// otherwise); adjacent cones always get distinct components for k >= 2.
std::vector<int> default_assignment(double d, int k);

// Throws unless the assignment covers all 2d cones and adjacent cones
// (cyclically) map to distinct components.
void check_assignment(const std::vector<int>& assignment, double d, int k);

// The segregated field (chi_{A_i})|Psi_d| sampled on g.
MultiField make_profile_field(const PolarGrid2D& g, double d, int k,
                              const std::vector<int>& assignment,
                              double theta0 = 0.0, double amplitude = 1.0);

}  // namespace seglab
