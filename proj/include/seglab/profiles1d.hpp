#pragma once

#include <iosfwd>
#include <vector>

namespace seglab {

// One trajectory of u'' = u v^2, v'' = u^2 v with u(0) = v(0) = a,
// u'(0) = m = -v'(0). shoot() fills the forward window [0, x_end];
// find_profile() returns the full window [-X, X].
struct OdeTrajectory {
    enum class Tag { reached_end, too_large, too_small };

    std::vector<double> x, u, v;
    double m = 0.0;  // shooting parameter u'(0)
    double a = 0.0;
    double b = 0.0;                // asymptotic slope of u
    double symmetry_defect = 0.0;  // sup_{|x| <= X/2} |u(x) - v(-x)|
    double x_switch = 0.0;         // start of the asymptotic continuation
    Tag tag = Tag::reached_end;
};

// RK4 with fixed step h until x = X or the first dichotomy event:
//   v <= 0                    -> too_large
//   v' >= 0 while v < a/2     -> too_small
//   overflow                  -> too_small if v' >= 0, else too_large
OdeTrajectory shoot(double m, double a, double X, double h);

// Bisection on m between the two shoot tags, then assembly of the
// critical trajectory on [-X, X]. Direct integration only reaches the
// point where v ~ 1e-4*a (the critical orbit is a separatrix); beyond
// it u is continued linearly and v by backward integration of
// v'' = u^2 v from X, scaled to match at the switch point. The x < 0
// half is integrated leftward with its own mirrored continuation.
// Throws if no bracket is found or the defect exceeds tol.
OdeTrajectory find_profile(double a, double X, double tol, double h = 1e-3);

// Radial decay bound experiment: solve v'' + ((N-1)/rho) v' = K v on
// (0, 2r) with v'(0) = 0, v(2r) = A (series start at the origin, RK4,
// rescaled by linearity). Returns sup_{B_r} v = v(r) and the coefficient
// C = v(r) e^{sqrt(K) r} / A of the bound C A e^{-sqrt(K) r}.
struct DecayResult {
    double sup_Br = 0.0;
    double bound_coeff = 0.0;
};
DecayResult decay_experiment(double K, double A, double r, int dim);

// Least-squares slope of log v(r) against sqrt(K) over the given K values
// (expected ~ -r).
double decay_slope_fit(const std::vector<double>& K_list, double A, double r, int dim);

// CSV: x,u,v
void write_trajectory_csv(const OdeTrajectory& t, std::ostream& os);

}  // namespace seglab
