#include "seglab/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace seglab {

bool is_half_integer(double d) {
    return d > 0.0 && std::abs(2.0 * d - std::round(2.0 * d)) < 1e-9;
}

int cone_count(double d) {
    if (!is_half_integer(d)) throw std::domain_error("cone_count: d must be a positive half-integer");
    return static_cast<int>(std::lround(2.0 * d));
}

double psi_d_abs(double r, double theta, double d, double theta0) {
    return std::pow(r, d) * std::abs(std::sin(d * (theta - theta0))) / std::sqrt(M_PI);
}

int cone_index(double theta, double d, double theta0) {
    const int nc = cone_count(d);
    double t = (theta - theta0) * d / M_PI;  // cone boundaries at integers
    double c = std::floor(t);
    int ci = static_cast<int>(c) % nc;
    if (ci < 0) ci += nc;
    return ci;
}

std::vector<int> default_assignment(double d, int k) {
    const int nc = cone_count(d);
    std::vector<int> a(static_cast<size_t>(nc));
    if (nc == 1 || k == 1) {
        a[0] = 0;
    } else if (nc % 2 == 0) {
        // a 2-coloring works for any k >= 2
        for (int c = 0; c < nc; ++c) a[static_cast<size_t>(c)] = c % 2;
    } else {
        // odd cycle: 2-color all but the last cone, which takes a third component
        if (k < 3) throw std::domain_error("default_assignment: an odd cone cycle needs k >= 3");
        for (int c = 0; c + 1 < nc; ++c) a[static_cast<size_t>(c)] = c % 2;
        a[static_cast<size_t>(nc - 1)] = 2;
    }
    return a;
}

void check_assignment(const std::vector<int>& assignment, double d, int k) {
    const int nc = cone_count(d);
    if (static_cast<int>(assignment.size()) != nc)
        throw std::domain_error("assignment must cover all 2d cones");
    for (int c = 0; c < nc; ++c) {
        int ac = assignment[static_cast<size_t>(c)];
        if (ac < 0 || ac >= k) throw std::domain_error("assignment: component index out of range");
        // adjacency is cyclic only when the cones tile the full circle
        int next = (c + 1) % nc;
        if (nc > 1 && ac == assignment[static_cast<size_t>(next)])
            throw std::domain_error("assignment: adjacent cones must map to distinct components");
    }
}

MultiField make_profile_field(const PolarGrid2D& g, double d, int k,
                              const std::vector<int>& assignment,
                              double theta0, double amplitude) {
    check_assignment(assignment, d, k);
    MultiField out(g, k);
    for (int j = 1; j <= g.n_r; ++j)
        for (int m = 0; m < g.n_theta; ++m) {
            int c = cone_index(g.theta(m), d, theta0);
            int i = assignment[static_cast<size_t>(c)];
            out.comp(i).at(j, m) = amplitude * psi_d_abs(g.radius(j), g.theta(m), d, theta0);
        }
    // pole value is 0 for every component (Psi_d vanishes at the origin)
    return out;
}

}  // namespace seglab
