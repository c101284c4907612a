#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>
#include <iosfwd>

namespace seglab {

// Structured polar grid on the disk B_{r_max}. Nodes r_j = j*dr for
// j = 0..n_r and theta_m = m*dtheta for m = 0..n_theta-1 (periodic).
// The origin (j = 0) is a single shared node.
struct PolarGrid2D {
    int n_r;
    int n_theta;
    double r_max;

    PolarGrid2D(int n_r_, int n_theta_, double r_max_);

    double dr() const { return r_max / n_r; }
    double dtheta() const { return 2.0 * M_PI / n_theta; }
    double radius(int j) const { return j * dr(); }
    double theta(int m) const { return m * dtheta(); }
    int n_nodes() const { return 1 + n_r * n_theta; }

    bool operator==(const PolarGrid2D&) const = default;
};

// One scalar field sampled on a PolarGrid2D. The pole value is stored
// once; at(0, m) refers to it for every m.
class ScalarField {
public:
    explicit ScalarField(const PolarGrid2D& g, double fill = 0.0)
        : grid_(g), v_(static_cast<size_t>(g.n_nodes()), fill) {}

    const PolarGrid2D& grid() const { return grid_; }

    double& at(int j, int m) { return v_[index(j, m)]; }
    double at(int j, int m) const { return v_[index(j, m)]; }
    double& pole() { return v_[0]; }
    double pole() const { return v_[0]; }

    std::span<double> raw() { return v_; }
    std::span<const double> raw() const { return v_; }

private:
    size_t index(int j, int m) const {
        if (j == 0) return 0;
        int mm = m % grid_.n_theta;
        if (mm < 0) mm += grid_.n_theta;
        return 1 + static_cast<size_t>(j - 1) * grid_.n_theta + mm;
    }

    PolarGrid2D grid_;
    std::vector<double> v_;
};

// k nonnegative components sharing one grid; houses (u_1,...,u_k).
class MultiField {
public:
    MultiField(const PolarGrid2D& g, int k);

    const PolarGrid2D& grid() const { return grid_; }
    int k() const { return static_cast<int>(comp_.size()); }
    ScalarField& comp(int i) { return comp_[static_cast<size_t>(i)]; }
    const ScalarField& comp(int i) const { return comp_[static_cast<size_t>(i)]; }

    // Throws if any value is non-finite or negative.
    void check_valid() const;

private:
    PolarGrid2D grid_;
    std::vector<ScalarField> comp_;
};

// Trapezoidal quadrature of f over the circle of radius r (linear
// interpolation between the two adjacent rings). Includes the arc-length
// factor r*dtheta but no 1/r^{N-1} normalization.
double integrate_circle(const ScalarField& f, double r);

// Quadrature of f over the disk of radius r: full node weights
// r_j*dr*dtheta on rings with r_j <= r, half weight on the outermost
// included ring, and the pole cell treated as a disk of radius dr/2.
double integrate_disk(const ScalarField& f, double r);

// |grad u|^2 = (d_r u)^2 + (d_theta u / r)^2 by centered differences,
// one-sided at j = n_r; at the pole the Cartesian gradient is estimated
// from the first ring.
ScalarField gradient_sq(const ScalarField& u);

// Sum of |grad u_i|^2 over components.
ScalarField gradient_sq_sum(const MultiField& u);

// Discrete Laplacian: 5-point polar stencil in the interior, mean-over-
// first-ring closure at the pole. The boundary row j = n_r is set to 0.
ScalarField laplacian(const ScalarField& u);

// Bilinear sample of u(R x)/norm onto the target grid. Requires
// R * target.r_max <= source r_max.
MultiField sample_rescaled(const MultiField& u, double R,
                           const PolarGrid2D& target, double norm);

// Bilinear point evaluation at (r, theta); r must lie in [0, r_max].
double sample_at(const ScalarField& u, double r, double theta);

// CSV snapshot: header j,m,r,theta,u1,...,uk, row-major in (j,m), the
// pole row j = 0 repeated for every m.
void write_field_csv(const MultiField& u, std::ostream& os);
MultiField read_field_csv(std::istream& is);

}  // namespace seglab
