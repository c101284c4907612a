#include "seglab/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace seglab {

PolarGrid2D::PolarGrid2D(int n_r_, int n_theta_, double r_max_)
    : n_r(n_r_), n_theta(n_theta_), r_max(r_max_) {
    if (n_r < 8) throw std::invalid_argument("PolarGrid2D: n_r must be >= 8");
    if (n_theta < 16 || n_theta % 2 != 0)
        throw std::invalid_argument("PolarGrid2D: n_theta must be even and >= 16");
    if (!(r_max > 0.0)) throw std::invalid_argument("PolarGrid2D: r_max must be positive");
}

MultiField::MultiField(const PolarGrid2D& g, int k) : grid_(g) {
    if (k < 1) throw std::invalid_argument("MultiField: k must be positive");
    comp_.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) comp_.emplace_back(g);
}

void MultiField::check_valid() const {
    for (const auto& c : comp_)
        for (double x : c.raw()) {
            if (!std::isfinite(x)) throw std::domain_error("MultiField: non-finite value");
            if (x < 0.0) throw std::domain_error("MultiField: negative value");
        }
}

double integrate_circle(const ScalarField& f, double r) {
    const auto& g = f.grid();
    if (!(r > 0.0) || r > g.r_max * (1.0 + 1e-12))
        throw std::domain_error("integrate_circle: r outside (0, r_max]");
    r = std::min(r, g.r_max);
    const double dr = g.dr();
    int j = std::min(static_cast<int>(std::floor(r / dr)), g.n_r - 1);
    double w = r / dr - j;
    // fixed m-ascending order keeps the reduction bit-reproducible
    double sum = 0.0;
    for (int m = 0; m < g.n_theta; ++m)
        sum += (1.0 - w) * f.at(j, m) + w * f.at(j + 1, m);
    return sum * r * g.dtheta();
}

double integrate_disk(const ScalarField& f, double r) {
    const auto& g = f.grid();
    if (!(r > 0.0) || r > g.r_max * (1.0 + 1e-12))
        throw std::domain_error("integrate_disk: r outside (0, r_max]");
    r = std::min(r, g.r_max);
    const double dr = g.dr();
    const int J = std::min(static_cast<int>(std::floor(r / dr + 1e-12)), g.n_r);
    double sum = 0.0;
    for (int j = 1; j <= J; ++j) {
        double ring = 0.0;
        for (int m = 0; m < g.n_theta; ++m) ring += f.at(j, m);
        double wj = (j == J) ? 0.5 : 1.0;
        sum += wj * ring * g.radius(j) * dr * g.dtheta();
    }
    sum += f.pole() * M_PI * (dr / 2.0) * (dr / 2.0);
    return sum;
}

ScalarField gradient_sq(const ScalarField& u) {
    const auto& g = u.grid();
    const double dr = g.dr();
    const double dt = g.dtheta();
    ScalarField out(g);
    for (int j = 1; j <= g.n_r; ++j) {
        const double rj = g.radius(j);
        for (int m = 0; m < g.n_theta; ++m) {
            double dur;
            if (j == g.n_r)
                dur = (u.at(j, m) - u.at(j - 1, m)) / dr;
            else
                dur = (u.at(j + 1, m) - u.at(j - 1, m)) / (2.0 * dr);
            double dut = (u.at(j, m + 1) - u.at(j, m - 1)) / (2.0 * dt);
            out.at(j, m) = dur * dur + (dut / rj) * (dut / rj);
        }
    }
    // pole: least-squares Cartesian gradient from the first ring
    double a = 0.0, b = 0.0;
    for (int m = 0; m < g.n_theta; ++m) {
        double d = (u.at(1, m) - u.pole()) / dr;
        a += d * std::cos(g.theta(m));
        b += d * std::sin(g.theta(m));
    }
    a *= 2.0 / g.n_theta;
    b *= 2.0 / g.n_theta;
    out.pole() = a * a + b * b;
    return out;
}

ScalarField gradient_sq_sum(const MultiField& u) {
    ScalarField out(u.grid());
    for (int i = 0; i < u.k(); ++i) {
        ScalarField gi = gradient_sq(u.comp(i));
        auto dst = out.raw();
        auto src = gi.raw();
        for (size_t n = 0; n < dst.size(); ++n) dst[n] += src[n];
    }
    return out;
}

ScalarField laplacian(const ScalarField& u) {
    const auto& g = u.grid();
    const double dr = g.dr();
    const double dt = g.dtheta();
    ScalarField out(g);
    for (int j = 1; j < g.n_r; ++j) {
        const double rj = g.radius(j);
        for (int m = 0; m < g.n_theta; ++m) {
            double urr = (u.at(j + 1, m) - 2.0 * u.at(j, m) + u.at(j - 1, m)) / (dr * dr);
            double ur = (u.at(j + 1, m) - u.at(j - 1, m)) / (2.0 * dr);
            double utt = (u.at(j, m + 1) - 2.0 * u.at(j, m) + u.at(j, m - 1)) / (dt * dt);
            out.at(j, m) = urr + ur / rj + utt / (rj * rj);
        }
    }
    double ring1 = 0.0;
    for (int m = 0; m < g.n_theta; ++m) ring1 += u.at(1, m);
    ring1 /= g.n_theta;
    out.pole() = 4.0 * (ring1 - u.pole()) / (dr * dr);
    return out;
}

double sample_at(const ScalarField& u, double r, double theta) {
    const auto& g = u.grid();
    if (r < 0.0 || r > g.r_max * (1.0 + 1e-12))
        throw std::domain_error("sample_at: r outside [0, r_max]");
    r = std::min(r, g.r_max);
    const double dr = g.dr();
    const double dt = g.dtheta();
    int j = std::min(static_cast<int>(std::floor(r / dr)), g.n_r - 1);
    double wr = r / dr - j;
    double tn = theta / dt;
    int m = static_cast<int>(std::floor(tn));
    double wt = tn - m;
    double f00 = u.at(j, m), f01 = u.at(j, m + 1);
    double f10 = u.at(j + 1, m), f11 = u.at(j + 1, m + 1);
    return (1.0 - wr) * ((1.0 - wt) * f00 + wt * f01) +
           wr * ((1.0 - wt) * f10 + wt * f11);
}

MultiField sample_rescaled(const MultiField& u, double R,
                           const PolarGrid2D& target, double norm) {
    const auto& src = u.grid();
    if (!(norm > 0.0)) throw std::domain_error("sample_rescaled: norm must be positive");
    if (R * target.r_max > src.r_max * (1.0 + 1e-12))
        throw std::domain_error("sample_rescaled: window exceeds source grid");
    MultiField out(target, u.k());
    for (int i = 0; i < u.k(); ++i) {
        const auto& ui = u.comp(i);
        auto& oi = out.comp(i);
        oi.pole() = ui.pole() / norm;
        for (int j = 1; j <= target.n_r; ++j) {
            double rs = std::min(R * target.radius(j), src.r_max);
            for (int m = 0; m < target.n_theta; ++m)
                oi.at(j, m) = sample_at(ui, rs, target.theta(m)) / norm;
        }
    }
    return out;
}

void write_field_csv(const MultiField& u, std::ostream& os) {
    const auto& g = u.grid();
    os << "j,m,r,theta";
    for (int i = 0; i < u.k(); ++i) os << ",u" << (i + 1);
    os << "\n";
    char buf[32];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << ',' << buf;
    };
    for (int j = 0; j <= g.n_r; ++j)
        for (int m = 0; m < g.n_theta; ++m) {
            os << j << ',' << m;
            put(g.radius(j));
            put(g.theta(m));
            for (int i = 0; i < u.k(); ++i) put(u.comp(i).at(j, m));
            os << "\n";
        }
}

MultiField read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("field csv: empty stream");
    int k = 0;
    {
        std::stringstream hs(line);
        std::string tok;
        int cols = 0;
        while (std::getline(hs, tok, ',')) ++cols;
        k = cols - 4;
        if (k < 1) throw std::runtime_error("field csv: bad header");
    }
    struct Row {
        int j, m;
        std::vector<double> u;
    };
    std::vector<Row> rows;
    int max_j = 0, n_theta = 0;
    double r_max = 0.0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string tok;
        Row row;
        std::getline(ls, tok, ',');
        row.j = std::stoi(tok);
        std::getline(ls, tok, ',');
        row.m = std::stoi(tok);
        std::getline(ls, tok, ',');
        r_max = std::max(r_max, std::stod(tok));
        std::getline(ls, tok, ',');
        for (int i = 0; i < k; ++i) {
            std::getline(ls, tok, ',');
            row.u.push_back(std::stod(tok));
        }
        max_j = std::max(max_j, row.j);
        n_theta = std::max(n_theta, row.m + 1);
        rows.push_back(std::move(row));
    }
    PolarGrid2D g(max_j, n_theta, r_max);
    MultiField out(g, k);
    for (const auto& row : rows)
        for (int i = 0; i < k; ++i) out.comp(i).at(row.j, row.m) = row.u[static_cast<size_t>(i)];
    return out;
}

}  // namespace seglab
