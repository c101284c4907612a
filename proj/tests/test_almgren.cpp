#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "seglab/almgren.hpp"
#include "seglab/profile.hpp"

using namespace seglab;

namespace {
MultiField psi_pair(const PolarGrid2D& g, double d) {
    return make_profile_field(g, d, 2, default_assignment(d, 2));
}
}  // namespace

TEST_CASE("H, E, N of a segregated profile match r^{2d}, d r^{2d}, d") {
    PolarGrid2D g(256, 256, 1.0);
    for (double d : {1.0, 2.0}) {
        MultiField u = psi_pair(g, d);
        for (double r : {0.25, 0.5, 0.75}) {
            CHECK(compute_H(u, r) == doctest::Approx(std::pow(r, 2 * d)).epsilon(5e-3));
            CHECK(compute_E(u, 10.0, r) ==
                  doctest::Approx(d * std::pow(r, 2 * d)).epsilon(2e-2));
            CHECK(compute_N(u, 10.0, r) == doctest::Approx(d).epsilon(2e-2));
        }
    }
}

TEST_CASE("node radii are snapped, increasing, and within range") {
    PolarGrid2D g(128, 64, 2.0);
    auto radii = node_radii_geometric(g, 0.2, 1.8, 8);
    REQUIRE(radii.size() > 10);
    for (size_t i = 0; i < radii.size(); ++i) {
        double snapped = std::lround(radii[i] / g.dr()) * g.dr();
        CHECK(radii[i] == doctest::Approx(snapped).epsilon(1e-12));
        if (i) CHECK(radii[i] > radii[i - 1]);
    }
    CHECK(radii.front() >= 0.2 - g.dr());
    CHECK(radii.back() <= 1.8 + g.dr());
}

TEST_CASE("frequency trace of a profile is flat and satisfies doubling") {
    PolarGrid2D g(256, 256, 1.0);
    MultiField u = psi_pair(g, 1.0);
    auto radii = node_radii_geometric(g, 0.1, 0.9, 8);
    AlmgrenTrace t = frequency_trace(u, 5.0, radii);
    CHECK(!t.truncated);
    CHECK(t.max_violation() < 5e-3);
    GrowthRate gr = growth_rate(t);
    CHECK(gr.d_hat == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(!gr.low_confidence);
    DoublingReport db = check_doubling(t, 1.0, 1e-2);
    CHECK(db.pass_i);
    CHECK(db.pass_ii);
    CHECK(db.pairs > 100);
}

TEST_CASE("doubling rejects a degree below the measured frequency") {
    PolarGrid2D g(128, 128, 1.0);
    MultiField u = psi_pair(g, 2.0);
    auto radii = node_radii_geometric(g, 0.2, 0.8, 8);
    AlmgrenTrace t = frequency_trace(u, 1.0, radii);
    CHECK_THROWS(check_doubling(t, 1.0, 1e-2));  // N is ~2 on this trace
}

TEST_CASE("zero field truncates the trace") {
    PolarGrid2D g(32, 32, 1.0);
    MultiField u(g, 2);
    std::vector<double> radii = {0.25, 0.5, 0.75};
    AlmgrenTrace t = frequency_trace(u, 1.0, radii);
    CHECK(t.truncated);
    CHECK(t.radii.empty());
}

TEST_CASE("superharmonic weight is continuous with matched slope") {
    for (int dim : {2, 3}) {
        double below = f_weight(1.0 - 1e-8, dim), above = f_weight(1.0 + 1e-8, dim);
        CHECK(below == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(above == doctest::Approx(1.0).epsilon(1e-7));
        double slope_below = (f_weight(1.0, dim) - f_weight(1.0 - 1e-6, dim)) * 1e6;
        double slope_above = (f_weight(1.0 + 1e-6, dim) - f_weight(1.0, dim)) * 1e6;
        CHECK(slope_below == doctest::Approx(slope_above).epsilon(1e-4));
    }
    CHECK(f_weight(2.0, 3) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f_weight(0.5, 2) == doctest::Approx(1.0).epsilon(1e-14));  // identically 1 in 2d
}

TEST_CASE("ACF product of a harmonic pair is monotone for q < 2") {
    PolarGrid2D g(128, 128, 3.0);
    MultiField u = psi_pair(g, 1.0);
    auto radii = node_radii_geometric(g, 1.1, 2.7, 8);
    std::vector<int> group = {0, 1};
    AcfDiagnostics acf = acf_diagnostics(u, 1.0, group, 1.8, radii);
    CHECK(acf.monotone_from(1e-3) <= acf.radii.front() + 1e-12);
    CHECK(acf.worst_upper_bound_margin() > -0.05);
    // Lambda of the half-plane profile is ~1 = gamma^{-1}(1) in 2d
    for (double L : acf.Lambda[0]) CHECK(L == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("trace csv writes one row per radius") {
    PolarGrid2D g(64, 64, 1.0);
    MultiField u = psi_pair(g, 1.0);
    std::vector<double> radii = {0.25, 0.5};
    AlmgrenTrace t = frequency_trace(u, 1.0, radii);
    std::stringstream ss;
    write_trace_csv(t, ss);
    std::string line;
    int rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 3);  // header + 2 radii
}
