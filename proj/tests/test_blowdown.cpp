#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "seglab/almgren.hpp"
#include "seglab/blowdown.hpp"
#include "seglab/profile.hpp"

using namespace seglab;

TEST_CASE("blow-down of a homogeneous profile reproduces itself") {
    PolarGrid2D g(256, 192, 4.0);
    double d = 1.0, theta0 = 0.3;
    MultiField u = make_profile_field(g, d, 2, default_assignment(d, 2), theta0);
    PolarGrid2D target(128, 192, 1.0);
    std::vector<double> R_list = {0.5, 1.0, 2.0, 8.0};  // last exceeds the grid
    BlowdownFamily fam = blowdown_family(u, R_list, target, 1.0);
    REQUIRE(fam.members.size() == 3);
    REQUIRE(fam.R_skipped == std::vector<double>{8.0});
    for (const MultiField& m : fam.members) {
        CHECK(compute_H(m, 1.0) == doctest::Approx(1.0).epsilon(2e-2));  // unit normalized
        ProfileFit fit = classify_profile(m, d);
        CHECK(fit.relative_l2_residual < 0.02);
        CHECK(fit.theta0 == doctest::Approx(theta0).epsilon(1e-2));
        CHECK(fit.assignment == std::vector<int>{0, 1});
        CHECK(!fit.tie_flag);
        CHECK(fit.segregation_value < 1e-12);  // supports are disjoint
    }
}

TEST_CASE("classification recovers a swapped assignment") {
    PolarGrid2D g(128, 192, 1.0);
    MultiField u = make_profile_field(g, 1.0, 2, {1, 0});
    ProfileFit fit = classify_profile(u, 1.0);
    CHECK(fit.assignment == std::vector<int>{1, 0});
    CHECK(fit.relative_l2_residual < 0.02);
}

TEST_CASE("classification against the wrong degree leaves a large residual") {
    PolarGrid2D g(128, 192, 1.0);
    MultiField u = make_profile_field(g, 2.0, 2, default_assignment(2.0, 2));
    ProfileFit good = classify_profile(u, 2.0);
    ProfileFit bad = classify_profile(u, 1.0);
    CHECK(good.relative_l2_residual < 0.02);
    CHECK(bad.relative_l2_residual > 0.2);
}

TEST_CASE("segregation residual scales linearly with the prefactor") {
    PolarGrid2D g(64, 64, 1.0);
    MultiField u(g, 2);  // overlapping constants
    for (int i = 0; i < 2; ++i) {
        u.comp(i).pole() = 1.0;
        for (int j = 1; j <= g.n_r; ++j)
            for (int m = 0; m < g.n_theta; ++m) u.comp(i).at(j, m) = 1.0;
    }
    double s1 = segregation_residual(u, 1.0);
    CHECK(s1 == doctest::Approx(M_PI).epsilon(1e-3));  // int_{B_1} 1
    CHECK(segregation_residual(u, 2.5) == doctest::Approx(2.5 * s1).epsilon(1e-13));
}

TEST_CASE("vanishing diagnostic flags an empty component") {
    PolarGrid2D g(64, 64, 1.0);
    MultiField u = make_profile_field(g, 1.0, 2, default_assignment(1.0, 2));
    MultiField w(g, 3);  // third component identically zero
    for (int i = 0; i < 2; ++i) w.comp(i) = u.comp(i);
    VanishingReport rep = vanishing_diagnostic({w});
    REQUIRE(rep.vanishing.size() == 3);
    CHECK(!rep.vanishing[0]);
    CHECK(!rep.vanishing[1]);
    CHECK(rep.vanishing[2]);
    CHECK(rep.min_boundary_mass[2] == 0.0);
}

TEST_CASE("quantization check finds the nearest half-integer") {
    auto [q1, dev1] = quantization_check(0.97);
    CHECK(q1 == 1.0);
    CHECK(dev1 == doctest::Approx(0.03).epsilon(1e-12));
    auto [q2, dev2] = quantization_check(1.55);
    CHECK(q2 == 1.5);
    CHECK(dev2 == doctest::Approx(0.05).epsilon(1e-9));
    auto [q3, dev3] = quantization_check(2.8);
    CHECK(q3 == 3.0);
}
