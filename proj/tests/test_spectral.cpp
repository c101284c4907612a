#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "seglab/spectral.hpp"

using namespace seglab;

TEST_CASE("gamma exponent and its inverse") {
    CHECK(gamma_exponent(4.0, 2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(gamma_exponent(2.0, 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_exponent(0.0, 3) == doctest::Approx(0.0));
    CHECK(gamma_inverse(1.5, 3) == doctest::Approx(1.5 * 2.5).epsilon(1e-14));
    for (double t : {0.3, 1.0, 2.7, 9.0})
        for (int dim : {2, 3, 4})
            CHECK(gamma_inverse(gamma_exponent(t, dim), dim) ==
                  doctest::Approx(t).epsilon(1e-12));
    // strictly increasing
    CHECK(gamma_exponent(2.0, 3) < gamma_exponent(2.1, 3));
}

TEST_CASE("closed-form eigenvalues of arcs and lunes") {
    CHECK(lambda1_arc(M_PI) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lambda1_arc(2.0 * M_PI) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(lambda1_lune(M_PI) == doctest::Approx(2.0).epsilon(1e-14));          // hemisphere
    CHECK(lambda1_lune(2.0 * M_PI / 3) == doctest::Approx(3.75).epsilon(1e-14));  // Y lune
    CHECK_THROWS(lambda1_arc(0.0));
    CHECK_THROWS(lambda1_lune(-1.0));
}

TEST_CASE("sphere grid weights sum to the sphere area") {
    SphereGrid g(64, 128);
    CHECK(g.weight_sum() == doctest::Approx(4.0 * M_PI).epsilon(1e-3));
    SphereGrid f(128, 256);
    CHECK(std::abs(f.weight_sum() - 4.0 * M_PI) < std::abs(g.weight_sum() - 4.0 * M_PI));
}

TEST_CASE("discrete lune eigenvalue matches the closed form") {
    SphereGrid g(48, 48);
    for (double alpha : {M_PI, 2.0 * M_PI / 3}) {
        double lam = lambda1_masked(g, lune_mask(g, alpha));
        CHECK(lam == doctest::Approx(lambda1_lune(alpha)).epsilon(0.03));
    }
    CHECK_THROWS(lambda1_masked(g, std::vector<bool>(static_cast<size_t>(g.n_nodes()), false)));
}

TEST_CASE("arc partition validation") {
    ArcPartition ok{{{0.0, 2.0}, {2.5, 5.0}}};
    ok.validate();
    CHECK(ok.k() == 2);
    ArcPartition overlap{{{0.0, 3.0}, {2.5, 5.0}}};
    CHECK_THROWS(overlap.validate());
    ArcPartition empty_arc{{{1.0, 1.0}}};
    CHECK_THROWS(empty_arc.validate());
    ArcPartition past{{{0.0, 7.0}}};
    CHECK_THROWS(past.validate());  // past 2pi
}

TEST_CASE("partition and beta values of the equal 3-arc partition") {
    ArcPartition p{{{0.0, 2 * M_PI / 3}, {2 * M_PI / 3, 4 * M_PI / 3}, {4 * M_PI / 3, 2 * M_PI}}};
    CHECK(partition_value(p) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(beta_value(p, 2) == doctest::Approx(3.0).epsilon(1e-14));  // (2/3)*3*gamma(9/4)
}

TEST_CASE("arc optimizer finds the equal partition") {
    for (int k : {2, 3, 5}) {
        auto [p, val] = optimize_arcs(k, 6, 42 + static_cast<uint64_t>(k));
        p.validate();
        CHECK(val == doctest::Approx(k * k / 4.0).epsilon(1e-9));
        for (auto [a, b] : p.arcs)
            CHECK(b - a == doctest::Approx(2.0 * M_PI / k).epsilon(1e-6));
    }
}

TEST_CASE("L_k monotonicity report") {
    LkMonotonicityReport rep = monotonicity_Lk_check(5, 3);
    REQUIRE(rep.values.size() == 4);  // k = 2..5
    CHECK(rep.strictly_increasing);
    CHECK(rep.values[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.L2_sphere == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.L3_sphere == doctest::Approx(3.75).epsilon(1e-12));
    CHECK(rep.sphere_step_ok);
}
