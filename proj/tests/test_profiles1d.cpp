#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "seglab/profiles1d.hpp"

using namespace seglab;

TEST_CASE("shooting dichotomy brackets the critical slope") {
    OdeTrajectory big = shoot(5.0, 1.0, 20.0, 1e-3);
    CHECK(big.tag == OdeTrajectory::Tag::too_large);
    OdeTrajectory small = shoot(0.1, 1.0, 20.0, 1e-3);
    CHECK(small.tag == OdeTrajectory::Tag::too_small);
}

TEST_CASE("critical two-component profile") {
    OdeTrajectory t = find_profile(1.0, 20.0, 1e-6);
    CHECK(t.m == doctest::Approx(1.5099906769451081).epsilon(1e-7));
    CHECK(t.symmetry_defect <= 1e-6);
    CHECK(t.b > 0.0);
    REQUIRE(t.x.size() == t.u.size());
    REQUIRE(t.x.size() == t.v.size());
    // u strictly increasing and v strictly decreasing on the middle window
    size_t mid = t.x.size() / 2, lo = mid / 2, hi = mid + mid / 2;
    for (size_t i = lo + 1; i <= hi; ++i) {
        CHECK(t.u[i] > t.u[i - 1]);
        CHECK(t.v[i] < t.v[i - 1]);
    }
    // u(x) - v(-x) symmetry at the ends of the checked window
    CHECK(t.u[hi] == doctest::Approx(t.v[2 * mid - hi]).epsilon(1e-6));
    // tail of u is asymptotically linear with slope b
    size_t n = t.x.size() - 1;
    CHECK((t.u[n] - t.u[n - 100]) / (t.x[n] - t.x[n - 100]) ==
          doctest::Approx(t.b).epsilon(1e-6));
    CHECK(t.v[n] < 1e-3);  // v decays
    CHECK(t.x_switch > 0.0);
    CHECK(t.x_switch < 20.0);
}

TEST_CASE("scaling: m scales as a^2 under u -> s u(s x) invariance") {
    OdeTrajectory t1 = find_profile(1.0, 14.0, 1e-5);
    OdeTrajectory t2 = find_profile(2.0, 10.0, 1e-5);
    // a -> 2a corresponds to s = sqrt(2)... m(a) = m(1) a^2 exactly
    CHECK(t2.m == doctest::Approx(4.0 * t1.m).epsilon(1e-5));
}

TEST_CASE("decay experiment matches the 1-d closed form") {
    for (double K : {1.0, 25.0}) {
        DecayResult res = decay_experiment(K, 2.0, 3.0, 1);
        double want = 2.0 * std::cosh(std::sqrt(K) * 3.0) / std::cosh(std::sqrt(K) * 6.0);
        CHECK(res.sup_Br == doctest::Approx(want).epsilon(1e-8));
        CHECK(res.bound_coeff == doctest::Approx(res.sup_Br * std::exp(std::sqrt(K) * 3.0) / 2.0)
                                      .epsilon(1e-12));
    }
    DecayResult flat = decay_experiment(0.0, 2.0, 3.0, 1);
    CHECK(flat.sup_Br == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(flat.bound_coeff == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decay is monotone in K and in the dimension") {
    DecayResult a = decay_experiment(1.0, 1.0, 4.0, 2);
    DecayResult b = decay_experiment(4.0, 1.0, 4.0, 2);
    CHECK(b.sup_Br < a.sup_Br);
    DecayResult c = decay_experiment(1.0, 1.0, 4.0, 3);
    CHECK(c.sup_Br < 1.0);
    CHECK(a.sup_Br < 1.0);
}

TEST_CASE("slope of log sup against sqrt(K) is -r") {
    std::vector<double> K = {1.0, 4.0, 9.0, 16.0};
    CHECK(decay_slope_fit(K, 1.0, 5.0, 1) == doctest::Approx(-5.0).epsilon(1e-3));
    CHECK(decay_slope_fit(K, 1.0, 5.0, 2) == doctest::Approx(-5.0).epsilon(0.05));
}

TEST_CASE("trajectory csv has a header and one row per sample") {
    OdeTrajectory t = shoot(1.0, 1.0, 1.0, 0.1);
    std::stringstream ss;
    write_trajectory_csv(t, ss);
    std::string line;
    int rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == static_cast<int>(t.x.size()) + 1);
}
