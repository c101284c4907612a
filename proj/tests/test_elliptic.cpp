#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "seglab/elliptic.hpp"
#include "seglab/profile.hpp"

using namespace seglab;

namespace {
SolveConfig quick_config(double beta, double tol = 1e-9, int max_iter = 50000) {
    SolveConfig cfg;
    cfg.beta = beta;
    cfg.tol_grad = tol;
    cfg.max_iter = max_iter;
    cfg.step_rule = {StepRule::Kind::fixed, 1.8};
    return cfg;
}
}  // namespace

TEST_CASE("config validation") {
    SolveConfig cfg = quick_config(10.0);
    cfg.validate();
    cfg.step_rule = {StepRule::Kind::fixed, 2.0};
    CHECK_THROWS(cfg.validate());  // omega must lie in (0,2)
    cfg = quick_config(10.0);
    cfg.beta_schedule = {5.0, 2.0, 10.0};
    CHECK_THROWS(cfg.validate());  // schedule must increase
    cfg.beta_schedule = {5.0, 20.0};
    CHECK_THROWS(cfg.validate());  // schedule must end at beta
    cfg.beta_schedule = {5.0, 10.0};
    cfg.validate();
}

TEST_CASE("profile boundary trace matches |Psi_d| on the outer ring") {
    PolarGrid2D g(16, 32, 2.0);
    BoundarySpec bc;
    bc.d = 1.0;
    bc.amplitude = 3.0;
    auto tr = bc.trace_values(g, 2);
    REQUIRE(tr.size() == 2);
    REQUIRE(tr[0].size() == static_cast<size_t>(g.n_theta));
    for (int m = 0; m < g.n_theta; ++m) {
        double want = 3.0 * psi_d_abs(g.r_max, g.theta(m), 1.0);
        int comp = g.theta(m) < M_PI ? 0 : 1;
        CHECK(tr[static_cast<size_t>(comp)][static_cast<size_t>(m)] ==
              doctest::Approx(want).epsilon(1e-13));
        CHECK(tr[static_cast<size_t>(1 - comp)][static_cast<size_t>(m)] == 0.0);
    }
    BoundarySpec bad;
    bad.kind = BoundarySpec::Kind::explicit_trace;
    bad.trace = {{1.0, -0.5}};
    CHECK_THROWS(bad.trace_values(g, 1));  // negative boundary data
}

TEST_CASE("constant boundary data gives the constant harmonic extension") {
    PolarGrid2D g(32, 32, 1.0);
    BoundarySpec bc;
    bc.kind = BoundarySpec::Kind::explicit_trace;
    bc.trace = {std::vector<double>(static_cast<size_t>(g.n_theta), 1.0)};
    auto [u, rep] = solve_dirichlet(g, 1, bc, quick_config(5.0, 1e-11));
    CHECK(rep.converged);
    for (int j = 0; j <= g.n_r; ++j)
        CHECK(u.comp(0).at(j, 7) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("segregated solve: converged, valid, residual at tolerance") {
    PolarGrid2D g(48, 64, 1.0);
    BoundarySpec bc;  // profile d = 1
    auto [u, rep] = solve_dirichlet(g, 2, bc, quick_config(50.0, 1e-8));
    CHECK(rep.converged);
    CHECK(rep.final_residual <= 1e-8);
    u.check_valid();
    CHECK(pde_residual(u, 50.0) <= 1.0001e-8);
    CHECK(rep.final_energy > 0.0);
    // deterministic: an identical second solve bit-matches
    auto [v, rep2] = solve_dirichlet(g, 2, bc, quick_config(50.0, 1e-8));
    CHECK(rep2.iterations == rep.iterations);
    for (int i = 0; i < 2; ++i) {
        auto a = u.comp(i).raw(), b = v.comp(i).raw();
        bool same = true;
        for (size_t n = 0; n < a.size(); ++n) same = same && a[n] == b[n];
        CHECK(same);
    }
}

TEST_CASE("backtracking step rule also converges") {
    PolarGrid2D g(32, 32, 1.0);
    BoundarySpec bc;
    SolveConfig cfg = quick_config(25.0, 1e-8);
    cfg.step_rule = {};  // backtracking default
    auto [u, rep] = solve_dirichlet(g, 2, bc, cfg);
    CHECK(rep.converged);
    u.check_valid();
}

TEST_CASE("beta schedule with a warm start continues a direct solve") {
    PolarGrid2D g(32, 32, 1.0);
    BoundarySpec bc;
    auto [u1, r1] = solve_dirichlet(g, 2, bc, quick_config(20.0, 1e-9));
    SolveConfig cont = quick_config(80.0, 1e-9);
    auto [u2, r2] = solve_dirichlet(g, 2, bc, cont, &u1);
    CHECK(r1.converged);
    CHECK(r2.converged);
    CHECK(energy(u2, 80.0) <= energy(u1, 80.0) + 1e-12);  // descent from the warm start
}

TEST_CASE("energy of the segregated profile is d/2 with no coupling") {
    PolarGrid2D g(128, 128, 1.0);
    MultiField u = make_profile_field(g, 1.0, 2, default_assignment(1.0, 2));
    CHECK(energy(u, 1000.0) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("equivariance projection fixes the symmetric profile") {
    PolarGrid2D g(16, 32, 1.0);
    MultiField u = make_profile_field(g, 1.0, 2, default_assignment(1.0, 2));
    MultiField p = equivariance_project(u, 1.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 1; j <= g.n_r; ++j)
            for (int m = 0; m < g.n_theta; ++m)
                CHECK(p.comp(i).at(j, m) ==
                      doctest::Approx(u.comp(i).at(j, m)).epsilon(1e-12));
    CHECK_THROWS(equivariance_project(u, 1.5));  // 32 is not divisible by 4d = 6
}
