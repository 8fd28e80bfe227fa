#include <doctest.h>

#include <cmath>

#include "shrinkerlab/barriers.hpp"
#include "shrinkerlab/flow.hpp"

using namespace shrinkerlab;

namespace {
GridPtr canonical_grid(int nr = 129, int nt = 33) {
    return SectorGrid::create(1.0, 16.0, nr, nt, 5, RadialSpacing::LogGraded);
}

LinearSolution scaled_solution(GridPtr g, double eps_fraction_of_max) {
    BoundaryData shape(5, {{1, 1.0}});
    LinearSolution unit = solve_linear(shape, g);
    const double eps_max = admissible_epsilon(kK1SafetyFactor * unit.K1_est, g->R());
    const double amplitude = eps_fraction_of_max * eps_max / shape.c4_norm();
    return solve_linear(shape.scaled(amplitude), g);
}
}  // namespace

TEST_CASE("admissible epsilon formula") {
    CHECK(admissible_epsilon(10.0, 1.0) ==
          doctest::Approx(0.1 * std::sqrt(1.0 / 124.0)).epsilon(1e-14));
    CHECK(admissible_epsilon(10.0, 1.0) == doctest::Approx(8.98e-3).epsilon(1e-3));
    CHECK(admissible_epsilon(10.0, std::sqrt(3.0) / 2.0) ==
          doctest::Approx(0.1 * std::sqrt(0.5 / 124.0)).epsilon(1e-14));
    CHECK(admissible_epsilon(10.0, std::sqrt(3.0) / 2.0) == doctest::Approx(6.35e-3).epsilon(2e-3));
    CHECK_THROWS(admissible_epsilon(10.0, 1.0 / std::sqrt(2.0)));
    CHECK_THROWS(admissible_epsilon(0.0, 1.0));

    // monotone in both arguments
    CHECK(admissible_epsilon(10.0, 1.5) > admissible_epsilon(10.0, 1.0));
    CHECK(admissible_epsilon(20.0, 1.0) < admissible_epsilon(10.0, 1.0));
}

TEST_CASE("barrier construction") {
    auto g = canonical_grid();
    const LinearSolution sol = scaled_solution(g, 0.5);
    const BarrierSet bs = make_barriers(sol, 1.0);

    CHECK(bs.params.k == doctest::Approx(2.0).epsilon(1e-14));  // R0 = 1
    CHECK(bs.params.eta <= 1.0);
    CHECK(bs.params.A > 0);

    // boundary rows equal the data exactly; the pair brackets u1
    for (int j = 0; j < g->ntheta(); ++j) {
        CHECK(bs.u_plus.v(0, j) == sol.u1.v(0, j));
        CHECK(bs.u_minus.v(0, j) == sol.u1.v(0, j));
    }
    for (int i = 1; i < g->nr(); ++i)
        for (int j = 0; j < g->ntheta(); ++j) {
            CHECK(bs.u_minus.v(i, j) < bs.u_plus.v(i, j));
            CHECK(bs.u_plus.v(i, j) + bs.u_minus.v(i, j) ==
                  doctest::Approx(2.0 * sol.u1.v(i, j)).epsilon(1e-12));
        }

    // k doubles as R0 drops to sqrt(3)/2
    const BarrierSet bs2 = make_barriers(sol, std::sqrt(3.0) / 2.0);
    CHECK(bs2.params.k == doctest::Approx(4.0).epsilon(1e-12));

    // the amplitude vanishes cubically with eps
    const LinearSolution half = scaled_solution(g, 0.25);
    const BarrierSet bsh = make_barriers(half, 1.0);
    CHECK(bsh.params.A == doctest::Approx(bs.params.A / 8.0).epsilon(1e-6));
}

TEST_CASE("inadmissible amplitude is rejected") {
    auto g = canonical_grid();
    const LinearSolution sol = scaled_solution(g, 1.5);
    CHECK_THROWS(make_barriers(sol, 1.0));
}

TEST_CASE("zero boundary data gives degenerate barriers") {
    auto g = canonical_grid();
    const LinearSolution zero = solve_linear(BoundaryData::zero(5), g);
    const BarrierSet bs = make_barriers(zero, 1.0);
    CHECK(bs.u_plus.v.abs().maxCoeff() == 0.0);
    CHECK(bs.u_minus.v.abs().maxCoeff() == 0.0);
    const BarrierResiduals res = barrier_residual_check(bs);
    CHECK(res.max_E_plus == 0.0);
    CHECK(res.min_E_minus == 0.0);
    CHECK(res.pass);
    CHECK(bound_K2(bs) == 0.0);
}

TEST_CASE("sign certification at the canonical amplitude") {
    auto g = canonical_grid(257, 65);
    const LinearSolution sol = scaled_solution(g, 0.5);
    const BarrierSet bs = make_barriers(sol, 1.0);
    const BarrierResiduals res = barrier_residual_check(bs);
    CHECK(res.pass);
    CHECK(res.max_E_plus <= res.tol);
    CHECK(res.min_E_minus >= -res.tol);
    // the supersolution margin is strictly negative in the continuum; the
    // discrete maximum should already be nonpositive at this resolution
    CHECK(res.max_E_plus <= 1e-8 + 10.0 * g->mesh_parameter() * g->mesh_parameter());
}

TEST_CASE("K2 bound scales and stabilizes") {
    auto g = canonical_grid(257, 65);
    const LinearSolution sol = scaled_solution(g, 0.5);
    const BarrierSet bs = make_barriers(sol, 1.0);
    CHECK(bs.params.K2 > 0);
    CHECK(std::isfinite(bs.params.K2));

    // halving f halves the linear part of both barriers and shrinks the
    // amplitude part by 8, so K2 falls by a factor between 2 and 8
    const LinearSolution half = solve_linear(sol.f.scaled(0.5), g);
    const BarrierSet bsh = make_barriers(half, 1.0);
    const double ratio = 2.0 * bsh.params.K2 / bs.params.K2;
    CHECK(ratio >= 0.5 - 1e-9);
    CHECK(ratio <= 1.0 + 1e-9);
}
