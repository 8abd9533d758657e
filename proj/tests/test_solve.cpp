#include <cmath>
#include <random>

#include "bpm/errors.hpp"
#include "bpm/solve.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bpm;

namespace {
const Space l2_2{2, Norm::L2, 2.0};
const Space linf2{2, Norm::Linf, 2.0};
const Space l2_1{1, Norm::L2, 2.0};
}  // namespace

TEST_CASE("bisection") {
  SUBCASE("cube root of two, halving-law iteration count") {
    MapSpec f = MapSpec::from_expressions({"x1^3 - 2"}, 1);
    RootResult r = bisect(f, 0.0, 2.0, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.x[0] - std::cbrt(2.0)) <= 1e-12);
    CHECK(r.iterations == 41);  // ceil(log2(2 / 1e-12))
  }
  SUBCASE("exact zero at the first midpoint") {
    MapSpec f = MapSpec::from_expressions({"x1"}, 1);
    RootResult r = bisect(f, -1.0, 1.0, 1e-10);
    CHECK(r.x[0] == 0.0);
    CHECK(r.residual == 0.0);
  }
  SUBCASE("cosine root") {
    MapSpec f = MapSpec::from_expressions({"cos(x1)"}, 1);
    RootResult r = bisect(f, 0.0, 2.0, 1e-10);
    CHECK(std::abs(r.x[0] - M_PI / 2.0) <= 1e-10);
  }
  SUBCASE("no certified sign change is a precondition violation") {
    MapSpec f = MapSpec::from_expressions({"x1^2"}, 1);
    CHECK_THROWS_AS(bisect(f, -1.0, 1.0, 1e-10), precondition_error);
  }
  SUBCASE("dyadic interval: width halves exactly") {
    MapSpec f = MapSpec::from_expressions({"x1 - 0.3"}, 1);
    RootResult r = bisect(f, 0.0, 1.0, std::ldexp(1.0, -20));
    CHECK(r.iterations == 20);
    CHECK(std::abs(r.x[0] - 0.3) <= std::ldexp(1.0, -20));
  }
}

TEST_CASE("homotopy continuation") {
  SUBCASE("f = x over the unit ball collapses to the anchor") {
    MapSpec f = MapSpec::from_expressions({"x1", "x2"}, 2);
    const Domain ball = BallDomain{{0, 0}, 1.0, l2_2};
    RootResult r = proof_homotopy(f, ball, l2_2, {0, 0});
    CHECK(r.converged);
    CHECK(r.residual <= 1e-12);
    // Stage law: |f(x_n)| <= diam/n + 10 * inner_tol for converged stages.
    for (const HomotopyStage& s : r.stages)
      if (s.inner_converged) CHECK(s.residual <= 2.0 / s.n + 1e-11);
  }
  SUBCASE("affine shift converges to the shift at the 1/n rate") {
    MapSpec f = MapSpec::from_expressions({"x1 - 0.3", "x2 + 0.2"}, 2);
    const Domain box = BoxDomain{{-1, -1}, {1, 1}};
    RootResult r = proof_homotopy(f, box, linf2, {0, 0});
    CHECK(r.converged);
    // The last regularized solution sits within diam/n of the root; the
    // newton polish (as run by the cli pipeline) tightens it further.
    const double slack = 2.0 / (1 << 20) + 1e-11;
    CHECK(std::abs(r.x[0] - 0.3) <= slack);
    CHECK(std::abs(r.x[1] + 0.2) <= slack);
    for (const HomotopyStage& s : r.stages)
      if (s.inner_converged) CHECK(s.residual <= 2.0 / s.n + 1e-11);
    RootResult polished = newton_project(f, box, linf2, r.x, 1e-12, 20);
    CHECK(polished.converged);
    CHECK(std::abs(polished.x[0] - 0.3) <= 1e-12);
  }
  SUBCASE("anchor must be interior") {
    MapSpec f = MapSpec::from_expressions({"x1", "x2"}, 2);
    const Domain box = BoxDomain{{-1, -1}, {1, 1}};
    CHECK_THROWS_AS(proof_homotopy(f, box, linf2, {1.0, 0.0}),
                    precondition_error);
  }
}

TEST_CASE("projected newton") {
  SUBCASE("scalar square root") {
    MapSpec f = MapSpec::from_expressions({"x1^2 - 4"}, 1);
    const Domain box = BoxDomain{{0.0}, {10.0}};
    RootResult r = newton_project(f, box, l2_1, {3.0}, 1e-12, 50);
    CHECK(r.converged);
    CHECK(std::abs(r.x[0] - 2.0) <= 1e-12);
    CHECK(r.iterations <= 8);
  }
  SUBCASE("linear system solves in one step") {
    MapSpec f = MapSpec::from_expressions({"2*x1 + x2 - 1", "x1 - x2 - 2"}, 2);
    const Domain box = BoxDomain{{-5, -5}, {5, 5}};
    RootResult r = newton_project(f, box, linf2, {0, 0}, 1e-12, 50);
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
  }
  SUBCASE("iterates stay inside the domain") {
    MapSpec f = MapSpec::from_expressions({"x1 - 5", "x2 - 5"}, 2);
    const Domain box = BoxDomain{{-1, -1}, {1, 1}};
    RootResult r = newton_project(f, box, linf2, {0, 0}, 1e-12, 20);
    CHECK_FALSE(r.converged);  // the zero lies outside the box
    CHECK(domain_contains(box, r.x, 1e-12));
  }
  SUBCASE("x0 outside the domain is a precondition violation") {
    MapSpec f = MapSpec::from_expressions({"x1"}, 1);
    CHECK_THROWS_AS(
        newton_project(f, BoxDomain{{0.0}, {1.0}}, l2_1, {2.0}, 1e-10, 10),
        precondition_error);
  }
  SUBCASE("rotation from the boundary lands on the origin") {
    MapSpec rot = MapSpec::from_expressions({"-x2", "x1"}, 2);
    const Domain ball = BallDomain{{0, 0}, 1.0, l2_2};
    RootResult r = newton_project(rot, ball, l2_2, {1.0, 0.0}, 1e-12, 50);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-12);
  }
  SUBCASE("polish of the flagship homotopy root reaches 1e-12") {
    // The nonlinear system with the linear part folded in: the homotopy
    // gets within diam/n, the polish finishes the job.
    MapSpec g = MapSpec::from_expressions(
        {"4*x2*cos(x1 + 2*x2) - 3", "3*x1*sin(x1 - 3*x2) - 2"}, 2);
    mat l(2, 2);
    l(0, 0) = -2; l(0, 1) = 7; l(1, 0) = 7; l(1, 1) = -2;
    mat inv;
    REQUIRE(invert(l, inv));
    MapSpec target = MapSpec::from_function(
        2, 2,
        [inv, g](const vec& x, double) { return add(x, matvec(inv, g.eval(x))); },
        false);
    const Domain box = BoxDomain{{-3, -3}, {3, 3}};
    RootResult h = proof_homotopy(target, box, linf2, {0, 0}, {}, 1e-12);
    CHECK(h.converged);
    RootResult polished = newton_project(target, box, linf2, h.x, 1e-12, 100);
    CHECK(polished.converged);
    CHECK(polished.residual <= 1e-12);
  }
}

TEST_CASE("grid oracle") {
  SUBCASE("lattice hits the origin") {
    MapSpec f = MapSpec::from_expressions({"-x1", "-x2"}, 2);
    OraclePoint p = grid_oracle(f, Domain{BoxDomain{{-1, -1}, {1, 1}}}, 41);
    CHECK(p.x == vec{0.0, 0.0});
    CHECK(p.residual == 0.0);
  }
  SUBCASE("lattice value is exact when the root is a node") {
    MapSpec f = MapSpec::from_expressions({"x1 - 0.3"}, 1);
    OraclePoint p = grid_oracle(f, Domain{BoxDomain{{0.0}, {1.0}}}, 11);
    CHECK(p.x[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(p.residual <= 1e-16);
  }
  SUBCASE("dimension guard") {
    MapSpec f = MapSpec::from_expressions({"x1", "x2", "x3", "x4", "x5"}, 5);
    BoxDomain big{vec(5, 0.0), vec(5, 1.0)};
    CHECK_THROWS_AS(grid_oracle(f, Domain{big}, 5), unsupported_error);
  }
  SUBCASE("agreement with the homotopy root within one cell") {
    MapSpec f = MapSpec::from_expressions({"x1 - 0.3", "x2 + 0.2"}, 2);
    const Domain box = BoxDomain{{-1, -1}, {1, 1}};
    RootResult r = proof_homotopy(f, box, linf2, {0, 0});
    OraclePoint p = grid_oracle(f, box, 21);
    CHECK(norm_inf(sub(p.x, r.x)) <= 0.1 + 1e-9);
  }
}

TEST_CASE("fixed point via the zero construction") {
  const BoxDomain unit{{0, 0}, {1, 1}};
  SUBCASE("constant map") {
    MapSpec f = MapSpec::from_expressions({"0.3", "0.7"}, 2);
    RootResult r = fixed_point_via_zero(f, unit, 1.5, 1e-10);
    CHECK(r.converged);
    CHECK(std::abs(r.x[0] - 0.3) <= 1e-10);
    CHECK(std::abs(r.x[1] - 0.7) <= 1e-10);
  }
  SUBCASE("affine contraction agrees with the picard oracle") {
    MapSpec f = MapSpec::from_expressions(
        {"x1/2 + 0.25", "x2/2 + 0.25"}, 2);
    RootResult r = fixed_point_via_zero(f, unit, 1.5, 1e-10);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-10);
    auto picard = oracles::picard_fixed_point(f, {0.1, 0.9});
    REQUIRE(picard.has_value());
    CHECK(norm_inf(sub(r.x, *picard)) <= 1e-8);
    CHECK(std::abs(r.x[0] - 0.5) <= 1e-9);
  }
  SUBCASE("trigonometric self-map") {
    MapSpec f = MapSpec::from_expressions(
        {"cos(x2)^2", "sin(x1)^2"}, 2);
    RootResult r = fixed_point_via_zero(f, unit, 1.5, 1e-10);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-10);
    // The output is inside C and fixed up to tolerance.
    CHECK(project(Domain{unit}, r.x) == r.x);
    CHECK(norm2(sub(r.x, f.eval(r.x))) <= 1e-10);
  }
  SUBCASE("non-self-maps are rejected") {
    MapSpec f = MapSpec::from_expressions({"x1 + 2", "x2"}, 2);
    CHECK_THROWS_AS(fixed_point_via_zero(f, unit, 1.5, 1e-10),
                    precondition_error);
  }
  SUBCASE("C outside the enclosing ball is rejected") {
    MapSpec f = MapSpec::from_expressions({"0.3", "0.7"}, 2);
    CHECK_THROWS_AS(fixed_point_via_zero(f, unit, 0.5, 1e-10),
                    precondition_error);
  }
}
