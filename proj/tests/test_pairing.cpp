#include <cmath>

#include "bpm/errors.hpp"
#include "bpm/pairing.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bpm;

namespace {

Space make_space(int dim, Norm n, double p = 2.0) { return Space{dim, n, p}; }

const std::vector<Space> test_spaces(int dim) {
  return {make_space(dim, Norm::L1), make_space(dim, Norm::L2),
          make_space(dim, Norm::Lp, 3.0), make_space(dim, Norm::Linf)};
}

}  // namespace

TEST_CASE("norms on worked values") {
  CHECK(norm(make_space(2, Norm::Linf), {-2, 3}) == 3.0);
  CHECK(norm(make_space(2, Norm::L2), {3, 4}) == 5.0);
  CHECK(norm(make_space(3, Norm::L1), {1, -1, 1}) == 3.0);
  CHECK(norm(make_space(2, Norm::Lp, 3.0), {0, 0}) == 0.0);
  CHECK_THROWS_AS(norm(make_space(3, Norm::L2), {1, 2}), dimension_error);
}

TEST_CASE("norm is zero only at zero") {
  oracles::VecGen gen(11);
  for (int dim = 1; dim <= 6; ++dim)
    for (const Space& s : test_spaces(dim))
      for (int i = 0; i < 50; ++i) {
        const vec x = gen.nonzero(dim);
        CHECK(norm(s, x) > 0.0);
        CHECK(norm(s, vec(dim, 0.0)) == 0.0);
      }
}

TEST_CASE("duality selection on worked values") {
  SUBCASE("l2 is the identity") {
    const vec j = duality_select(make_space(2, Norm::L2), {3, 4});
    CHECK(j == vec{3, 4});
  }
  SUBCASE("linf picks the smallest attaining index") {
    const Space s = make_space(2, Norm::Linf);
    const vec j = duality_select(s, {2, 2});
    CHECK(j == vec{2, 0});
    CHECK(dot({2, 2}, j) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(dual_norm(s, j) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("l1 zeroes the dual coordinates over zero entries") {
    const Space s = make_space(3, Norm::L1);
    const vec j = duality_select(s, {1, 0, -2});
    CHECK(j == vec{3, 0, -3});
    CHECK(dot({1, 0, -2}, j) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(dual_norm(s, j) == doctest::Approx(3.0).epsilon(1e-14));
  }
}

TEST_CASE("pairings on worked values") {
  CHECK(pair(make_space(2, Norm::L2), PairingKind::Plus, {1, 0}, {0, 1}) == 0.0);
  const Space linf = make_space(2, Norm::Linf);
  CHECK(pair(linf, PairingKind::Plus, {1, 0}, {2, 2}) == 2.0);
  CHECK(pair(linf, PairingKind::Minus, {1, 0}, {2, 2}) == 0.0);
  // Collinear branch: x = -2y, so the ray functional is -2 |y|^2.
  CHECK(pair(make_space(2, Norm::L2), PairingKind::Ray, {-4, -4}, {2, 2}) ==
        doctest::Approx(-16.0).epsilon(1e-14));
  // Non-collinear: 0.
  CHECK(pair(make_space(2, Norm::L2), PairingKind::Ray, {1, 0}, {0, 1}) == 0.0);
}

TEST_CASE("pairing axioms and duality identities (randomized)") {
  oracles::VecGen gen(2026);
  std::mt19937 lambda_rng(7);
  std::uniform_real_distribution<double> lambda_dist(-3.0, 3.0);

  for (int dim = 1; dim <= 6; ++dim) {
    for (const Space& s : test_spaces(dim)) {
      for (int rep = 0; rep < 250; ++rep) {
        const vec x = gen.nonzero(dim);
        const vec y = gen.nonzero(dim);
        const double nx2 = norm(s, x) * norm(s, x);

        // (C1) with the sharp value |x|^2 for Plus/Minus.
        for (PairingKind k :
             {PairingKind::Plus, PairingKind::Minus, PairingKind::Ray}) {
          const double self = pair(s, k, x, x);
          CHECK(self > 0.0);
          if (k != PairingKind::Ray)
            CHECK(self == doctest::Approx(nx2).epsilon(1e-12));
        }

        // (C2) homogeneity in the first slot against the second.
        const double lambda = lambda_dist(lambda_rng);
        for (PairingKind k :
             {PairingKind::Plus, PairingKind::Minus, PairingKind::Ray}) {
          const double lhs = pair(s, k, scale(lambda, x), x);
          const double rhs = lambda * pair(s, k, x, x);
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }

        // Minus never exceeds Plus.
        const double plus = pair(s, PairingKind::Plus, x, y);
        const double minus = pair(s, PairingKind::Minus, x, y);
        CHECK(minus <= plus + 1e-12 * (1.0 + std::abs(plus)));

        // Duality selection identities.
        const vec j = duality_select(s, y);
        const double ny = norm(s, y);
        CHECK(std::abs(dot(y, j) - ny * ny) <= 1e-10 * (1.0 + ny * ny));
        CHECK(std::abs(dual_norm(s, j) - ny) <= 1e-10 * (1.0 + ny));

        // Sublinearity of the extreme-point max in the first slot.
        const vec x2 = gen.make(dim);
        const double lhs = pair(s, PairingKind::Plus, add(x, x2), y);
        const double rhs = pair(s, PairingKind::Plus, x, y) +
                           pair(s, PairingKind::Plus, x2, y);
        CHECK(lhs <= rhs + 1e-10 * (1.0 + std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("ray pairing uses the relative collinearity gate") {
  const Space s = make_space(2, Norm::L2);
  // Slightly off the ray: residual above the 1e-9 relative gate.
  CHECK(pair(s, PairingKind::Ray, {1.0, 1.0001}, {1.0, 1.0}) == 0.0);
  // Within the gate.
  const vec x{2.0, 2.0 + 1e-12};
  CHECK(pair(s, PairingKind::Ray, x, {1.0, 1.0}) != 0.0);
}
