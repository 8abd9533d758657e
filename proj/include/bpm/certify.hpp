#pragma once

// Existence-condition engines. Each check evaluates one of the classical
// boundary hypotheses (sign change, Miranda face signs, constant pairing
// sign, ray exclusion, normal-cone alignment, linear growth, Hilbert-cube
// face signs, inward flow) over a discretized boundary and produces a
// Certificate with per-face margins and witness points.
//
// Two rigor tiers:
//   Sampled   — the condition is verified at finitely many boundary points;
//               evidence, not proof.
//   Lipschitz — adaptive facet subdivision; a cell is accepted when the
//               center value clears the margin L_f * cell radius (plus the
//               pairing's local bound where applicable), so the verdict is
//               rigorous relative to the supplied Lipschitz constant.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bpm/expr.hpp"
#include "bpm/geometry.hpp"
#include "bpm/linalg.hpp"
#include "bpm/pairing.hpp"

namespace bpm {

struct RigorMode {
  enum class Kind { Sampled, Lipschitz };
  Kind kind = Kind::Sampled;
  int density = 16;        // points per free axis (Sampled)
  double lipschitz = 0.0;  // L_f (Lipschitz)
  int max_depth = 14;
  long cell_budget = 200000;

  static RigorMode sampled(int density = 16) {
    return {Kind::Sampled, density, 0.0, 0, 0};
  }
  static RigorMode lipschitz_mode(double l_f, int max_depth = 14,
                                  long cell_budget = 200000) {
    return {Kind::Lipschitz, 0, l_f, max_depth, cell_budget};
  }
};

enum class Condition {
  Bolzano,
  Miranda,
  PairingSign,
  RayCondition,
  NormalCone,
  LinearGrowth,
  HilbertCube,
  OdeInward,
  Invariance,
};

enum class Verdict { Certified, Refuted, Inconclusive };

std::string condition_name(Condition c);
std::string verdict_name(Verdict v);

struct FaceMargin {
  std::string label;  // "x1-", "x2+", "sphere", ...
  double margin;
};

struct Certificate {
  Condition condition;
  Verdict verdict = Verdict::Inconclusive;
  int sign = 0;  // the constant sign found, where applicable
  std::vector<FaceMargin> margins;
  std::optional<vec> witness;  // a concrete violating boundary point
  std::string reason;          // for Inconclusive
  std::optional<vec> anchor;   // the interior point z, where applicable
  RigorMode rigor;
  std::map<std::string, double> data;  // condition-specific scalars

  bool certified() const { return verdict == Verdict::Certified; }
  // Smallest recorded face margin (0 when no margins were recorded).
  double worst_margin() const;
};

// Values within kSignZeroTol of zero neither certify a strict inequality
// nor count as a strict violation.
inline constexpr double kSignZeroTol = 1e-13;

// f(a) f(b) < 0 on [a,b]; endpoint values within 1e-14 of zero are
// Inconclusive.
Certificate check_bolzano(const MapSpec& f, double a, double b);

// Miranda face signs: f_i > 0 on face x_i = lo_i and f_i < 0 on x_i = hi_i,
// or the globally reversed orientation; both are tried and the certificate
// records which (sign +1 = as stated, -1 = reversed).
Certificate check_miranda(const MapSpec& f, const BoxDomain& box,
                          const RigorMode& rigor);

// <f(x), x - z> keeps one strict sign over the whole boundary, for an
// interior anchor z and the selected pairing.
Certificate check_pairing_sign(const MapSpec& f, const Domain& domain,
                               const vec& z, const Space& space,
                               PairingKind kind, const RigorMode& rigor);

// f(x) is never a negative (sign +1) or never a positive (sign -1) multiple
// of x - z on the boundary. Sampled mode only.
Certificate check_ray_condition(const MapSpec& f, const Domain& domain,
                                const vec& z, const RigorMode& rigor);

// At every boundary point some outward normal a(x) of the box satisfies
// <f(x), a(x)> >= 0 (edge/corner samples may use any incident face).
Certificate check_normal_cone(const MapSpec& f, const BoxDomain& box,
                              const RigorMode& rigor);

// Convex bodies beyond boxes: the caller supplies the normal selection
// a(x) for boundary points. Sampled mode only (the margin bound would
// need the normal field's regularity). radial_normal serves balls.
using NormalSelector = std::function<vec(const vec& boundary_point)>;
Certificate check_normal_cone(const MapSpec& f, const Domain& domain,
                              const NormalSelector& normal_at,
                              const RigorMode& rigor);
NormalSelector radial_normal(const BallDomain& ball);

// Smallest gain min{ |Lx| : |x| = 1 } of a square matrix in the given norm.
// l2 uses the symmetric Jacobi eigenvalues of L^T L; the other norms run a
// branch-and-bound over the unit-sphere facets with the Lipschitz bound
// |Lx| varying at most 2|L| per unit step, refined to absolute accuracy
// 10^-refinement (subject to the cell budget). Values at or below 1e-12
// are reported as 0 (singular).
double minimum_gain(const mat& l, const Space& space, int refinement = 8);

// Existence of a zero of L x + g(x) in the ball of radius R = beta/(ell -
// alpha), given the growth bound |g(x)| <= alpha |x| + beta (spot-verified
// on samples; the bound itself is the caller's claim).
Certificate check_linear_growth(const mat& l, const MapSpec& g,
                                const Space& space, double alpha, double beta,
                                int refinement = 8);

// Hilbert-cube face signs at truncation N: f_k >= 0 on x_k = -1/k and
// f_k <= 0 on x_k = +1/k (non-strict; zero margins certify in Sampled
// mode). Dimensions above the grid limit are sampled by a deterministic
// pseudo-random scheme.
Certificate check_hilbert_cube(const MapSpec& f, int truncation,
                               const RigorMode& rigor);

// Inward flow for x' = f(t,x): <f(t,x), j(x)> <= 0 on |x| = R for all
// t in [0,T], with j the duality selection. The stronger <f,x>+ <= 0
// margin is evaluated alongside and recorded.
Certificate check_ode_inward(const MapSpec& field, double T, double R,
                             const Space& space, int t_density,
                             int x_density);

}  // namespace bpm
