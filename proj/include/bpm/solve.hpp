#pragma once

// Root finding once existence is certified: 1-D bisection, continuation on
// the regularized equation x + n f(x) = z (whose solutions obey
// f(x_n) = (z - x_n)/n, so the residual decays like diam(U)/n), projected
// damped Newton for local polish, a brute-force lattice oracle for testing,
// and the fixed-point construction F(x) = x - f(P_C(x)).

#include <string>
#include <vector>

#include "bpm/expr.hpp"
#include "bpm/geometry.hpp"
#include "bpm/linalg.hpp"

namespace bpm {

struct HomotopyStage {
  double n;         // regularization weight
  double residual;  // |f(x_n)| in the problem norm
  bool inner_converged;
};

struct RootResult {
  vec x;
  double residual = 0.0;  // |f(x)| in the problem norm
  int iterations = 0;
  std::string method;
  bool converged = false;
  std::vector<HomotopyStage> stages;  // homotopy only
};

// Interval halving. Requires a sign change certified by check_bolzano;
// throws precondition_error otherwise. Stops when the interval width is
// at most tol (or an iterate hits an exact zero).
RootResult bisect(const MapSpec& f, double a, double b, double tol);

// Default schedule 1, 2, 4, ..., 2^20.
std::vector<double> default_homotopy_schedule();

// For each n in the schedule solves x + n f(x) - z = 0 by damped Newton
// warm-started from the previous stage, every iterate projected into the
// domain. Returns the last iterate with its true residual; if an inner
// solve diverges, returns the best solution so far with converged = false.
RootResult proof_homotopy(const MapSpec& f, const Domain& domain,
                          const Space& space, const vec& z,
                          const std::vector<double>& schedule = {},
                          double inner_tol = 1e-12);

// Damped Newton (Armijo backtracking on |f|_2^2, minimum step 2^-20) with
// finite-difference Jacobian; singular systems fall back to a gradient
// step. Iterates are projected into the domain. converged iff the problem
// norm of f drops to tol within max_iter iterations.
RootResult newton_project(const MapSpec& f, const Domain& domain,
                          const Space& space, const vec& x0, double tol,
                          int max_iter = 100);

// Exhaustive lattice scan (resolution^n points) returning the point with
// the smallest |f|_inf. Dimension above 4 is rejected.
struct OraclePoint {
  vec x;
  double residual;  // |f(x)|_inf
};
OraclePoint grid_oracle(const MapSpec& f, const Domain& domain,
                        int resolution);

// Zero of F(x) = x - f(project(C, x)) over the Euclidean ball B_R[0],
// located by proof_homotopy + newton_project. The self-map property of f
// on C is spot-checked on samples first. The returned point satisfies
// project(C, x) = x and |x - f(x)|_2 <= tol.
RootResult fixed_point_via_zero(const MapSpec& f, const BoxDomain& c,
                                double enclosing_radius, double tol);

}  // namespace bpm
