#pragma once

// Periodic solutions of x' = f(t, x) through the displacement map
// F(a) = x_a(T) - a: fixed-step RK4 integration, a Gronwall-based step
// budget, the inward-flow invariance check, and displacement-map root
// finding with the generic solvers.

#include <vector>

#include "bpm/certify.hpp"
#include "bpm/expr.hpp"
#include "bpm/linalg.hpp"
#include "bpm/pairing.hpp"

namespace bpm {

struct OdeProblem {
  MapSpec field;      // f(t, x)
  double T = 0.0;     // period to enforce
  double R = 0.0;     // invariant-ball radius
  double lipschitz = 0.0;  // Lipschitz constant of f in x (user claim)
  Space space;

  void validate() const;
};

struct TrajectoryPoint {
  double t;
  vec x;
};
using Trajectory = std::vector<TrajectoryPoint>;

// Classical RK4 with fixed step h = T/steps; returns all steps+1 nodes.
Trajectory integrate(const OdeProblem& p, const vec& a, int steps);

// Endpoint-only integration; also reports the largest |x(t)| (in the
// problem norm) seen at the nodes.
vec integrate_endpoint(const OdeProblem& p, const vec& a, int steps,
                       double* max_radius = nullptr);

// Step count such that the RK4 error model C h^4, amplified by the
// Gronwall factor e^(L T), stays below target_err. C is calibrated from
// a coarse/fine Richardson comparison on this problem. At least 16 steps.
int gronwall_budget(const OdeProblem& p, double target_err);

// x_a(T) - a.
vec poincare_displacement(const OdeProblem& p, const vec& a, int steps);

// Integrates from deterministic initial values on and inside |a| = R and
// checks max_t |x_a(t)| <= R (1 + 1e-6). Numerical evidence, Sampled rigor.
Certificate check_invariance(const OdeProblem& p, int a_samples, int steps);

struct PeriodicResult {
  vec a;                    // initial value of the periodic solution
  double displacement = 0;  // |x_a(T) - a| in the problem norm
  double max_radius = 0;    // max over saved nodes of |x_a(t)|
  int steps = 0;            // RK4 steps per period used
  int iterations = 0;
  bool converged = false;
};

// Finds a with |x_a(T) - a| <= tol by proof_homotopy + newton_project on
// the displacement map over the ball of radius R (l2 or linf norms; the
// ball must have a supported metric projection).
PeriodicResult find_periodic(const OdeProblem& p, double tol = 1e-8);

}  // namespace bpm
