#include "bpm/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bpm/certify.hpp"
#include "bpm/errors.hpp"

namespace bpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinStep = 9.5367431640625e-07;  // 2^-20

double sq_norm(const vec& v) { return dot(v, v); }

// One damped-Newton descent on |g|_2^2 with projection into the domain.
// Returns true when |g(x)| (euclidean) drops to tol. `x` is updated in
// place to the best iterate found.
bool newton_descent(const MapSpec& g, const Domain& domain, vec& x,
                    double tol, int max_iter, int& iterations) {
  vec gx = g.eval(x);
  double phi = sq_norm(gx);
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(phi) <= tol) {
      iterations = it;
      return true;
    }
    mat jac = jacobian_fd(g, x);
    vec dir;
    vec rhs = scale(-1.0, gx);
    if (!solve_linear(jac, rhs, dir)) {
      // Singular Jacobian: steepest descent on |g|^2, d = -J^T g.
      dir.assign(x.size(), 0.0);
      for (int c = 0; c < jac.cols; ++c) {
        double s = 0.0;
        for (int r = 0; r < jac.rows; ++r) s += jac(r, c) * gx[r];
        dir[c] = -s;
      }
      const double len = norm2(dir);
      if (len <= 1e-300) {
        iterations = it;
        return std::sqrt(phi) <= tol;  // stationary point of the residual
      }
      dir = scale(std::sqrt(phi) / len, dir);  // residual-sized step
    }
    double step = 1.0;
    bool accepted = false;
    while (step >= kMinStep) {
      vec trial = project(domain, axpy(x, step, dir));
      try {
        vec gt = g.eval(trial);
        const double phi_t = sq_norm(gt);
        if (phi_t <= phi * (1.0 - 2e-4 * step)) {
          x = std::move(trial);
          gx = std::move(gt);
          phi = phi_t;
          accepted = true;
          break;
        }
      } catch (const eval_error&) {
        // trial point outside the map's domain of definition; shrink
      }
      step *= 0.5;
    }
    if (!accepted) {
      iterations = it + 1;
      return std::sqrt(phi) <= tol;  // stalled
    }
  }
  iterations = max_iter;
  return std::sqrt(phi) <= tol;
}

}  // namespace

RootResult bisect(const MapSpec& f, double a, double b, double tol) {
  if (f.dim_in() != 1 || f.dim_out() != 1)
    throw dimension_error("bisect needs a map R -> R");
  Certificate pre = check_bolzano(f, a, b);
  if (pre.verdict != Verdict::Certified)
    throw precondition_error("bisect: no certified sign change on [a, b] (" +
                             verdict_name(pre.verdict) + ")");

  RootResult res;
  res.method = "bisect";
  double fa = f.eval({a})[0];
  int iters = 0;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    const double fm = f.eval({mid})[0];
    ++iters;
    if (fm == 0.0) {
      res.x = {mid};
      res.residual = 0.0;
      res.iterations = iters;
      res.converged = true;
      return res;
    }
    if (fa * fm < 0.0) {
      b = mid;
    } else {
      a = mid;
      fa = fm;
    }
  }
  const double mid = 0.5 * (a + b);
  res.x = {mid};
  res.residual = std::abs(f.eval({mid})[0]);
  res.iterations = iters;
  res.converged = true;
  return res;
}

std::vector<double> default_homotopy_schedule() {
  std::vector<double> s;
  for (int k = 0; k <= 20; ++k) s.push_back(static_cast<double>(1 << k));
  return s;
}

namespace {

// Deterministic fresh starts used when a warm-started stage solve stalls.
// The regularized path can fold; damped Newton then parks at a spurious
// stationary point of the residual norm, and a coarse sweep of the domain
// reliably lands in the basin of the stage solution instead.
std::vector<vec> rescue_starts(const Domain& domain, const vec& z) {
  std::vector<vec> starts{z};
  const int n = domain_dim(domain);
  if (n > 6) return starts;
  BoxDomain box;
  if (const auto* b = std::get_if<BoxDomain>(&domain))
    box = *b;
  else if (const auto* hc = std::get_if<HilbertCubeDomain>(&domain))
    box = hc->as_box();
  else {
    const auto& ball = std::get<BallDomain>(domain);
    box.lo.resize(n);
    box.hi.resize(n);
    for (int i = 0; i < n; ++i) {
      box.lo[i] = ball.center[i] - ball.radius;
      box.hi[i] = ball.center[i] + ball.radius;
    }
  }
  const int per_axis = n <= 2 ? 7 : (n == 3 ? 5 : 3);
  std::vector<int> idx(n, 0);
  vec x(n);
  while (true) {
    for (int i = 0; i < n; ++i)
      x[i] = box.lo[i] +
             (box.hi[i] - box.lo[i]) * (idx[i] + 1.0) / (per_axis + 1.0);
    starts.push_back(project(domain, x));
    int k = n - 1;
    while (k >= 0 && ++idx[k] == per_axis) idx[k--] = 0;
    if (k < 0) break;
  }
  return starts;
}

}  // namespace

RootResult proof_homotopy(const MapSpec& f, const Domain& domain,
                          const Space& space, const vec& z,
                          const std::vector<double>& schedule,
                          double inner_tol) {
  const int n = domain_dim(domain);
  if (f.dim_in() != n || f.dim_out() != n || space.dim != n)
    throw dimension_error("homotopy: dimensions must agree");
  if (!domain_strictly_inside(domain, z))
    throw precondition_error("homotopy: z must lie strictly inside the domain");

  const std::vector<double> stages =
      schedule.empty() ? default_homotopy_schedule() : schedule;

  RootResult res;
  res.method = "homotopy";
  res.converged = true;
  vec x = z;  // the proof's lambda = 0 member
  vec best = x;
  double best_residual = kInf;
  int total_iters = 0;

  for (double weight : stages) {
    // Normalized regularized equation: (x - z + n f(x)) / (1 + n) = 0.
    MapSpec stage_map = MapSpec::from_function(
        n, n,
        [&f, &z, weight](const vec& p, double) {
          const vec fp = f.eval(p);
          vec g(p.size());
          for (std::size_t i = 0; i < p.size(); ++i)
            g[i] = (p[i] - z[i] + weight * fp[i]) / (1.0 + weight);
          return g;
        },
        false);
    int iters = 0;
    bool ok = newton_descent(stage_map, domain, x, inner_tol, 60, iters);
    total_iters += iters;
    if (!ok) {
      for (const vec& start : rescue_starts(domain, z)) {
        vec trial = start;
        int rescue_iters = 0;
        if (newton_descent(stage_map, domain, trial, inner_tol, 60,
                           rescue_iters)) {
          total_iters += rescue_iters;
          x = std::move(trial);
          ok = true;
          break;
        }
      }
    }
    const double residual = norm(space, f.eval(x));
    res.stages.push_back({weight, residual, ok});
    if (!ok) {
      res.converged = false;
      break;
    }
    if (residual < best_residual) {
      best_residual = residual;
      best = x;
    }
  }
  res.x = res.converged ? x : best;
  res.residual = norm(space, f.eval(res.x));
  res.iterations = total_iters;
  return res;
}

RootResult newton_project(const MapSpec& f, const Domain& domain,
                          const Space& space, const vec& x0, double tol,
                          int max_iter) {
  const int n = domain_dim(domain);
  if (f.dim_in() != n || f.dim_out() != n)
    throw dimension_error("newton: dimensions must agree");
  if (!domain_contains(domain, x0, 1e-12))
    throw precondition_error("newton: x0 must lie in the domain");

  RootResult res;
  res.method = "newton";
  vec x = project(domain, x0);
  int iters = 0;
  // Converge in the euclidean metric first, then report the problem norm.
  newton_descent(f, domain, x, tol, max_iter, iters);
  res.x = x;
  res.residual = norm(space, f.eval(x));
  res.iterations = iters;
  res.converged = res.residual <= tol;
  return res;
}

OraclePoint grid_oracle(const MapSpec& f, const Domain& domain,
                        int resolution) {
  const int n = domain_dim(domain);
  if (n > 4)
    throw unsupported_error("grid_oracle is limited to dimension <= 4");
  if (resolution < 2)
    throw precondition_error("grid_oracle: resolution must be >= 2");
  if (f.dim_in() != n)
    throw dimension_error("grid_oracle: dimensions must agree");

  BoxDomain box;
  if (const auto* b = std::get_if<BoxDomain>(&domain))
    box = *b;
  else if (const auto* hc = std::get_if<HilbertCubeDomain>(&domain))
    box = hc->as_box();
  else {
    const auto& ball = std::get<BallDomain>(domain);
    box.lo.resize(n);
    box.hi.resize(n);
    for (int i = 0; i < n; ++i) {
      box.lo[i] = ball.center[i] - ball.radius;
      box.hi[i] = ball.center[i] + ball.radius;
    }
  }

  OraclePoint bestp{vec(n, 0.0), kInf};
  std::vector<int> idx(n, 0);
  vec x(n);
  while (true) {
    for (int i = 0; i < n; ++i)
      x[i] = idx[i] == resolution - 1
                 ? box.hi[i]
                 : box.lo[i] + (box.hi[i] - box.lo[i]) * idx[i] / (resolution - 1);
    if (domain_contains(domain, x, 1e-12)) {
      const double r = norm_inf(f.eval(x));
      if (r < bestp.residual) {
        bestp.residual = r;
        bestp.x = x;
      }
    }
    int k = n - 1;
    while (k >= 0 && ++idx[k] == resolution) idx[k--] = 0;
    if (k < 0) break;
  }
  return bestp;
}

RootResult fixed_point_via_zero(const MapSpec& f, const BoxDomain& c,
                                double enclosing_radius, double tol) {
  c.validate();
  const int n = c.dim();
  if (f.dim_in() != n || f.dim_out() != n)
    throw dimension_error("fixed point: dimensions must agree");

  // The euclidean ball B_R[0] must contain C.
  double corner_norm = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    vec corner(n);
    for (int i = 0; i < n; ++i)
      corner[i] = (mask >> i) & 1u ? c.hi[i] : c.lo[i];
    corner_norm = std::max(corner_norm, norm2(corner));
  }
  if (corner_norm > enclosing_radius)
    throw precondition_error("fixed point: C is not contained in B_R[0]");

  // Spot-check that f maps C into C.
  const int density = n <= 2 ? 9 : 4;
  std::vector<vec> samples;
  for (const BoundarySample& s : boundary_grid(Domain{c}, density))
    samples.push_back(s.point);
  samples.push_back(c.center());
  for (const vec& s : samples)
    if (!c.contains(f.eval(s), 1e-9))
      throw precondition_error("fixed point: f does not map C into itself");

  const Space euclid{n, Norm::L2, 2.0};
  const Domain ball = BallDomain{vec(n, 0.0), enclosing_radius, euclid};
  MapSpec displacement = MapSpec::from_function(
      n, n,
      [&f, &c](const vec& x, double) {
        return sub(x, f.eval(project(c, x)));
      },
      false);

  RootResult res =
      proof_homotopy(displacement, ball, euclid, vec(n, 0.0), {}, tol * 1e-2);
  RootResult polish =
      newton_project(displacement, ball, euclid, res.x, tol * 1e-2);
  if (polish.residual <= res.residual) {
    polish.stages = std::move(res.stages);
    res = std::move(polish);
  }
  res.method = "fixed-point";

  // Land exactly on C and report the fixed-point defect there.
  res.x = project(c, res.x);
  res.residual = norm2(sub(res.x, f.eval(res.x)));
  res.converged = res.residual <= tol;
  return res;
}

}  // namespace bpm
