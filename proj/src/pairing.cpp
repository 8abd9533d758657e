#include "bpm/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bpm/errors.hpp"

namespace bpm {

namespace {

void check_dim(const Space& s, const vec& x, const char* what) {
  if (static_cast<int>(x.size()) != s.dim)
    throw dimension_error(std::string(what) + ": expected dimension " +
                          std::to_string(s.dim) + ", got " +
                          std::to_string(x.size()));
}

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

void Space::validate() const {
  if (dim < 1) throw dimension_error("space dimension must be >= 1");
  if (norm == Norm::Lp && !(p > 1.0 && std::isfinite(p)))
    throw dimension_error("lp exponent must satisfy 1 < p < inf");
}

std::string norm_name(const Space& s) {
  switch (s.norm) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
    case Norm::Lp: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "lp(%.17g)", s.p);
      return buf;
    }
  }
  return "?";
}

double norm(const Space& s, const vec& x) {
  check_dim(s, x, "norm");
  switch (s.norm) {
    case Norm::L1: {
      double r = 0.0;
      for (double v : x) r += std::abs(v);
      return r;
    }
    case Norm::L2:
      return norm2(x);
    case Norm::Linf:
      return norm_inf(x);
    case Norm::Lp: {
      // Scaled to avoid overflow for large entries.
      double m = norm_inf(x);
      if (m == 0.0) return 0.0;
      double r = 0.0;
      for (double v : x) r += std::pow(std::abs(v) / m, s.p);
      return m * std::pow(r, 1.0 / s.p);
    }
  }
  return 0.0;
}

double dual_norm(const Space& s, const vec& j) {
  Space d = s;
  switch (s.norm) {
    case Norm::L1: d.norm = Norm::Linf; break;
    case Norm::Linf: d.norm = Norm::L1; break;
    case Norm::L2: break;
    case Norm::Lp: d.p = s.p / (s.p - 1.0); break;
  }
  return norm(d, j);
}

vec duality_select(const Space& s, const vec& y) {
  check_dim(s, y, "duality_select");
  const int n = s.dim;
  vec j(n, 0.0);
  switch (s.norm) {
    case Norm::L2:
      return y;
    case Norm::L1: {
      double ny = 0.0;
      for (double v : y) ny += std::abs(v);
      for (int i = 0; i < n; ++i) j[i] = ny * sign(y[i]);
      return j;
    }
    case Norm::Linf: {
      const double m = norm_inf(y);
      if (m == 0.0) return j;
      for (int i = 0; i < n; ++i)
        if (std::abs(y[i]) == m) {
          j[i] = m * sign(y[i]);
          return j;  // smallest attaining index
        }
      return j;
    }
    case Norm::Lp: {
      const double ny = norm(s, y);
      if (ny == 0.0) return j;
      const double f = std::pow(ny, 2.0 - s.p);
      for (int i = 0; i < n; ++i)
        j[i] = f * std::pow(std::abs(y[i]), s.p - 1.0) * sign(y[i]);
      return j;
    }
  }
  return j;
}

double collinear_factor(const vec& x, const vec& y) {
  const double yy = dot(y, y);
  if (yy == 0.0) return 0.0;
  return dot(x, y) / yy;
}

bool is_collinear(const vec& x, const vec& y) {
  const double lambda = collinear_factor(x, y);
  const vec resid = axpy(x, -lambda, y);
  return norm2(resid) <= kRayTol * norm2(x);
}

namespace {

// max/min of <x, j> over the extreme points of J(y).
double pair_extremes(const Space& s, const vec& x, const vec& y, bool want_max) {
  const int n = s.dim;
  switch (s.norm) {
    case Norm::L2:
      return dot(x, y);
    case Norm::Lp:
      return dot(x, duality_select(s, y));
    case Norm::Linf: {
      // Extreme points: |y|_inf * sign(y_i) * e_i over argmax coordinates.
      const double m = norm_inf(y);
      if (m == 0.0) return 0.0;
      double best = want_max ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (std::abs(y[i]) != m) continue;
        const double v = m * sign(y[i]) * x[i];
        best = want_max ? std::max(best, v) : std::min(best, v);
      }
      return best;
    }
    case Norm::L1: {
      // j = |y|_1 * s with s_i = sign(y_i) on the support of y and
      // s_i = +-1 on zero coordinates; the extreme choice per zero
      // coordinate is independent, so the max/min separates.
      double ny = 0.0;
      for (double v : y) ny += std::abs(v);
      if (ny == 0.0) return 0.0;
      double base = 0.0, slack = 0.0;
      for (int i = 0; i < n; ++i) {
        if (y[i] != 0.0)
          base += x[i] * sign(y[i]);
        else
          slack += std::abs(x[i]);
      }
      return ny * (want_max ? base + slack : base - slack);
    }
  }
  return 0.0;
}

}  // namespace

double operator_norm_upper(const Space& s, const mat& m) {
  switch (s.norm) {
    case Norm::Linf: return opnorm_inf(m);
    case Norm::L1: return opnorm_one(m);
    case Norm::L2: return opnorm_two(m);
    case Norm::Lp:
      return std::pow(opnorm_one(m), 1.0 / s.p) *
             std::pow(opnorm_inf(m), 1.0 - 1.0 / s.p);
  }
  return 0.0;
}

double pair(const Space& s, PairingKind kind, const vec& x, const vec& y) {
  check_dim(s, x, "pair");
  check_dim(s, y, "pair");
  switch (kind) {
    case PairingKind::Plus:
      return pair_extremes(s, x, y, true);
    case PairingKind::Minus:
      return pair_extremes(s, x, y, false);
    case PairingKind::Ray:
      return is_collinear(x, y) ? pair_extremes(s, x, y, true) : 0.0;
  }
  return 0.0;
}

}  // namespace bpm
