#include "bpm/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace bpm {

mat mat::identity(int n) {
  mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

vec add(const vec& x, const vec& y) {
  assert(x.size() == y.size());
  vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

vec sub(const vec& x, const vec& y) {
  assert(x.size() == y.size());
  vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

vec scale(double s, const vec& x) {
  vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = s * x[i];
  return r;
}

vec axpy(const vec& x, double s, const vec& y) {
  assert(x.size() == y.size());
  vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + s * y[i];
  return r;
}

double dot(const vec& x, const vec& y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const vec& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

vec matvec(const mat& m, const vec& x) {
  assert(static_cast<int>(x.size()) == m.cols);
  vec r(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

mat transpose_times(const mat& m) {
  mat r(m.cols, m.cols);
  for (int i = 0; i < m.cols; ++i)
    for (int j = i; j < m.cols; ++j) {
      double s = 0.0;
      for (int k = 0; k < m.rows; ++k) s += m(k, i) * m(k, j);
      r(i, j) = s;
      r(j, i) = s;
    }
  return r;
}

bool solve_linear(mat a, vec b, vec& x) {
  assert(a.rows == a.cols && static_cast<int>(b.size()) == a.rows);
  const int n = a.rows;
  double scale = 0.0;
  for (double v : a.a) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-14 * (scale > 0 ? scale : 1.0);

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= tiny) return false;
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return true;
}

bool invert(const mat& m, mat& out) {
  assert(m.rows == m.cols);
  const int n = m.rows;
  out = mat(n, n);
  for (int c = 0; c < n; ++c) {
    vec e(n, 0.0), col;
    e[c] = 1.0;
    if (!solve_linear(m, e, col)) return false;
    for (int r = 0; r < n; ++r) out(r, c) = col[r];
  }
  return true;
}

vec jacobi_eigenvalues(mat s, int max_sweeps) {
  assert(s.rows == s.cols);
  const int n = s.rows;
  if (n == 1) return {s(0, 0)};

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (int i = 0; i < n; ++i) {
      diag += std::abs(s(i, i));
      for (int j = i + 1; j < n; ++j) off += std::abs(s(i, j));
    }
    if (off <= 1e-15 * (diag > 0 ? diag : 1.0)) break;

    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (apq == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < n; ++k) {
          const double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (int k = 0; k < n; ++k) {
          const double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
  }
  vec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = s(i, i);
  return ev;
}

double opnorm_inf(const mat& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

double opnorm_one(const mat& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

double opnorm_two(const mat& m) {
  vec ev = jacobi_eigenvalues(transpose_times(m));
  double lmax = 0.0;
  for (double v : ev) lmax = std::max(lmax, v);
  return std::sqrt(std::max(0.0, lmax));
}

}  // namespace bpm
