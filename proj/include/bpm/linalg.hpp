#pragma once

// Small dense linear algebra helpers. Everything here targets desk-scale
// problems (n up to a few dozen); no attempt is made at cache blocking.

#include <cstddef>
#include <vector>

namespace bpm {

using vec = std::vector<double>;

struct mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major

  mat() = default;
  mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  static mat identity(int n);
};

vec add(const vec& x, const vec& y);
vec sub(const vec& x, const vec& y);
vec scale(double s, const vec& x);
// x + s*y
vec axpy(const vec& x, double s, const vec& y);
double dot(const vec& x, const vec& y);
double norm2(const vec& x);
double norm_inf(const vec& x);

vec matvec(const mat& m, const vec& x);
mat transpose_times(const mat& m);  // m^T * m

// Gaussian elimination with partial pivoting. Returns false when the
// matrix is numerically singular (x is then unspecified).
bool solve_linear(mat a, vec b, vec& x);

// Inverse via column-by-column solves. Returns false when singular.
bool invert(const mat& m, mat& out);

// Eigenvalues of a symmetric matrix by the cyclic Jacobi rotation method.
// Returned unsorted; the caller picks what it needs.
vec jacobi_eigenvalues(mat s, int max_sweeps = 64);

// Induced operator norms: max row sum (inf), max column sum (1).
double opnorm_inf(const mat& m);
double opnorm_one(const mat& m);
// Spectral norm via the Jacobi eigenvalues of m^T m.
double opnorm_two(const mat& m);

}  // namespace bpm
