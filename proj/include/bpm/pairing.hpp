#pragma once

// Norms on R^n from the l^p family, selections from the normalized duality
// mapping J, and the semi-inner products <x,y>+ / <x,y>- built from it.
//
// J(y) = { j : <y,j> = |y|^2, |j|* = |y| } is set-valued for the non-smooth
// norms (l1 with zero coordinates, linf with ties). The selections here are
// deterministic:
//   linf  — among the coordinates attaining |y|_inf, pick the smallest index;
//   l1    — dual coordinates over zero entries of y are set to 0;
//   lp    — single-valued: j_i = |y|^(2-p) * |y_i|^(p-1) * sign(y_i);
//   l2    — j = y.
//
// <x,y>+ is the max of <x,j> over the extreme points of J(y), <x,y>- the min.
// Both reduce to the plain dot product with j(y) on the smooth norms.

#include <string>

#include "bpm/linalg.hpp"

namespace bpm {

enum class Norm { L1, L2, Lp, Linf };

struct Space {
  int dim = 0;
  Norm norm = Norm::L2;
  double p = 2.0;  // exponent, only meaningful for Norm::Lp

  void validate() const;  // throws dimension_error on bad dim / p
};

std::string norm_name(const Space& s);

enum class PairingKind { Plus, Minus, Ray };

double norm(const Space& s, const vec& x);
// Norm of a dual-space coordinate vector (conjugate exponent).
double dual_norm(const Space& s, const vec& j);

// One element of J(y), as a coordinate vector acting by the dot product.
vec duality_select(const Space& s, const vec& y);

// <x,y>+ (Plus), <x,y>- (Minus), or the ray functional: <x,y>+ when x is
// numerically collinear with y, 0 otherwise.
double pair(const Space& s, PairingKind kind, const vec& x, const vec& y);

// Collinearity threshold used by the Ray pairing and the ray condition
// check: x counts as a multiple of y when the Euclidean residual of the
// projection of x onto span{y} is at most kRayTol * |x|_2.
inline constexpr double kRayTol = 1e-9;

// Least-squares multiplier <x,y>_2 / <y,y>_2 (0 when y = 0) and the test
// itself; exposed for the ray-condition certifier.
double collinear_factor(const vec& x, const vec& y);
bool is_collinear(const vec& x, const vec& y);

// Upper bound on the operator norm induced by the space's vector norm.
// Exact for l1 (max column sum), l2 (spectral), linf (max row sum); for lp
// the Riesz-Thorin interpolation bound |A|_1^(1/p) * |A|_inf^(1-1/p).
double operator_norm_upper(const Space& s, const mat& m);

}  // namespace bpm
