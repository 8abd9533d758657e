#pragma once

// A small arithmetic expression language so maps and ODE fields are plain
// problem data. Grammar (whitespace-insensitive):
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' factor)?     -- '^' right-associative,
//                                                    unary minus binds looser
//   atom   := number | variable | function '(' expr ')' | '(' expr ')'
//
// Variables are x1..xn and t; numbers are decimal with optional exponent
// (1.5e-3). Functions: sin cos tan exp log sqrt abs.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bpm/geometry.hpp"
#include "bpm/linalg.hpp"

namespace bpm {

enum class ExprFunc { Sin, Cos, Tan, Exp, Log, Sqrt, Abs };

struct ExprNode {
  enum class Kind { Number, Var, Time, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind;
  double value = 0.0;               // Number
  int var_index = -1;               // Var (0-based)
  ExprFunc func = ExprFunc::Sin;    // Call
  std::shared_ptr<const ExprNode> a, b;
};

// Immutable parsed expression; cheap to copy and safe to share.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  const ExprNode* node() const { return root_.get(); }
  bool empty() const { return root_ == nullptr; }

  double eval(const vec& x, double t) const;
  bool uses_time() const;
  std::string pretty() const;

 private:
  std::shared_ptr<const ExprNode> root_;
};

// Throws parse_error (with byte offset) on malformed text, unknown
// identifiers, or variable indices beyond `dim`.
Expr parse_expression(std::string_view text, int dim);

bool structurally_equal(const Expr& a, const Expr& b);

// A vector field R^dim_in -> R^dim_out, optionally time-dependent. Backed
// either by parsed expressions (compiled to a flat evaluation tape) or by
// a registered native function.
class MapSpec {
 public:
  using NativeFn = std::function<vec(const vec& x, double t)>;

  static MapSpec from_expressions(const std::vector<std::string>& components,
                                  int dim_in);
  static MapSpec from_exprs(std::vector<Expr> components, int dim_in);
  static MapSpec from_function(int dim_in, int dim_out, NativeFn fn,
                               bool time_dependent);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  bool time_dependent() const { return time_dependent_; }
  bool expression_backed() const { return !components_.empty(); }
  const std::vector<Expr>& components() const { return components_; }

  // Componentwise evaluation; throws eval_error (with component index) on
  // domain errors or non-finite results.
  vec eval(const vec& x) const;
  vec eval(const vec& x, double t) const;

 private:
  int dim_in_ = 0, dim_out_ = 0;
  bool time_dependent_ = false;
  std::vector<Expr> components_;
  NativeFn native_;

  struct TapeOp {
    int code;
    double value;
    int index;
  };
  std::vector<std::vector<TapeOp>> tapes_;
  int max_stack_ = 0;
  void compile();
};

// Central-difference Jacobian, one column per input coordinate. Passing
// h <= 0 selects the default 1e-6 * (1 + |x|_inf).
mat jacobian_fd(const MapSpec& m, const vec& x, double t = 0.0, double h = 0.0);

// inflation * max over a grid^n lattice of the operator norm (in the
// certification norm) of the finite-difference Jacobian. A sampling
// ESTIMATE, not a bound; callers with a hand-proved constant should use
// that instead. For time-dependent maps supply the time samples to scan.
double lipschitz_estimate(const MapSpec& m, const Domain& domain, int grid,
                          double inflation, const Space& cert_space,
                          const std::vector<double>& t_samples = {});

}  // namespace bpm
