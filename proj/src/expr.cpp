#include "bpm/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "bpm/errors.hpp"

namespace bpm {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Number;
  n->value = v;
  return n;
}

NodePtr make_var(int idx) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Var;
  n->var_index = idx;
  return n;
}

NodePtr make_time() {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Time;
  return n;
}

NodePtr make_unary(Kind k, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_call(ExprFunc f, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Call;
  n->func = f;
  n->a = std::move(a);
  return n;
}

const std::map<std::string, ExprFunc, std::less<>>& function_table() {
  static const std::map<std::string, ExprFunc, std::less<>> table = {
      {"sin", ExprFunc::Sin}, {"cos", ExprFunc::Cos},   {"tan", ExprFunc::Tan},
      {"exp", ExprFunc::Exp}, {"log", ExprFunc::Log},   {"sqrt", ExprFunc::Sqrt},
      {"abs", ExprFunc::Abs}};
  return table;
}

const char* function_name(ExprFunc f) {
  switch (f) {
    case ExprFunc::Sin: return "sin";
    case ExprFunc::Cos: return "cos";
    case ExprFunc::Tan: return "tan";
    case ExprFunc::Exp: return "exp";
    case ExprFunc::Log: return "log";
    case ExprFunc::Sqrt: return "sqrt";
    case ExprFunc::Abs: return "abs";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("empty expression");
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg + " at offset " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (!peek_is(c)) return false;
    ++pos_;
    return true;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (consume('+'))
        lhs = make_binary(Kind::Add, std::move(lhs), parse_term());
      else if (consume('-'))
        lhs = make_binary(Kind::Sub, std::move(lhs), parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (true) {
      if (consume('*'))
        lhs = make_binary(Kind::Mul, std::move(lhs), parse_factor());
      else if (consume('/'))
        lhs = make_binary(Kind::Div, std::move(lhs), parse_factor());
      else
        return lhs;
    }
  }

  NodePtr parse_factor() {
    if (consume('-')) return make_unary(Kind::Neg, parse_factor());
    NodePtr base = parse_atom();
    if (consume('^'))
      return make_binary(Kind::Pow, std::move(base), parse_factor());
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a value");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [next, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(next - begin);
    return make_number(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name == "t") return make_time();

    if (name.size() >= 2 && name[0] == 'x') {
      int idx = 0;
      auto [next, ec] =
          std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (ec == std::errc() && next == name.data() + name.size()) {
        if (idx < 1 || idx > dim_) {
          pos_ = start;
          fail("variable index out of range (dim " + std::to_string(dim_) +
               "): " + std::string(name));
        }
        return make_var(idx - 1);
      }
    }

    auto it = function_table().find(name);
    if (it != function_table().end()) {
      if (!consume('(')) fail("expected '(' after function name");
      NodePtr arg = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return make_call(it->second, std::move(arg));
    }

    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }
};

double apply_function(ExprFunc f, double v) {
  switch (f) {
    case ExprFunc::Sin: return std::sin(v);
    case ExprFunc::Cos: return std::cos(v);
    case ExprFunc::Tan: return std::tan(v);
    case ExprFunc::Exp: return std::exp(v);
    case ExprFunc::Log:
      if (v <= 0.0) throw eval_error("log of non-positive value");
      return std::log(v);
    case ExprFunc::Sqrt:
      if (v < 0.0) throw eval_error("sqrt of negative value");
      return std::sqrt(v);
    case ExprFunc::Abs: return std::abs(v);
  }
  return 0.0;
}

double eval_node(const ExprNode* n, const vec& x, double t) {
  switch (n->kind) {
    case Kind::Number: return n->value;
    case Kind::Var: return x[n->var_index];
    case Kind::Time: return t;
    case Kind::Neg: return -eval_node(n->a.get(), x, t);
    case Kind::Add:
      return eval_node(n->a.get(), x, t) + eval_node(n->b.get(), x, t);
    case Kind::Sub:
      return eval_node(n->a.get(), x, t) - eval_node(n->b.get(), x, t);
    case Kind::Mul:
      return eval_node(n->a.get(), x, t) * eval_node(n->b.get(), x, t);
    case Kind::Div: {
      const double den = eval_node(n->b.get(), x, t);
      if (den == 0.0) throw eval_error("division by zero");
      return eval_node(n->a.get(), x, t) / den;
    }
    case Kind::Pow:
      return std::pow(eval_node(n->a.get(), x, t), eval_node(n->b.get(), x, t));
    case Kind::Call:
      return apply_function(n->func, eval_node(n->a.get(), x, t));
  }
  return 0.0;
}

void pretty_node(const ExprNode* n, std::string& out) {
  char buf[40];
  switch (n->kind) {
    case Kind::Number:
      std::snprintf(buf, sizeof buf, "%.17g", n->value);
      out += buf;
      return;
    case Kind::Var:
      out += "x" + std::to_string(n->var_index + 1);
      return;
    case Kind::Time:
      out += "t";
      return;
    case Kind::Neg:
      out += "(-";
      pretty_node(n->a.get(), out);
      out += ")";
      return;
    case Kind::Call:
      out += function_name(n->func);
      out += "(";
      pretty_node(n->a.get(), out);
      out += ")";
      return;
    default: {
      const char* op = n->kind == Kind::Add   ? " + "
                       : n->kind == Kind::Sub ? " - "
                       : n->kind == Kind::Mul ? "*"
                       : n->kind == Kind::Div ? "/"
                                              : "^";
      out += "(";
      pretty_node(n->a.get(), out);
      out += op;
      pretty_node(n->b.get(), out);
      out += ")";
      return;
    }
  }
}

bool uses_time_node(const ExprNode* n) {
  if (!n) return false;
  if (n->kind == Kind::Time) return true;
  return uses_time_node(n->a.get()) || uses_time_node(n->b.get());
}

}  // namespace

double Expr::eval(const vec& x, double t) const {
  assert(root_);
  const double v = eval_node(root_.get(), x, t);
  if (!std::isfinite(v)) throw eval_error("non-finite result");
  return v;
}

bool Expr::uses_time() const { return uses_time_node(root_.get()); }

std::string Expr::pretty() const {
  std::string out;
  if (root_) pretty_node(root_.get(), out);
  return out;
}

Expr parse_expression(std::string_view text, int dim) {
  return Expr(Parser(text, dim).parse());
}

bool structurally_equal(const Expr& a, const Expr& b) {
  struct Cmp {
    static bool eq(const ExprNode* x, const ExprNode* y) {
      if (!x || !y) return x == y;
      if (x->kind != y->kind) return false;
      switch (x->kind) {
        case Kind::Number: return x->value == y->value;
        case Kind::Var: return x->var_index == y->var_index;
        case Kind::Time: return true;
        case Kind::Call:
          if (x->func != y->func) return false;
          return eq(x->a.get(), y->a.get());
        default:
          return eq(x->a.get(), y->a.get()) && eq(x->b.get(), y->b.get());
      }
    }
  };
  return Cmp::eq(a.node(), b.node());
}

// --- MapSpec ---------------------------------------------------------------

namespace {

// Tape opcodes; values >= 100 are the function table.
enum : int {
  kPushConst = 0,
  kPushVar,
  kPushTime,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kCallBase = 100,
};

}  // namespace

void MapSpec::compile() {
  tapes_.clear();
  max_stack_ = 0;
  for (const Expr& e : components_) {
    std::vector<TapeOp> tape;
    int depth = 0, peak = 0;
    struct Walk {
      std::vector<TapeOp>& tape;
      int& depth;
      int& peak;
      void visit(const ExprNode* n) {
        switch (n->kind) {
          case Kind::Number:
            tape.push_back({kPushConst, n->value, 0});
            bump(+1);
            return;
          case Kind::Var:
            tape.push_back({kPushVar, 0.0, n->var_index});
            bump(+1);
            return;
          case Kind::Time:
            tape.push_back({kPushTime, 0.0, 0});
            bump(+1);
            return;
          case Kind::Neg:
            visit(n->a.get());
            tape.push_back({kNeg, 0.0, 0});
            return;
          case Kind::Call:
            visit(n->a.get());
            tape.push_back({kCallBase + static_cast<int>(n->func), 0.0, 0});
            return;
          default:
            visit(n->a.get());
            visit(n->b.get());
            tape.push_back({n->kind == Kind::Add   ? kAdd
                            : n->kind == Kind::Sub ? kSub
                            : n->kind == Kind::Mul ? kMul
                            : n->kind == Kind::Div ? kDiv
                                                   : kPow,
                            0.0, 0});
            bump(-1);
            return;
        }
      }
      void bump(int d) {
        depth += d;
        peak = std::max(peak, depth);
      }
    } walk{tape, depth, peak};
    walk.visit(e.node());
    max_stack_ = std::max(max_stack_, peak);
    tapes_.push_back(std::move(tape));
  }
}

MapSpec MapSpec::from_expressions(const std::vector<std::string>& components,
                                  int dim_in) {
  std::vector<Expr> exprs;
  exprs.reserve(components.size());
  for (const std::string& c : components)
    exprs.push_back(parse_expression(c, dim_in));
  return from_exprs(std::move(exprs), dim_in);
}

MapSpec MapSpec::from_exprs(std::vector<Expr> components, int dim_in) {
  MapSpec m;
  m.dim_in_ = dim_in;
  m.dim_out_ = static_cast<int>(components.size());
  m.components_ = std::move(components);
  for (const Expr& e : m.components_)
    if (e.uses_time()) m.time_dependent_ = true;
  m.compile();
  return m;
}

MapSpec MapSpec::from_function(int dim_in, int dim_out, NativeFn fn,
                               bool time_dependent) {
  MapSpec m;
  m.dim_in_ = dim_in;
  m.dim_out_ = dim_out;
  m.native_ = std::move(fn);
  m.time_dependent_ = time_dependent;
  return m;
}

vec MapSpec::eval(const vec& x) const {
  if (time_dependent_)
    throw eval_error("time-dependent map evaluated without t");
  return eval(x, 0.0);
}

vec MapSpec::eval(const vec& x, double t) const {
  if (static_cast<int>(x.size()) != dim_in_)
    throw dimension_error("eval: expected input dimension " +
                          std::to_string(dim_in_) + ", got " +
                          std::to_string(x.size()));
  if (native_) {
    vec out = native_(x, t);
    for (int i = 0; i < dim_out_; ++i)
      if (!std::isfinite(out[i]))
        throw eval_error("non-finite result", i);
    return out;
  }

  static thread_local std::vector<double> stack;
  if (static_cast<int>(stack.size()) < max_stack_) stack.resize(max_stack_);

  vec out(dim_out_);
  for (int c = 0; c < dim_out_; ++c) {
    int sp = 0;
    try {
      for (const TapeOp& op : tapes_[c]) {
        switch (op.code) {
          case kPushConst: stack[sp++] = op.value; break;
          case kPushVar: stack[sp++] = x[op.index]; break;
          case kPushTime: stack[sp++] = t; break;
          case kNeg: stack[sp - 1] = -stack[sp - 1]; break;
          case kAdd: stack[sp - 2] += stack[sp - 1]; --sp; break;
          case kSub: stack[sp - 2] -= stack[sp - 1]; --sp; break;
          case kMul: stack[sp - 2] *= stack[sp - 1]; --sp; break;
          case kDiv:
            if (stack[sp - 1] == 0.0) throw eval_error("division by zero");
            stack[sp - 2] /= stack[sp - 1];
            --sp;
            break;
          case kPow:
            stack[sp - 2] = std::pow(stack[sp - 2], stack[sp - 1]);
            --sp;
            break;
          default:
            stack[sp - 1] = apply_function(
                static_cast<ExprFunc>(op.code - kCallBase), stack[sp - 1]);
            break;
        }
      }
      if (!std::isfinite(stack[0]))
        throw eval_error("non-finite result");
    } catch (const eval_error& e) {
      throw eval_error(std::string(e.what()) + " in component " +
                       std::to_string(c + 1), c);
    }
    out[c] = stack[0];
  }
  return out;
}

mat jacobian_fd(const MapSpec& m, const vec& x, double t, double h) {
  if (h <= 0.0) h = 1e-6 * (1.0 + norm_inf(x));
  mat j(m.dim_out(), m.dim_in());
  vec xp = x, xm = x;
  for (int col = 0; col < m.dim_in(); ++col) {
    xp[col] = x[col] + h;
    xm[col] = x[col] - h;
    const vec fp = m.eval(xp, t);
    const vec fm = m.eval(xm, t);
    for (int row = 0; row < m.dim_out(); ++row)
      j(row, col) = (fp[row] - fm[row]) / (2.0 * h);
    xp[col] = x[col];
    xm[col] = x[col];
  }
  return j;
}

namespace {

BoxDomain bounding_box(const Domain& d) {
  if (const auto* b = std::get_if<BoxDomain>(&d)) return *b;
  if (const auto* ball = std::get_if<BallDomain>(&d)) {
    BoxDomain b;
    b.lo.resize(ball->dim());
    b.hi.resize(ball->dim());
    for (int i = 0; i < ball->dim(); ++i) {
      b.lo[i] = ball->center[i] - ball->radius;
      b.hi[i] = ball->center[i] + ball->radius;
    }
    return b;
  }
  return std::get<HilbertCubeDomain>(d).as_box();
}

}  // namespace

double lipschitz_estimate(const MapSpec& m, const Domain& domain, int grid,
                          double inflation, const Space& cert_space,
                          const std::vector<double>& t_samples) {
  if (grid < 2) throw precondition_error("lipschitz grid must be >= 2");
  if (m.time_dependent() && t_samples.empty())
    throw precondition_error(
        "time-dependent map needs explicit time samples for estimation");

  const BoxDomain box = bounding_box(domain);
  const int n = box.dim();
  if (n > kGridDimLimit)
    throw unsupported_error("lipschitz estimation lattice limited to dim <= " +
                            std::to_string(kGridDimLimit));

  std::vector<double> times = m.time_dependent() ? t_samples
                                                 : std::vector<double>{0.0};
  double worst = 0.0;
  std::vector<int> idx(n, 0);
  vec x(n);
  while (true) {
    for (int i = 0; i < n; ++i)
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * idx[i] / (grid - 1);
    for (double t : times)
      worst = std::max(
          worst, operator_norm_upper(cert_space, jacobian_fd(m, x, t)));
    int k = n - 1;
    while (k >= 0 && ++idx[k] == grid) idx[k--] = 0;
    if (k < 0) break;
  }
  return inflation * worst;
}

}  // namespace bpm
