#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace beurling {

// Expression trees over a single free variable x.
//
// Grammar accepted by parse_tree():
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?          -- right associative
//   base   := number | 'x' | ident '(' expr ')' | '(' expr ')'
//   ident  := exp | log | sqrt
// Numbers are non-negative decimals with an optional exponent part; there is
// no unary minus (write 0-x).
//
// A `closure` node wraps an opaque double(double) callable so that functions
// assembled by numerical pipelines (flow exponentials, interpolants,
// extracted components) live in the same representation as parsed formulas.

enum class NodeKind {
  constant,
  variable,
  add,
  sub,
  mul,
  div,
  pow,
  exp_fn,
  log_fn,
  sqrt_fn,
  closure,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  double value = 0.0;  // constant
  ExprPtr a, b;        // operands; unary functions use `a`

  // closure payload
  std::function<double(double)> fn;   // value
  std::function<double(double)> dfn;  // derivative; empty -> central difference
  std::function<double(double)> lfn;  // log of value; empty -> log(fn(x))
  std::function<double(double)> ifn;  // exact integral over [0, x]; empty -> quadrature
  std::string name;                   // display name
};

ExprPtr make_constant(double value);
ExprPtr make_variable();
ExprPtr make_unary(NodeKind kind, ExprPtr a);
ExprPtr make_binary(NodeKind kind, ExprPtr a, ExprPtr b);
ExprPtr make_closure(std::string name, std::function<double(double)> fn,
                     std::function<double(double)> dfn = {},
                     std::function<double(double)> lfn = {},
                     std::function<double(double)> ifn = {});

/// Parses expression text. Throws ParseError with a byte offset on syntax
/// errors, unknown identifiers and arity mistakes.
ExprPtr parse_tree(std::string_view text);

/// Renders the tree back to text. Output of expression-only trees re-parses
/// to an equivalent tree; closure nodes render as their display name, which
/// generally does not re-parse.
std::string print_tree(const ExprNode& node);

/// True when no closure node occurs anywhere in the tree.
bool pure_expression(const ExprNode& node);

/// Plain evaluation. Non-finite results surface as EvalError(nonfinite).
double eval_tree(const ExprNode& node, double x);

struct ValueDeriv {
  double value;
  double deriv;
};

/// Evaluates value and first derivative in one pass. Derivatives of formula
/// nodes follow the chain rule exactly; closure nodes without an attached
/// derivative fall back to a central difference with step <= max_step.
ValueDeriv eval_tree_deriv(const ExprNode& node, double x, double max_step);

/// Central-difference step used by derivative fallbacks:
/// cbrt(machine epsilon) * max(1, |x|).
double central_difference_step(double x);

/// Shortest round-trip decimal rendering of a double (to_chars).
std::string format_double(double v);

}  // namespace beurling
