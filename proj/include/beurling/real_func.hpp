#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "beurling/expr.hpp"

namespace beurling {

/// Interval of admissible arguments. Defaults to the open positive half-line.
/// `lo_closed` lets components that must be integrable from the origin
/// declare 0 as an admissible endpoint.
struct Domain {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;

  bool contains(double x) const { return (lo_closed ? x >= lo : x > lo) && x < hi; }
};

/// A positive real function of one variable: an expression tree or an opaque
/// callable together with a domain, a display label and a positivity flag.
/// Evaluation checks the domain, finiteness, and (when flagged) positivity;
/// violations surface as EvalError.
class RealFunc {
 public:
  RealFunc() = default;

  bool valid() const { return static_cast<bool>(root_); }

  /// Checked evaluation.
  double operator()(double x) const;

  /// log f(x). Exact (no exp/log round trip) for exp-rooted expressions and
  /// closures constructed with a log-scale evaluator; otherwise log of the
  /// checked value. Lets ratio fields of rapidly growing functions stay
  /// finite far beyond the overflow point of f itself.
  double log_value(double x) const;

  /// True when log_value avoids evaluating f itself.
  bool has_exact_log() const;

  /// Closed-form running integral over [0, x], available for closures built
  /// with one (tabulated components). Checked with has_exact_integral().
  bool has_exact_integral() const;
  double integral_from_zero(double x) const;

  /// First derivative at an interior point x: chain rule over the tree,
  /// central differences across opaque callables.
  double derivative(double x) const;

  const Domain& domain() const { return domain_; }
  bool positive() const { return positive_; }
  const std::string& label() const { return label_; }

  /// Parseable text for expression-backed functions, display label otherwise.
  std::string print() const;
  bool expression_backed() const;

  const ExprPtr& tree() const { return root_; }

  RealFunc with_domain(Domain d) const;
  RealFunc with_label(std::string label) const;
  RealFunc marked_positive() const;

  static RealFunc from_tree(ExprPtr root, std::string label = {});

  struct ClosureSpec {
    std::function<double(double)> fn;        // required
    std::function<double(double)> deriv;     // optional exact derivative
    std::function<double(double)> log_fn;    // optional log-scale value
    std::function<double(double)> integral;  // optional exact integral over [0, x]
    Domain domain{};
    bool positive = false;
  };
  static RealFunc from_closure(std::string name, ClosureSpec spec);

  /// Pointwise product. Expression trees combine structurally; otherwise the
  /// product is an opaque callable (with a log-scale path when both factors
  /// have one).
  friend RealFunc operator*(const RealFunc& f, const RealFunc& g);

 private:
  ExprPtr root_;
  Domain domain_{};
  bool positive_ = false;
  std::string label_;
};

/// Parses an expression into a RealFunc on the default domain (0, inf).
/// The positivity flag is not set: it cannot be read off the syntax.
RealFunc parse_expr(std::string_view text);

// ---------------------------------------------------------------------------
// Built-in catalogue

enum class Family {
  const_c,            // constant c > 0
  power_alpha,        // x^alpha, 0 <= alpha < 1
  x_over_log,         // x / log x on (1, inf)
  identity_x,         // x
  gamma_rho_builtin,  // exp(rho*(x-1)), the unit-rate flow exponential
};

struct FamilySpec {
  Family family;
  double param = 0.0;  // c, alpha or rho; ignored by x_over_log / identity_x
};

/// Constructs a catalogue member. Parameter ranges are validated
/// (c > 0, 0 <= alpha < 1, rho finite); violations raise ValidationError.
RealFunc builtin_family(const FamilySpec& spec);

struct BuiltinInfo {
  std::string name;        // config identifier
  std::string signature;   // e.g. "const_c:c"
  std::string description;
};
const std::vector<BuiltinInfo>& builtin_catalogue();

/// Resolves "builtin:<name>[:param]" to a catalogue member; anything else is
/// parsed as an expression.
RealFunc resolve_func_spec(const std::string& spec);

}  // namespace beurling
