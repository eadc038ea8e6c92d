#include "beurling/real_func.hpp"

#include <cmath>
#include <utility>

#include "beurling/errors.hpp"

namespace beurling {

namespace {

[[noreturn]] void invalid_func() {
  throw ValidationError("operation on an empty RealFunc");
}

}  // namespace

double RealFunc::operator()(double x) const {
  if (!root_) invalid_func();
  if (!domain_.contains(x))
    throw EvalError(EvalError::Kind::domain,
                    label_ + ": argument " + format_double(x) + " outside domain", x);
  double v = eval_tree(*root_, x);
  if (positive_ && v <= 0.0)
    throw EvalError(EvalError::Kind::nonpositive,
                    label_ + ": declared positive but evaluated to " + format_double(v), x);
  return v;
}

bool RealFunc::has_exact_log() const {
  if (!root_) return false;
  if (root_->kind == NodeKind::exp_fn) return true;
  return root_->kind == NodeKind::closure && static_cast<bool>(root_->lfn);
}

double RealFunc::log_value(double x) const {
  if (!root_) invalid_func();
  if (!domain_.contains(x))
    throw EvalError(EvalError::Kind::domain,
                    label_ + ": argument " + format_double(x) + " outside domain", x);
  if (root_->kind == NodeKind::exp_fn) {
    double h = eval_tree(*root_->a, x);
    return h;  // finite by eval_tree contract
  }
  if (root_->kind == NodeKind::closure && root_->lfn) {
    double h = root_->lfn(x);
    if (!std::isfinite(h))
      throw EvalError(EvalError::Kind::nonfinite, label_ + ": log-scale value not finite", x);
    return h;
  }
  double v = (*this)(x);
  if (v <= 0.0)
    throw EvalError(EvalError::Kind::nonpositive,
                    label_ + ": log requested for non-positive value", x);
  return std::log(v);
}

double RealFunc::derivative(double x) const {
  if (!root_) invalid_func();
  if (!domain_.contains(x))
    throw EvalError(EvalError::Kind::domain,
                    label_ + ": derivative argument " + format_double(x) + " outside domain", x);
  // keep difference stencils inside the domain
  double max_step = std::numeric_limits<double>::infinity();
  double gap_lo = x - domain_.lo;
  if (std::isfinite(gap_lo)) max_step = std::min(max_step, 0.45 * gap_lo);
  double gap_hi = domain_.hi - x;
  if (std::isfinite(gap_hi)) max_step = std::min(max_step, 0.45 * gap_hi);
  if (!(max_step > 0.0))
    throw EvalError(EvalError::Kind::domain, label_ + ": derivative needs an interior point", x);
  return eval_tree_deriv(*root_, x, max_step).deriv;
}

std::string RealFunc::print() const {
  if (!root_) invalid_func();
  return print_tree(*root_);
}

bool RealFunc::expression_backed() const { return root_ && pure_expression(*root_); }

RealFunc RealFunc::with_domain(Domain d) const {
  RealFunc out = *this;
  out.domain_ = d;
  return out;
}

RealFunc RealFunc::with_label(std::string label) const {
  RealFunc out = *this;
  out.label_ = std::move(label);
  return out;
}

RealFunc RealFunc::marked_positive() const {
  RealFunc out = *this;
  out.positive_ = true;
  return out;
}

RealFunc RealFunc::from_tree(ExprPtr root, std::string label) {
  RealFunc f;
  f.root_ = std::move(root);
  f.label_ = label.empty() ? print_tree(*f.root_) : std::move(label);
  return f;
}

RealFunc RealFunc::from_closure(std::string name, ClosureSpec spec) {
  RealFunc f;
  f.root_ = make_closure(name, std::move(spec.fn), std::move(spec.deriv), std::move(spec.log_fn),
                         std::move(spec.integral));
  f.domain_ = spec.domain;
  f.positive_ = spec.positive;
  f.label_ = std::move(name);
  return f;
}

bool RealFunc::has_exact_integral() const {
  return root_ && root_->kind == NodeKind::closure && static_cast<bool>(root_->ifn);
}

double RealFunc::integral_from_zero(double x) const {
  if (!has_exact_integral())
    throw NumericError("function '" + label_ + "' carries no closed-form integral");
  const double v = root_->ifn(x);
  if (!std::isfinite(v))
    throw EvalError(EvalError::Kind::nonfinite,
                    "integral of '" + label_ + "' not finite at " + format_double(x), x);
  return v;
}

RealFunc operator*(const RealFunc& f, const RealFunc& g) {
  if (!f.root_ || !g.root_) invalid_func();
  Domain d;
  d.lo = std::max(f.domain_.lo, g.domain_.lo);
  d.hi = std::min(f.domain_.hi, g.domain_.hi);
  d.lo_closed = (f.domain_.lo <= d.lo && (f.domain_.lo < d.lo || f.domain_.lo_closed)) &&
                (g.domain_.lo <= d.lo && (g.domain_.lo < d.lo || g.domain_.lo_closed));
  RealFunc out;
  if (pure_expression(*f.root_) && pure_expression(*g.root_)) {
    out.root_ = make_binary(NodeKind::mul, f.root_, g.root_);
    out.label_ = print_tree(*out.root_);
  } else {
    auto fr = f.root_, gr = g.root_;
    std::function<double(double)> lfn;
    if (f.has_exact_log() && g.has_exact_log()) {
      RealFunc fc = f, gc = g;
      lfn = [fc, gc](double x) { return fc.log_value(x) + gc.log_value(x); };
    }
    out.root_ = make_closure("(" + f.label_ + ")*(" + g.label_ + ")",
                             [fr, gr](double x) { return eval_tree(*fr, x) * eval_tree(*gr, x); },
                             {}, std::move(lfn));
    out.label_ = out.root_->name;
  }
  out.domain_ = d;
  out.positive_ = f.positive_ && g.positive_;
  return out;
}

RealFunc parse_expr(std::string_view text) {
  return RealFunc::from_tree(parse_tree(text));
}

// ---------------------------------------------------------------------------
// Built-in catalogue

RealFunc builtin_family(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::const_c: {
      if (!(spec.param > 0.0) || !std::isfinite(spec.param))
        throw ValidationError("const_c requires c > 0");
      return RealFunc::from_tree(make_constant(spec.param)).marked_positive();
    }
    case Family::power_alpha: {
      if (!(spec.param >= 0.0 && spec.param < 1.0))
        throw ValidationError("power_alpha requires 0 <= alpha < 1");
      auto tree = make_binary(NodeKind::pow, make_variable(), make_constant(spec.param));
      return RealFunc::from_tree(std::move(tree)).marked_positive();
    }
    case Family::x_over_log: {
      auto tree = make_binary(NodeKind::div, make_variable(),
                              make_unary(NodeKind::log_fn, make_variable()));
      Domain d;
      d.lo = 1.0;  // log x must be positive
      return RealFunc::from_tree(std::move(tree)).with_domain(d).marked_positive();
    }
    case Family::identity_x:
      return RealFunc::from_tree(make_variable()).marked_positive();
    case Family::gamma_rho_builtin: {
      if (!std::isfinite(spec.param))
        throw ValidationError("gamma_rho_builtin requires finite rho");
      auto tree = make_unary(
          NodeKind::exp_fn,
          make_binary(NodeKind::mul, make_constant(spec.param),
                      make_binary(NodeKind::sub, make_variable(), make_constant(1.0))));
      return RealFunc::from_tree(std::move(tree)).marked_positive();
    }
  }
  throw ValidationError("unknown builtin family");
}

const std::vector<BuiltinInfo>& builtin_catalogue() {
  static const std::vector<BuiltinInfo> catalogue = {
      {"const_c", "builtin:const_c:<c>", "constant c > 0"},
      {"power_alpha", "builtin:power_alpha:<alpha>", "x^alpha with 0 <= alpha < 1"},
      {"x_over_log", "builtin:x_over_log", "x / log x on (1, inf)"},
      {"identity_x", "builtin:identity_x", "x"},
      {"gamma_rho_builtin", "builtin:gamma_rho_builtin:<rho>", "exp(rho*(x-1))"},
  };
  return catalogue;
}

RealFunc resolve_func_spec(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) != 0) return parse_expr(spec);

  std::string rest = spec.substr(prefix.size());
  std::string name = rest;
  bool has_param = false;
  double param = 0.0;
  if (auto colon = rest.find(':'); colon != std::string::npos) {
    name = rest.substr(0, colon);
    std::string ptext = rest.substr(colon + 1);
    char* end = nullptr;
    param = std::strtod(ptext.c_str(), &end);
    if (ptext.empty() || end == nullptr || *end != '\0')
      throw ValidationError("bad builtin parameter in '" + spec + "'");
    has_param = true;
  }

  Family family;
  bool wants_param;
  if (name == "const_c") {
    family = Family::const_c;
    wants_param = true;
  } else if (name == "power_alpha") {
    family = Family::power_alpha;
    wants_param = true;
  } else if (name == "x_over_log") {
    family = Family::x_over_log;
    wants_param = false;
  } else if (name == "identity_x") {
    family = Family::identity_x;
    wants_param = false;
  } else if (name == "gamma_rho_builtin") {
    family = Family::gamma_rho_builtin;
    wants_param = true;
  } else {
    throw ValidationError("unknown builtin '" + name + "'");
  }
  if (wants_param != has_param)
    throw ValidationError(wants_param ? "builtin '" + name + "' needs a parameter"
                                      : "builtin '" + name + "' takes no parameter");
  return builtin_family({family, param});
}

}  // namespace beurling
