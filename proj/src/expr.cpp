#include "beurling/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <utility>

#include "beurling/errors.hpp"

namespace beurling {

ExprPtr make_constant(double value) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::constant;
  n->value = value;
  return n;
}

ExprPtr make_variable() {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::variable;
  return n;
}

ExprPtr make_unary(NodeKind kind, ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  return n;
}

ExprPtr make_binary(NodeKind kind, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

ExprPtr make_closure(std::string name, std::function<double(double)> fn,
                     std::function<double(double)> dfn,
                     std::function<double(double)> lfn,
                     std::function<double(double)> ifn) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::closure;
  n->name = std::move(name);
  n->fn = std::move(fn);
  n->dfn = std::move(dfn);
  n->lfn = std::move(lfn);
  n->ifn = std::move(ifn);
  return n;
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  double number = 0.0;
  std::string ident;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::end;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': current_.kind = Tok::plus; ++pos_; return;
      case '-': current_.kind = Tok::minus; ++pos_; return;
      case '*': current_.kind = Tok::star; ++pos_; return;
      case '/': current_.kind = Tok::slash; ++pos_; return;
      case '^': current_.kind = Tok::caret; ++pos_; return;
      case '(': current_.kind = Tok::lparen; ++pos_; return;
      case ')': current_.kind = Tok::rparen; ++pos_; return;
      case ',': current_.kind = Tok::comma; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_.kind = Tok::ident;
      current_.ident.assign(text_.substr(start, pos_ - start));
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  void lex_number() {
    std::size_t start = pos_;
    bool digits = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        // not an exponent after all (e.g. "2e" would be malformed; reject)
        throw ParseError("malformed exponent", mark);
      }
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    std::string slice(text_.substr(start, pos_ - start));
    char* end = nullptr;
    double v = std::strtod(slice.c_str(), &end);
    if (end == nullptr || *end != '\0' || !std::isfinite(v))
      throw ParseError("malformed number", start);
    current_.kind = Tok::number;
    current_.number = v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  ExprPtr run() {
    ExprPtr e = expr();
    const Token& t = lex_.peek();
    if (t.kind != Tok::end) throw ParseError("trailing input after expression", t.pos);
    return e;
  }

 private:
  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      Tok k = lex_.peek().kind;
      if (k != Tok::plus && k != Tok::minus) return lhs;
      lex_.take();
      ExprPtr rhs = term();
      lhs = make_binary(k == Tok::plus ? NodeKind::add : NodeKind::sub, std::move(lhs),
                        std::move(rhs));
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      Tok k = lex_.peek().kind;
      if (k != Tok::star && k != Tok::slash) return lhs;
      lex_.take();
      ExprPtr rhs = factor();
      lhs = make_binary(k == Tok::star ? NodeKind::mul : NodeKind::div, std::move(lhs),
                        std::move(rhs));
    }
  }

  ExprPtr factor() {
    ExprPtr b = base();
    if (lex_.peek().kind == Tok::caret) {
      lex_.take();
      ExprPtr e = factor();  // right associative
      return make_binary(NodeKind::pow, std::move(b), std::move(e));
    }
    return b;
  }

  ExprPtr base() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::number:
        return make_constant(t.number);
      case Tok::ident:
        if (t.ident == "x") return make_variable();
        return call(t);
      case Tok::lparen: {
        ExprPtr inner = expr();
        expect(Tok::rparen, "expected ')'");
        return inner;
      }
      default:
        throw ParseError("expected number, 'x', function call or '('", t.pos);
    }
  }

  ExprPtr call(const Token& name) {
    NodeKind kind;
    if (name.ident == "exp")
      kind = NodeKind::exp_fn;
    else if (name.ident == "log")
      kind = NodeKind::log_fn;
    else if (name.ident == "sqrt")
      kind = NodeKind::sqrt_fn;
    else
      throw ParseError("unknown identifier '" + name.ident + "'", name.pos);

    expect(Tok::lparen, "expected '(' after function name");
    if (lex_.peek().kind == Tok::rparen)
      throw ParseError(name.ident + " takes exactly one argument", lex_.peek().pos);
    ExprPtr arg = expr();
    if (lex_.peek().kind == Tok::comma)
      throw ParseError(name.ident + " takes exactly one argument", lex_.peek().pos);
    expect(Tok::rparen, "expected ')'");
    return make_unary(kind, std::move(arg));
  }

  void expect(Tok kind, const char* message) {
    const Token& t = lex_.peek();
    if (t.kind != kind) throw ParseError(message, t.pos);
    lex_.take();
  }

  Lexer lex_;
};

}  // namespace

ExprPtr parse_tree(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printing

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

// Precedence levels for rendering: additive 0, multiplicative 1, power 2,
// atoms 3. The grammar only allows atoms as the left operand of '^'.
int node_level(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::sub:
      return 0;
    case NodeKind::mul:
    case NodeKind::div:
      return 1;
    case NodeKind::pow:
      return 2;
    default:
      return 3;
  }
}

void print_rec(const ExprNode& n, int min_level, std::string& out) {
  int level = node_level(n);
  bool wrap = level < min_level;
  // Negative constants have no literal form; render through subtraction so
  // the output stays inside the grammar.
  if (n.kind == NodeKind::constant && n.value < 0) {
    out += "(0-";
    out += format_double(-n.value);
    out += ')';
    return;
  }
  if (wrap) out += '(';
  switch (n.kind) {
    case NodeKind::constant:
      out += format_double(n.value);
      break;
    case NodeKind::variable:
      out += 'x';
      break;
    case NodeKind::add:
      print_rec(*n.a, 0, out);
      out += '+';
      print_rec(*n.b, 1, out);
      break;
    case NodeKind::sub:
      print_rec(*n.a, 0, out);
      out += '-';
      print_rec(*n.b, 1, out);
      break;
    case NodeKind::mul:
      print_rec(*n.a, 1, out);
      out += '*';
      print_rec(*n.b, 2, out);
      break;
    case NodeKind::div:
      print_rec(*n.a, 1, out);
      out += '/';
      print_rec(*n.b, 2, out);
      break;
    case NodeKind::pow:
      print_rec(*n.a, 3, out);
      out += '^';
      print_rec(*n.b, 2, out);
      break;
    case NodeKind::exp_fn:
      out += "exp(";
      print_rec(*n.a, 0, out);
      out += ')';
      break;
    case NodeKind::log_fn:
      out += "log(";
      print_rec(*n.a, 0, out);
      out += ')';
      break;
    case NodeKind::sqrt_fn:
      out += "sqrt(";
      print_rec(*n.a, 0, out);
      out += ')';
      break;
    case NodeKind::closure:
      out += n.name.empty() ? std::string("<closure>") : n.name;
      break;
  }
  if (wrap) out += ')';
}

}  // namespace

std::string print_tree(const ExprNode& node) {
  std::string out;
  print_rec(node, 0, out);
  return out;
}

bool pure_expression(const ExprNode& node) {
  if (node.kind == NodeKind::closure) return false;
  if (node.a && !pure_expression(*node.a)) return false;
  if (node.b && !pure_expression(*node.b)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_rec(const ExprNode& n, double x) {
  switch (n.kind) {
    case NodeKind::constant: return n.value;
    case NodeKind::variable: return x;
    case NodeKind::add: return eval_rec(*n.a, x) + eval_rec(*n.b, x);
    case NodeKind::sub: return eval_rec(*n.a, x) - eval_rec(*n.b, x);
    case NodeKind::mul: return eval_rec(*n.a, x) * eval_rec(*n.b, x);
    case NodeKind::div: return eval_rec(*n.a, x) / eval_rec(*n.b, x);
    case NodeKind::pow: return std::pow(eval_rec(*n.a, x), eval_rec(*n.b, x));
    case NodeKind::exp_fn: return std::exp(eval_rec(*n.a, x));
    case NodeKind::log_fn: return std::log(eval_rec(*n.a, x));
    case NodeKind::sqrt_fn: return std::sqrt(eval_rec(*n.a, x));
    case NodeKind::closure: return n.fn(x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

ValueDeriv vd_rec(const ExprNode& n, double x, double max_step) {
  switch (n.kind) {
    case NodeKind::constant:
      return {n.value, 0.0};
    case NodeKind::variable:
      return {x, 1.0};
    case NodeKind::add: {
      auto [av, ad] = vd_rec(*n.a, x, max_step);
      auto [bv, bd] = vd_rec(*n.b, x, max_step);
      return {av + bv, ad + bd};
    }
    case NodeKind::sub: {
      auto [av, ad] = vd_rec(*n.a, x, max_step);
      auto [bv, bd] = vd_rec(*n.b, x, max_step);
      return {av - bv, ad - bd};
    }
    case NodeKind::mul: {
      auto [av, ad] = vd_rec(*n.a, x, max_step);
      auto [bv, bd] = vd_rec(*n.b, x, max_step);
      return {av * bv, ad * bv + av * bd};
    }
    case NodeKind::div: {
      auto [av, ad] = vd_rec(*n.a, x, max_step);
      auto [bv, bd] = vd_rec(*n.b, x, max_step);
      return {av / bv, (ad * bv - av * bd) / (bv * bv)};
    }
    case NodeKind::pow: {
      auto [av, ad] = vd_rec(*n.a, x, max_step);
      auto [bv, bd] = vd_rec(*n.b, x, max_step);
      double v = std::pow(av, bv);
      if (bd == 0.0) {
        // constant exponent: valid for av <= 0 as well when the power is
        return {v, bv * std::pow(av, bv - 1.0) * ad};
      }
      return {v, v * (bd * std::log(av) + bv * ad / av)};
    }
    case NodeKind::exp_fn: {
      auto [av, ad] = vd_rec(*n.a, x, max_step);
      double v = std::exp(av);
      return {v, v * ad};
    }
    case NodeKind::log_fn: {
      auto [av, ad] = vd_rec(*n.a, x, max_step);
      return {std::log(av), ad / av};
    }
    case NodeKind::sqrt_fn: {
      auto [av, ad] = vd_rec(*n.a, x, max_step);
      double v = std::sqrt(av);
      return {v, ad / (2.0 * v)};
    }
    case NodeKind::closure: {
      double v = n.fn(x);
      if (n.dfn) return {v, n.dfn(x)};
      double h = std::min(central_difference_step(x), max_step);
      return {v, (n.fn(x + h) - n.fn(x - h)) / (2.0 * h)};
    }
  }
  return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
}

}  // namespace

double eval_tree(const ExprNode& node, double x) {
  double v = eval_rec(node, x);
  if (!std::isfinite(v))
    throw EvalError(EvalError::Kind::nonfinite, "evaluation produced a non-finite value", x);
  return v;
}

ValueDeriv eval_tree_deriv(const ExprNode& node, double x, double max_step) {
  ValueDeriv vd = vd_rec(node, x, max_step);
  if (!std::isfinite(vd.value) || !std::isfinite(vd.deriv))
    throw EvalError(EvalError::Kind::nonfinite, "derivative evaluation produced a non-finite value",
                    x);
  return vd;
}

double central_difference_step(double x) {
  static const double croot = std::cbrt(std::numeric_limits<double>::epsilon());
  return croot * std::max(1.0, std::fabs(x));
}

}  // namespace beurling
