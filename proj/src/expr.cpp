#include "srheat/expr.hpp"
#include "srheat/error.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

namespace srheat {

struct Expr::Node {
  Kind kind = Kind::constant;
  std::uint8_t op = 0;
  int exponent = 0;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

struct ExprBuilder {
  static Expr wrap(std::shared_ptr<const Expr::Node> n) { return Expr(std::move(n)); }
  static const std::shared_ptr<const Expr::Node> &node(const Expr &e) { return e.node_; }

  static Expr make(Expr::Kind kind, std::uint8_t op, int exponent, double value,
                   const Expr *lhs, const Expr *rhs) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->op = op;
    n->exponent = exponent;
    n->value = value;
    if (lhs) n->lhs = lhs->node_;
    if (rhs) n->rhs = rhs->node_;
    return Expr(std::move(n));
  }
};

const char *to_string(Var v) {
  switch (v) {
  case Var::x: return "x";
  case Var::y: return "y";
  case Var::w: return "w";
  }
  return "?";
}

namespace {

double apply_unary(UnaryOp op, double a) {
  switch (op) {
  case UnaryOp::neg: return -a;
  case UnaryOp::sin: return std::sin(a);
  case UnaryOp::cos: return std::cos(a);
  case UnaryOp::exp: return std::exp(a);
  case UnaryOp::log:
    if (!(a > 0.0)) throw DomainError("log of non-positive argument");
    return std::log(a);
  case UnaryOp::sinh: return std::sinh(a);
  case UnaryOp::cosh: return std::cosh(a);
  case UnaryOp::tanh: return std::tanh(a);
  case UnaryOp::sqrt:
    if (a < 0.0) throw DomainError("sqrt of negative argument");
    return std::sqrt(a);
  }
  return a;
}

double apply_binary(BinaryOp op, double a, double b) {
  switch (op) {
  case BinaryOp::add: return a + b;
  case BinaryOp::sub: return a - b;
  case BinaryOp::mul: return a * b;
  case BinaryOp::div:
    if (b == 0.0) throw DomainError("division by zero");
    return a / b;
  }
  return a;
}

double apply_power(double a, int n) {
  if (n < 0 && a == 0.0) throw DomainError("division by zero in negative power");
  return std::pow(a, n);
}

double checked(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value during evaluation");
  return v;
}

// Evaluate a constant operation for folding; fails on domain errors or
// non-finite results, in which case the node is kept symbolic.
template <class F> bool try_fold(F &&f, double &out) {
  try {
    out = f();
  } catch (const DomainError &) {
    return false;
  }
  return std::isfinite(out);
}

Expr make_binary(BinaryOp op, const Expr &a, const Expr &b) {
  if (a.is_constant() && b.is_constant()) {
    double v;
    if (try_fold([&] { return apply_binary(op, a.value(), b.value()); }, v))
      return Expr::constant(v);
  }
  return ExprBuilder::make(Expr::Kind::binary, static_cast<std::uint8_t>(op), 0, 0.0, &a, &b);
}

} // namespace

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = std::make_shared<Node>();
  node_ = zero;
}

Expr Expr::constant(double value) {
  return ExprBuilder::make(Kind::constant, 0, 0, value, nullptr, nullptr);
}

Expr Expr::variable(Var v) {
  return ExprBuilder::make(Kind::variable, static_cast<std::uint8_t>(v), 0, 0.0, nullptr,
                           nullptr);
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
Var Expr::var() const { return static_cast<Var>(node_->op); }
UnaryOp Expr::unary_op() const { return static_cast<UnaryOp>(node_->op); }
BinaryOp Expr::binary_op() const { return static_cast<BinaryOp>(node_->op); }
int Expr::exponent() const { return node_->exponent; }
Expr Expr::operand(int i) const { return Expr(i == 0 ? node_->lhs : node_->rhs); }

Expr apply(UnaryOp op, const Expr &arg) {
  if (arg.is_constant()) {
    double v;
    if (try_fold([&] { return apply_unary(op, arg.value()); }, v)) return Expr::constant(v);
  }
  if (op == UnaryOp::neg && arg.kind() == Expr::Kind::unary && arg.unary_op() == UnaryOp::neg)
    return arg.operand(0);
  return ExprBuilder::make(Expr::Kind::unary, static_cast<std::uint8_t>(op), 0, 0.0, &arg,
                           nullptr);
}

Expr operator-(const Expr &a) { return apply(UnaryOp::neg, a); }

Expr operator+(const Expr &a, const Expr &b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return make_binary(BinaryOp::add, a, b);
}

Expr operator-(const Expr &a, const Expr &b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return make_binary(BinaryOp::sub, a, b);
}

Expr operator*(const Expr &a, const Expr &b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return make_binary(BinaryOp::mul, a, b);
}

Expr operator/(const Expr &a, const Expr &b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  return make_binary(BinaryOp::div, a, b);
}

Expr pow(const Expr &base, int exponent) {
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) {
    double v;
    if (try_fold([&] { return apply_power(base.value(), exponent); }, v))
      return Expr::constant(v);
  }
  return ExprBuilder::make(Expr::Kind::power, 0, exponent, 0.0, &base, nullptr);
}

bool structurally_equal(const Expr &a, const Expr &b) {
  if (a.id() == b.id()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
  case Expr::Kind::constant: return a.value() == b.value();
  case Expr::Kind::variable: return a.var() == b.var();
  case Expr::Kind::unary:
    return a.unary_op() == b.unary_op() && structurally_equal(a.operand(0), b.operand(0));
  case Expr::Kind::binary:
    return a.binary_op() == b.binary_op() && structurally_equal(a.operand(0), b.operand(0)) &&
           structurally_equal(a.operand(1), b.operand(1));
  case Expr::Kind::power:
    return a.exponent() == b.exponent() && structurally_equal(a.operand(0), b.operand(0));
  }
  return false;
}

// ---------------------------------------------------------------------------
// Evaluation

double eval(const Expr &e, const Point &p) {
  switch (e.kind()) {
  case Expr::Kind::constant: return e.value();
  case Expr::Kind::variable: return p[static_cast<int>(e.var())];
  case Expr::Kind::unary: return checked(apply_unary(e.unary_op(), eval(e.operand(0), p)));
  case Expr::Kind::binary: {
    const double a = eval(e.operand(0), p);
    const double b = eval(e.operand(1), p);
    return checked(apply_binary(e.binary_op(), a, b));
  }
  case Expr::Kind::power: return checked(apply_power(eval(e.operand(0), p), e.exponent()));
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Differentiation and substitution

namespace {

class Differentiator {
public:
  explicit Differentiator(Var v) : v_(v) {}

  Expr operator()(const Expr &e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr d = derive(e);
    memo_.emplace(e.id(), d);
    return d;
  }

private:
  Expr derive(const Expr &e) {
    switch (e.kind()) {
    case Expr::Kind::constant: return Expr::constant(0.0);
    case Expr::Kind::variable: return Expr::constant(e.var() == v_ ? 1.0 : 0.0);
    case Expr::Kind::unary: {
      const Expr u = e.operand(0);
      const Expr du = (*this)(u);
      if (du.is_constant(0.0)) return du;
      switch (e.unary_op()) {
      case UnaryOp::neg: return -du;
      case UnaryOp::sin: return cos(u) * du;
      case UnaryOp::cos: return -(sin(u) * du);
      case UnaryOp::exp: return e * du;
      case UnaryOp::log: return du / u;
      case UnaryOp::sinh: return cosh(u) * du;
      case UnaryOp::cosh: return sinh(u) * du;
      case UnaryOp::tanh: return (1.0 - pow(e, 2)) * du;
      case UnaryOp::sqrt: return du / (2.0 * e);
      }
      return Expr::constant(0.0);
    }
    case Expr::Kind::binary: {
      const Expr a = e.operand(0);
      const Expr b = e.operand(1);
      const Expr da = (*this)(a);
      const Expr db = (*this)(b);
      switch (e.binary_op()) {
      case BinaryOp::add: return da + db;
      case BinaryOp::sub: return da - db;
      case BinaryOp::mul: return da * b + a * db;
      case BinaryOp::div:
        if (db.is_constant(0.0)) return da / b;
        return (da * b - a * db) / pow(b, 2);
      }
      return Expr::constant(0.0);
    }
    case Expr::Kind::power: {
      const Expr u = e.operand(0);
      const Expr du = (*this)(u);
      const int n = e.exponent();
      return static_cast<double>(n) * pow(u, n - 1) * du;
    }
    }
    return Expr::constant(0.0);
  }

  Var v_;
  std::unordered_map<const void *, Expr> memo_;
};

class Substituter {
public:
  explicit Substituter(const std::array<Expr, 3> &r) : r_(r) {}

  Expr operator()(const Expr &e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr out = rebuild(e);
    memo_.emplace(e.id(), out);
    return out;
  }

private:
  Expr rebuild(const Expr &e) {
    switch (e.kind()) {
    case Expr::Kind::constant: return e;
    case Expr::Kind::variable: return r_[static_cast<int>(e.var())];
    case Expr::Kind::unary: return apply(e.unary_op(), (*this)(e.operand(0)));
    case Expr::Kind::binary: {
      const Expr a = (*this)(e.operand(0));
      const Expr b = (*this)(e.operand(1));
      switch (e.binary_op()) {
      case BinaryOp::add: return a + b;
      case BinaryOp::sub: return a - b;
      case BinaryOp::mul: return a * b;
      case BinaryOp::div: return a / b;
      }
      return a;
    }
    case Expr::Kind::power: return pow((*this)(e.operand(0)), e.exponent());
    }
    return e;
  }

  const std::array<Expr, 3> &r_;
  std::unordered_map<const void *, Expr> memo_;
};

} // namespace

Expr differentiate(const Expr &e, Var v) { return Differentiator(v)(e); }

Expr substitute(const Expr &e, const std::array<Expr, 3> &replacement) {
  return Substituter(replacement)(e);
}

std::size_t node_count(const Expr &e) {
  std::unordered_set<const void *> seen;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur.id()).second) continue;
    switch (cur.kind()) {
    case Expr::Kind::unary:
    case Expr::Kind::power: stack.push_back(cur.operand(0)); break;
    case Expr::Kind::binary:
      stack.push_back(cur.operand(0));
      stack.push_back(cur.operand(1));
      break;
    default: break;
    }
  }
  return seen.size();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr &e) {
  switch (e.kind()) {
  case Expr::Kind::constant:
  case Expr::Kind::variable: return kPrecAtom;
  case Expr::Kind::unary: return e.unary_op() == UnaryOp::neg ? kPrecNeg : kPrecAtom;
  case Expr::Kind::binary:
    return (e.binary_op() == BinaryOp::add || e.binary_op() == BinaryOp::sub) ? kPrecAdd
                                                                              : kPrecMul;
  case Expr::Kind::power: return kPrecPow;
  }
  return kPrecAtom;
}

const char *function_name(UnaryOp op) {
  switch (op) {
  case UnaryOp::sin: return "sin";
  case UnaryOp::cos: return "cos";
  case UnaryOp::exp: return "exp";
  case UnaryOp::log: return "log";
  case UnaryOp::sinh: return "sinh";
  case UnaryOp::cosh: return "cosh";
  case UnaryOp::tanh: return "tanh";
  case UnaryOp::sqrt: return "sqrt";
  case UnaryOp::neg: return "-";
  }
  return "?";
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void render(const Expr &e, std::string &out);

void render_wrapped(const Expr &e, bool wrap, std::string &out) {
  if (wrap) out += '(';
  render(e, out);
  if (wrap) out += ')';
}

void render(const Expr &e, std::string &out) {
  switch (e.kind()) {
  case Expr::Kind::constant:
    if (std::signbit(e.value())) {
      out += "(";
      out += format_number(e.value());
      out += ")";
    } else {
      out += format_number(e.value());
    }
    return;
  case Expr::Kind::variable: out += to_string(e.var()); return;
  case Expr::Kind::unary:
    if (e.unary_op() == UnaryOp::neg) {
      out += '-';
      render_wrapped(e.operand(0), precedence(e.operand(0)) < kPrecNeg, out);
    } else {
      out += function_name(e.unary_op());
      out += '(';
      render(e.operand(0), out);
      out += ')';
    }
    return;
  case Expr::Kind::binary: {
    const int p = precedence(e);
    const char *sym = "+";
    switch (e.binary_op()) {
    case BinaryOp::add: sym = " + "; break;
    case BinaryOp::sub: sym = " - "; break;
    case BinaryOp::mul: sym = "*"; break;
    case BinaryOp::div: sym = "/"; break;
    }
    render_wrapped(e.operand(0), precedence(e.operand(0)) < p, out);
    out += sym;
    render_wrapped(e.operand(1), precedence(e.operand(1)) <= p, out);
    return;
  }
  case Expr::Kind::power:
    render_wrapped(e.operand(0), precedence(e.operand(0)) < kPrecAtom, out);
    out += '^';
    out += std::to_string(e.exponent());
    return;
  }
}

} // namespace

std::string to_string(const Expr &e) {
  std::string out;
  render(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary { '^' integer }
//   integer := ['-' | '+'] digits | '(' ['-' | '+'] digits ')'
//   primary := number | 'x' | 'y' | 'w' | 'pi' | func '(' expr ')' | '(' expr ')'

namespace {

const std::vector<std::string> kPrimaryStart = {"number", "identifier", "(", "-"};

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      fail({"+", "-", "*", "/", "^", "end of input"}, "unexpected character");
    return e;
  }

private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string &what) {
    std::string msg = "syntax error at offset " + std::to_string(pos_) + ": " + what +
                      "; expected one of:";
    for (const auto &s : expected) msg += " '" + s + "'";
    throw ParseError(pos_, std::move(expected), msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail({std::string(1, c)}, "missing token");
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = lhs + parse_term();
      else if (accept('-')) lhs = lhs - parse_term();
      else return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = lhs * parse_unary();
      else if (accept('/')) lhs = lhs / parse_unary();
      else return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    while (accept('^')) base = pow(base, parse_integer());
    return base;
  }

  int parse_integer() {
    const bool paren = accept('(');
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail({"integer exponent"}, "exponent must be an integer literal");
    int value = 0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail({"integer exponent"}, "exponent out of range");
    }
    if (paren) expect(')');
    return negative ? -value : value;
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail({"number"}, "malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = mark + 1;
        fail({"digit"}, "malformed exponent in number");
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || !std::isfinite(value)) {
      pos_ = start;
      fail({"number"}, "number out of range");
    }
    return Expr::constant(value);
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail(kPrimaryStart, "unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "x") return Expr::variable(Var::x);
      if (name == "y") return Expr::variable(Var::y);
      if (name == "w") return Expr::variable(Var::w);
      if (name == "pi") return Expr::constant(std::numbers::pi);
      static const std::pair<std::string_view, UnaryOp> functions[] = {
          {"sin", UnaryOp::sin},   {"cos", UnaryOp::cos},   {"exp", UnaryOp::exp},
          {"log", UnaryOp::log},   {"sinh", UnaryOp::sinh}, {"cosh", UnaryOp::cosh},
          {"tanh", UnaryOp::tanh}, {"sqrt", UnaryOp::sqrt}};
      for (const auto &[fname, op] : functions) {
        if (name == fname) {
          expect('(');
          Expr arg = parse_expr();
          expect(')');
          return apply(op, arg);
        }
      }
      throw UnknownIdentifierError(start, std::string(name));
    }
    fail(kPrimaryStart, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Compiled evaluation

CompiledExpr::CompiledExpr(const Expr &e) : CompiledExpr(std::vector<Expr>{e}) {}

CompiledExpr::CompiledExpr(const std::vector<Expr> &roots) {
  std::unordered_map<const void *, std::uint32_t> slot;
  // Iterative post-order so deep expressions do not exhaust the stack.
  struct Frame {
    Expr e;
    bool expanded;
  };
  std::vector<Frame> stack;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.push_back({*it, false});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (slot.count(f.e.id())) continue;
    const Expr::Kind k = f.e.kind();
    const int arity = k == Expr::Kind::binary                                     ? 2
                      : (k == Expr::Kind::unary || k == Expr::Kind::power) ? 1
                                                                                  : 0;
    if (!f.expanded && arity > 0) {
      stack.push_back({f.e, true});
      for (int i = arity - 1; i >= 0; --i) stack.push_back({f.e.operand(i), false});
      continue;
    }
    Instr in{k, 0, 0, 0, 0, 0.0};
    switch (k) {
    case Expr::Kind::constant: in.value = f.e.value(); break;
    case Expr::Kind::variable: in.op = static_cast<std::uint8_t>(f.e.var()); break;
    case Expr::Kind::unary:
      in.op = static_cast<std::uint8_t>(f.e.unary_op());
      in.a = slot.at(f.e.operand(0).id());
      break;
    case Expr::Kind::binary:
      in.op = static_cast<std::uint8_t>(f.e.binary_op());
      in.a = slot.at(f.e.operand(0).id());
      in.b = slot.at(f.e.operand(1).id());
      break;
    case Expr::Kind::power:
      in.exponent = f.e.exponent();
      in.a = slot.at(f.e.operand(0).id());
      break;
    }
    if (k != Expr::Kind::constant) constant_ = false;
    slot.emplace(f.e.id(), static_cast<std::uint32_t>(code_.size()));
    code_.push_back(in);
  }
  for (const Expr &r : roots) roots_.push_back(slot.at(r.id()));
}

double CompiledExpr::operator()(const Point &p) const {
  if (code_.empty()) return 0.0;
  double out;
  if (roots_.size() == 1) {
    evaluate(p, &out);
    return out;
  }
  std::vector<double> all(roots_.size());
  evaluate(p, all.data());
  return all.front();
}

void CompiledExpr::evaluate(const Point &p, double *out) const {
  constexpr std::size_t kStack = 128;
  if (code_.size() <= kStack) {
    double reg[kStack];
    run(p, reg);
    for (std::size_t i = 0; i < roots_.size(); ++i) out[i] = reg[roots_[i]];
  } else {
    thread_local std::vector<double> reg;
    if (reg.size() < code_.size()) reg.resize(code_.size());
    run(p, reg.data());
    for (std::size_t i = 0; i < roots_.size(); ++i) out[i] = reg[roots_[i]];
  }
}

void CompiledExpr::run(const Point &p, double *reg) const {
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr &in = code_[i];
    switch (in.kind) {
    case Expr::Kind::constant: reg[i] = in.value; break;
    case Expr::Kind::variable: reg[i] = p[in.op]; break;
    case Expr::Kind::unary:
      reg[i] = checked(apply_unary(static_cast<UnaryOp>(in.op), reg[in.a]));
      break;
    case Expr::Kind::binary:
      reg[i] = checked(apply_binary(static_cast<BinaryOp>(in.op), reg[in.a], reg[in.b]));
      break;
    case Expr::Kind::power: reg[i] = checked(apply_power(reg[in.a], in.exponent)); break;
    }
  }
}

} // namespace srheat
