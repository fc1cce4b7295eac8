#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace srheat {

/// A point (x, y, w) of R^3.
using Point = Eigen::Vector3d;

enum class Var : std::uint8_t { x = 0, y = 1, w = 2 };

constexpr std::array<Var, 3> kAllVars = {Var::x, Var::y, Var::w};

const char *to_string(Var v);

enum class UnaryOp : std::uint8_t { neg, sin, cos, exp, log, sinh, cosh, tanh, sqrt };
enum class BinaryOp : std::uint8_t { add, sub, mul, div };

/// Immutable scalar expression over the variables x, y, w.
///
/// Nodes are shared between expressions, so copying an Expr is cheap and
/// derivatives reuse the subtrees of their argument. All construction goes
/// through folding constructors: constant subexpressions are evaluated and
/// 0/1 operands are absorbed. No further simplification is attempted.
class Expr {
public:
  enum class Kind : std::uint8_t { constant, variable, unary, binary, power };

  struct Node;

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(Var v);

  Kind kind() const;
  double value() const;            // constant nodes
  Var var() const;                 // variable nodes
  UnaryOp unary_op() const;        // unary nodes
  BinaryOp binary_op() const;      // binary nodes
  int exponent() const;            // power nodes
  Expr operand(int i) const;       // unary: 0; binary: 0, 1; power: 0 (base)

  bool is_constant() const { return kind() == Kind::constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  /// Identity of the underlying node; shared subtrees compare equal.
  const void *id() const { return node_.get(); }

  friend Expr operator+(const Expr &a, const Expr &b);
  friend Expr operator-(const Expr &a, const Expr &b);
  friend Expr operator*(const Expr &a, const Expr &b);
  friend Expr operator/(const Expr &a, const Expr &b);
  friend Expr operator-(const Expr &a);
  friend Expr pow(const Expr &base, int exponent);
  friend Expr apply(UnaryOp op, const Expr &arg);

private:
  friend struct ExprBuilder;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(const Expr &a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr &b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr &a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr &b) { return Expr::constant(a) - b; }
inline Expr operator*(const Expr &a, double b) { return a * Expr::constant(b); }
inline Expr operator*(double a, const Expr &b) { return Expr::constant(a) * b; }
inline Expr operator/(const Expr &a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr &b) { return Expr::constant(a) / b; }

inline Expr sin(const Expr &e) { return apply(UnaryOp::sin, e); }
inline Expr cos(const Expr &e) { return apply(UnaryOp::cos, e); }
inline Expr exp(const Expr &e) { return apply(UnaryOp::exp, e); }
inline Expr log(const Expr &e) { return apply(UnaryOp::log, e); }
inline Expr sinh(const Expr &e) { return apply(UnaryOp::sinh, e); }
inline Expr cosh(const Expr &e) { return apply(UnaryOp::cosh, e); }
inline Expr tanh(const Expr &e) { return apply(UnaryOp::tanh, e); }
inline Expr sqrt(const Expr &e) { return apply(UnaryOp::sqrt, e); }

/// Structural equality of two ASTs (same shape, same constants).
bool structurally_equal(const Expr &a, const Expr &b);

/// Parse text in the expression grammar (docs/grammar.md).
/// Throws ParseError or UnknownIdentifierError.
Expr parse(std::string_view text);

/// Text that parses back to a structurally identical AST.
std::string to_string(const Expr &e);

/// Evaluate at p. Throws DomainError instead of producing NaN or infinity.
double eval(const Expr &e, const Point &p);

/// Exact symbolic partial derivative.
Expr differentiate(const Expr &e, Var v);

/// Replace every variable by the corresponding expression.
Expr substitute(const Expr &e, const std::array<Expr, 3> &replacement);

/// Count of distinct nodes reachable from e.
std::size_t node_count(const Expr &e);

/// Flat, common-subexpression-shared form of an Expr for repeated
/// evaluation. Results are identical to eval(), including domain errors.
class CompiledExpr {
public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr &e);
  /// Several outputs sharing one instruction stream (common subexpressions
  /// across the roots are evaluated once).
  explicit CompiledExpr(const std::vector<Expr> &roots);

  double operator()(const Point &p) const;
  /// Evaluates every root into out[0 .. outputs()).
  void evaluate(const Point &p, double *out) const;
  std::size_t outputs() const { return roots_.size(); }

  /// True when the expression folded to a constant.
  bool is_constant() const { return constant_; }
  std::size_t size() const { return code_.size(); }

private:
  struct Instr {
    Expr::Kind kind;
    std::uint8_t op;
    int exponent;
    std::uint32_t a;
    std::uint32_t b;
    double value;
  };

  void run(const Point &p, double *reg) const;

  std::vector<Instr> code_;
  std::vector<std::uint32_t> roots_;
  bool constant_ = true;
};

} // namespace srheat
