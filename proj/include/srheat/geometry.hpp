#pragma once

#include "srheat/expr.hpp"

#include <Eigen/Dense>

#include <memory>

namespace srheat {

/// X = cx ∂x + cy ∂y + cw ∂w with symbolic coefficients.
struct VectorField {
  Expr cx, cy, cw;

  const Expr &operator[](int i) const { return i == 0 ? cx : (i == 1 ? cy : cw); }
  Expr &operator[](int i) { return i == 0 ? cx : (i == 1 ? cy : cw); }

  Eigen::Vector3d at(const Point &q) const;

  /// Directional derivative X(phi) as an expression.
  Expr apply(const Expr &phi) const;
};

VectorField operator+(const VectorField &a, const VectorField &b);
VectorField operator-(const VectorField &a, const VectorField &b);
VectorField operator-(const VectorField &a);
VectorField operator*(const Expr &s, const VectorField &a);
VectorField operator*(double s, const VectorField &a);

/// [X,Y]^k = Σ_j (X^j ∂_j Y^k − Y^j ∂_j X^k).
VectorField lie_bracket(const VectorField &X, const VectorField &Y);

/// Pullback by the dilation δ_ε(x,y,w) = (εx, εy, ε²w), scaled so that a field of
/// weighted order −k is mapped to itself for a homogeneous structure:
/// returns ε^order · Dδ_{1/ε} · X(δ_ε p).
VectorField dilate_field(const VectorField &X, double eps, int order);

/// f^ε = ε δ_{1/ε*} f, i.e. dilate_field(X, eps, 1).
VectorField epsilon_approximation(const VectorField &X, double eps);

/// Weight −1 homogeneous part at the origin (weights 1, 1, 2 for x, y, w):
/// cx(0) ∂x + cy(0) ∂y + (∂x cw(0) x + ∂y cw(0) y) ∂w.
VectorField nilpotent_approximation(const VectorField &X);

/// Evaluation-optimised copy of a VectorField.
class CompiledField {
public:
  CompiledField() = default;
  explicit CompiledField(const VectorField &X) : c_{CompiledExpr(X.cx), CompiledExpr(X.cy), CompiledExpr(X.cw)} {}

  Eigen::Vector3d operator()(const Point &q) const { return {c_[0](q), c_[1](q), c_[2](q)}; }

private:
  std::array<CompiledExpr, 3> c_;
};

struct StructureConstants {
  double c01_1 = 0, c01_2 = 0;
  double c02_1 = 0, c02_2 = 0;
  double c12_1 = 0, c12_2 = 0;
  double d_c12_1_along_f2 = 0; // f2(c¹₁₂)
  double d_c12_2_along_f1 = 0; // f1(c²₁₂)
};

struct Invariants {
  double chi = 0;
  double kappa = 0;
};

/// Value, gradient and Hessian of a scalar function at a point.
struct Jet {
  double value = 0;
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
  Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();
};

/// Contact points are rejected when cond₁[f1 f2 [f1,f2]] exceeds this.
inline constexpr double kMaxFrameCondition = 1e8;

/// Orthonormal frame (f1, f2) of a 3D contact sub-Riemannian structure.
///
/// Derived symbolic data (Reeb field, brackets, the c₁₂ coefficients) and
/// compiled evaluators are built on first use and shared between copies.
/// All queries are const and thread-safe.
class Frame {
public:
  Frame(VectorField f1, VectorField f2);

  const VectorField &f1() const { return f1_; }
  const VectorField &f2() const { return f2_; }

  /// f0 = v + α f1 + β f2 with v = [f2,f1], α = ω([v,f2]), β = −ω([v,f1]),
  /// where ω(X) = det[f1,f2,X] / det[f1,f2,v].
  const VectorField &reeb() const;

  /// c¹₁₂ and c²₁₂ as expressions (c¹₁₂ = −ω([v,f2]), c²₁₂ = ω([v,f1])).
  const Expr &c12_1() const;
  const Expr &c12_2() const;

  /// 1-norm condition number of the matrix [f1 f2 [f1,f2]] at q.
  double condition(const Point &q) const;
  /// Throws DegenerateFrameError when condition(q) exceeds kMaxFrameCondition.
  void check_contact(const Point &q) const;

  /// Numerical values at q of f1, f2 and the drift c²₁₂ f1 − c¹₁₂ f2; used by
  /// the diffusion integrator. Checks the contact condition.
  void horizontal_at(const Point &q, Eigen::Vector3d &f1, Eigen::Vector3d &f2,
                     Eigen::Vector3d &drift) const;

  /// Opaque cached data; defined in geometry.cpp.
  struct Derived;
  const Derived &derived() const;

private:
  VectorField f1_, f2_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

Frame heisenberg_frame();

/// The frame (λ f1, λ f2).
Frame scale_frame(const Frame &F, double lambda);

/// f̃1 = cosθ f1 + sinθ f2, f̃2 = −sinθ f1 + cosθ f2.
Frame rotate_frame(const Frame &F, const Expr &theta);

Frame epsilon_approximation(const Frame &F, double eps);
Frame nilpotent_approximation(const Frame &F);

/// Expresses [f1,f0], [f2,f0], [f2,f1] in the basis (f1, f2, f0) at q; the
/// derivatives of c₁₂ come from implicit differentiation of that solve.
StructureConstants structure_constants(const Frame &F, const Point &q);

/// √(−det C) with C = [[c¹₀₁, (c²₀₁+c¹₀₂)/2], [(c²₀₁+c¹₀₂)/2, c²₀₂]].
double chi(const StructureConstants &c);
double chi(const Frame &F, const Point &q);

/// f2(c¹₁₂) − f1(c²₁₂) − (c¹₁₂)² − (c²₁₂)² + (c²₀₁ − c¹₀₂)/2.
double kappa(const StructureConstants &c);
double kappa(const Frame &F, const Point &q);

Invariants invariants(const Frame &F, const Point &q);

/// Δ_f φ = f1²φ + f2²φ + c²₁₂ f1φ − c¹₁₂ f2φ, symbolically.
Expr sublaplacian(const Frame &F, const Expr &phi);
double sublaplacian_apply(const Frame &F, const Expr &phi, const Point &q);
/// Same operator applied to a function known only through its 2-jet at q.
double sublaplacian_apply(const Frame &F, const Jet &phi, const Point &q);

/// Divergence with respect to the Popp volume:
/// ⟨ν1,[f1,X]⟩ + ⟨ν2,[f2,X]⟩ + ⟨ν0,[f0,X]⟩ with (ν1,ν2,ν0) dual to (f1,f2,f0).
double divergence(const Frame &F, const VectorField &X, const Point &q);

/// ∇φ = f1(φ) f1 + f2(φ) f2.
VectorField horizontal_gradient(const Frame &F, const Expr &phi);

} // namespace srheat
