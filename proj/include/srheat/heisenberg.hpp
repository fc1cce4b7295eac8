#pragma once

#include "srheat/geometry.hpp"
#include "srheat/model.hpp"

#include <Eigen/Dense>

namespace srheat {

/// A point of the Heisenberg group H₃ in exponential coordinates.
struct GroupElement {
  double x = 0, y = 0, w = 0;

  Point point() const { return {x, y, w}; }
  static GroupElement from(const Point &p) { return {p.x(), p.y(), p.z()}; }
  bool operator==(const GroupElement &) const = default;
};

/// (x,y,w)∘(x′,y′,w′) = (x+x′, y+y′, w+w′+½(x′y − xy′)).
GroupElement group_mul(const GroupElement &p, const GroupElement &q);
GroupElement group_inv(const GroupElement &q);
/// δ_λ(x,y,w) = (λx, λy, λ²w).
GroupElement dilate(const GroupElement &q, double lambda);

struct QuadratureConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  double max_truncation = 200; // the s-integral is taken over [−S, S], S ≤ this
  std::size_t max_nodes = 200000;

  void validate() const;
};

/// h_t and its derivatives at one point: gradient/Hessian in (x, y, w) and ∂_t.
struct KernelJet {
  double value = 0;
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
  Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();
  double d_t = 0;

  Jet spatial() const { return {value, gradient, hessian}; }
};

/// h_t(x,y,w) = 1/(2(2πt)²) ∫ (s/sinh s) exp(−s(x²+y²)/(4t tanh s)) cos(ws/t) ds.
/// Throws ToleranceError if the quadrature cannot meet cfg.
double heat_kernel(double t, const GroupElement &q, const QuadratureConfig &cfg = {});

/// All first and second spatial derivatives and ∂_t, by differentiating under
/// the integral sign.
KernelJet heat_kernel_jet(double t, const GroupElement &q, const QuadratureConfig &cfg = {});

/// H(t, p, q) = h_t(q ∘ p⁻¹).
double heat_kernel_two_point(double t, const GroupElement &p, const GroupElement &q,
                             const QuadratureConfig &cfg = {});

/// 𝒴h_t(q) for the quadratic model, where
/// 𝒴 = (γ/2)(x²+y²)∂²_w + γ(x∂_wy − y∂_wx) − ½(xγ_y − yγ_x)∂_w − 2(γ_x∂_x + γ_y∂_y),
/// assembled term by term from the kernel jet.
double y_applied_kernel(double t, const GroupElement &q, const QuadraticModel &m,
                        const QuadratureConfig &cfg = {});

/// 𝒴*h_t(q), the formal adjoint of 𝒴 (Lebesgue measure) applied to h_t:
/// 𝒴*φ = Σ ∂_jk(a_jk φ) − Σ ∂_j(b_j φ).
double y_adjoint_applied_kernel(double t, const GroupElement &q, const QuadraticModel &m,
                                const QuadratureConfig &cfg = {});

struct YKernelValues {
  double y = 0;         // 𝒴h_t(q)
  double y_adjoint = 0; // 𝒴*h_t(q)
};

/// Both of the above from four integrals. h_t depends on (x, y) only through
/// u = x² + y², so the mixed terms x∂_wy − y∂_wx cancel and, with
/// x γ_x + y γ_y = 2γ,
///   𝒴h  = (γu/2) h_ww + ½γ′ h_w − 8γ h_u,
///   𝒴*h = (γu/2) h_ww − (3/2)γ′ h_w + 8γ h_u + 4(a + c) h.
YKernelValues y_kernel_values(double t, const GroupElement &q, const QuadraticModel &m,
                              const QuadratureConfig &cfg = {});

/// The single-integral closed form of 𝒴h_t,
///   −1/(4πt)² ∫ (r/sinh r) exp(−r(x²+y²)/(D t tanh r)) (r/t²)
///     [γ cos(rw/t)(r(x²+y²) − 4t/tanh r) + t γ′ sin(rw/t)] dr.
/// With D = 4 this equals y_applied_kernel; D = 2 reproduces a variant with
/// the exponent halved, kept for comparison only.
double y_applied_kernel_closed_form(double t, const GroupElement &q, const QuadraticModel &m,
                                    double exponent_denominator = 4,
                                    const QuadratureConfig &cfg = {});

/// ∫ h_t over the box |x|, |y| ≤ xy_half_width, |w| ≤ w_half_width; the x, y
/// and w integrations are done in closed form (erf and sine integrals of the
/// integrand), leaving a single s-quadrature.
double box_mass(double t, double xy_half_width, double w_half_width,
                const QuadratureConfig &cfg = {});

} // namespace srheat
