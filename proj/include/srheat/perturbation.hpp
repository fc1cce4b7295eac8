#pragma once

#include "srheat/geometry.hpp"
#include "srheat/heisenberg.hpp"
#include "srheat/model.hpp"

#include <array>
#include <cstdint>
#include <utility>

namespace srheat {

/// γ = a x² + b x y + c y² as an expression in x, y.
Expr gamma_expr(const QuadraticModel &m);

/// f1 = ∂x − (y/2)(1+γ)∂w, f2 = ∂y + (x/2)(1+γ)∂w.
Frame model_frame(const QuadraticModel &m);

/// L = Σ a_jk ∂_j∂_k + Σ b_j ∂_j + c with symmetric a, coordinates (x, y, w).
struct SecondOrderOperator {
  std::array<std::array<Expr, 3>, 3> a;
  std::array<Expr, 3> b;
  Expr c;

  Expr apply(const Expr &phi) const;
  double apply(const Jet &phi, const Point &q) const;
  /// Formal adjoint for Lebesgue measure: L*φ = Σ ∂_jk(a_jk φ) − Σ ∂_j(b_j φ) + cφ,
  /// again written in the form above.
  SecondOrderOperator adjoint() const;
};

/// The ε² coefficient of Δ_{f^ε} for the model frame:
/// 𝒴 = (γ/2)(x²+y²)∂²_w + γ(x∂_wy − y∂_wx) − ½(xγ_y − yγ_x)∂_w − 2(γ_x∂_x + γ_y∂_y).
SecondOrderOperator perturbation_operator(const QuadraticModel &m);

struct EpsilonExpansionReport {
  double eps = 0;
  double frame_residual = 0; // sup |f_i^ε − (f̂_i ∓ ε²(coord/2)γ∂w)|
  double c12_residual = 0;   // sup |(c¹₁₂)^ε − 2ε²γ_y|, |(c²₁₂)^ε + 2ε²γ_x|
  double residual = 0;       // the larger of the two
};

/// Sup-norm residuals of the second-order expansion of the ε-approximated
/// model frame over the cube |x|, |y|, |w| ≤ 0.25. For quadratic γ the frame
/// expansion is exact and the structure constants deviate by
/// −4ε⁴γ∂γ/(1 + 2ε²γ). eps = 0 compares the nilpotent approximation.
EpsilonExpansionReport epsilon_expansion_check(const QuadraticModel &m, double eps);

struct DuhamelConfig {
  std::size_t n_samples = 100000;
  int s_strata = 32;
  std::uint64_t seed = 1;
  int steps_per_unit = 512; // base Heun steps per unit of sampled time
  int min_steps = 32;
  // The sampler takes refine·N Heun steps, N = max(min_steps, ⌈steps_per_unit·τ⌉),
  // driven by Brownian increments on a grid noise_substeps·N fine. refine = 2
  // with the same seed reruns on identical paths at twice the resolution.
  int refine = 1;
  int noise_substeps = 2;
  int threads = 0;
  QuadratureConfig quadrature{1e-11, 1e-9};

  void validate() const;
};

struct DuhamelEstimate {
  double k1 = 0;        // 16 K, the t-coefficient of 16t² p(t, 0, 0)
  double std_error = 0; // of k1
  double raw = 0;       // K = ∫₀¹∫ h_s 𝒴h_{1−s} dq ds
  double raw_std_error = 0;
  std::size_t n_samples = 0;
  int s_strata = 0;
  int steps_per_unit = 0; // effective, steps_per_unit·refine
};

/// Monte Carlo estimate of K = (h ∗ 𝒴h)(1, 0) = ∫₀¹ ∫ h_s(q) 𝒴h_{1−s}(q) dq ds.
/// s is stratified into equal cells; sample i goes to cell i mod s_strata.
/// For s < ½, q is drawn from h_s and 𝒴h_{1−s}(q) is averaged; for s ≥ ½ the
/// roles swap, q ~ h_{1−s} and 𝒴*h_s(q) is averaged, so the integrand never
/// involves a kernel at time close to 0. q is produced by the Heun scheme
/// (see DuhamelConfig for the step counts).
/// Throws UsageError for n_samples < 10⁴ or fewer than 2 samples per cell,
/// ToleranceError when a kernel evaluation fails or is not finite.
DuhamelEstimate duhamel_k1(const QuadraticModel &m, const DuhamelConfig &cfg);

/// Coefficients (of t⁻² and t⁻¹) of p(t, q, q) ≈ (1/16t²)(1 + κ(q) t).
std::pair<double, double> predicted_expansion(const Frame &F, const Point &q);

/// p(ε², 0, 0) = ε⁻⁴ p^ε(1, 0, 0).
double scaling_bridge(double p_eps_at_1, double eps);

} // namespace srheat
