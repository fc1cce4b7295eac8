#pragma once

namespace srheat {

/// γ(x, y) = a x² + b x y + c y², the quadratic part of the normal form
/// f1 = ∂x − (y/2)(1+γ)∂w, f2 = ∂y + (x/2)(1+γ)∂w.
struct QuadraticModel {
  double a = 0, b = 0, c = 0;

  double gamma(double x, double y) const { return a * x * x + b * x * y + c * y * y; }
  double gamma_x(double x, double y) const { return 2 * a * x + b * y; }
  double gamma_y(double x, double y) const { return b * x + 2 * c * y; }
  /// γ′ = 2(a − c)xy + b(y² − x²) = −(x γ_y − y γ_x)
  double gamma_prime(double x, double y) const {
    return 2 * (a - c) * x * y + b * (y * y - x * x);
  }
  bool is_zero() const { return a == 0 && b == 0 && c == 0; }
};

} // namespace srheat
