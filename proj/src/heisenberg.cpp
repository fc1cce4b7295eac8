#include "srheat/heisenberg.hpp"
#include "srheat/error.hpp"
#include "srheat/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace srheat {

GroupElement group_mul(const GroupElement &p, const GroupElement &q) {
  return {p.x + q.x, p.y + q.y, p.w + q.w + 0.5 * (q.x * p.y - p.x * q.y)};
}

GroupElement group_inv(const GroupElement &q) { return {-q.x, -q.y, -q.w}; }

GroupElement dilate(const GroupElement &q, double lambda) {
  if (!(lambda > 0)) throw UsageError("dilation factor must be positive");
  return {lambda * q.x, lambda * q.y, lambda * lambda * q.w};
}

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0)) throw UsageError("quadrature tolerances must be positive");
  if (!(max_truncation > 0)) throw UsageError("max_truncation must be positive");
  if (max_nodes < 15) throw UsageError("max_nodes must allow at least one panel");
}

namespace {

// s/sinh s and s/tanh s with the removable singularity at 0 resolved.
inline double s_over_sinh(double s) {
  if (std::abs(s) < 1e-4) {
    const double s2 = s * s;
    return 1 - s2 / 6 + 7 * s2 * s2 / 360;
  }
  return s / std::sinh(s);
}

inline double s_over_tanh(double s) {
  if (std::abs(s) < 1e-4) {
    const double s2 = s * s;
    return 1 + s2 / 3 - s2 * s2 / 45;
  }
  return s / std::tanh(s);
}

double prefactor(double t) { return 1.0 / (2.0 * std::pow(2.0 * std::numbers::pi * t, 2)); }

enum class Part { I, Iu, Iuu, Iw, Iuw, Iww, It };

// Smallest S on a doubling grid such that the integrand envelope, padded by
// the polynomial factors the derivative integrands carry, is below `floor`.
double truncation(double t, double u, double w, double floor, double max_s) {
  auto envelope = [&](double s) {
    const double k = s_over_tanh(s);
    const double poly = std::pow(1 + s / t + std::abs(w) * s / (t * t), 2) *
                        std::pow(1 + k / (4 * t), 2) * (1 + u / t);
    return s_over_sinh(s) * std::exp(-u * k / (4 * t)) * poly;
  };
  double s = 4.0;
  while (s < max_s && envelope(s) > floor) s *= 1.5;
  return std::min(s, max_s);
}

int initial_panels(double S, double t, double w) {
  const double half_periods = S * std::abs(w) / (std::numbers::pi * t);
  return static_cast<int>(std::clamp(std::ceil(S / 4 + half_periods / 2), 4.0, 4000.0));
}

// ∫_ℝ of the kernel integrand (and its derivatives) for u = x² + y², times
// the prefactor 1/(2(2πt)²).
template <std::size_t N>
std::array<double, N> kernel_integrals(double t, double u, double w, const QuadratureConfig &cfg,
                                       const std::array<Part, N> &parts) {
  if (!(t > 0) || !std::isfinite(t)) throw UsageError("kernel time must be positive");
  cfg.validate();
  const double P = prefactor(t);
  const double abs_int = cfg.abs_tol / (2 * P);
  const double S = truncation(t, u, w, abs_int * 1e-1, cfg.max_truncation);

  auto integrand = [&](double s) {
    const double g = s_over_sinh(s), k = s_over_tanh(s);
    const double e = g * std::exp(-u * k / (4 * t));
    const double arg = w * s / t;
    const double c = std::cos(arg), sn = std::sin(arg);
    const double ku = k / (4 * t);
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      switch (parts[i]) {
      case Part::I: out[i] = e * c; break;
      case Part::Iu: out[i] = -e * c * ku; break;
      case Part::Iuu: out[i] = e * c * ku * ku; break;
      case Part::Iw: out[i] = -e * sn * s / t; break;
      case Part::Iuw: out[i] = e * sn * ku * s / t; break;
      case Part::Iww: out[i] = -e * c * (s / t) * (s / t); break;
      case Part::It: out[i] = e * (c * u * k / (4 * t * t) + sn * w * s / (t * t)); break;
      }
    }
    return out;
  };

  const QuadratureResult<N> r = integrate_adaptive<N>(integrand, 0.0, S, abs_int, cfg.rel_tol,
                                                      cfg.max_nodes, initial_panels(S, t, w));
  if (!r.converged) {
    double worst = 0;
    for (double e : r.error) worst = std::max(worst, 2 * P * e);
    std::ostringstream os;
    os << "heat kernel quadrature did not converge within " << cfg.max_nodes
       << " nodes (t=" << t << ", u=" << u << ", w=" << w << "), error estimate " << worst;
    throw ToleranceError(os.str(), worst);
  }
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = 2 * P * r.value[i];
  return out;
}

} // namespace

double heat_kernel(double t, const GroupElement &q, const QuadratureConfig &cfg) {
  return kernel_integrals<1>(t, q.x * q.x + q.y * q.y, q.w, cfg, {Part::I})[0];
}

KernelJet heat_kernel_jet(double t, const GroupElement &q, const QuadratureConfig &cfg) {
  const auto v = kernel_integrals<7>(t, q.x * q.x + q.y * q.y, q.w, cfg,
                                     {Part::I, Part::Iu, Part::Iuu, Part::Iw, Part::Iuw,
                                      Part::Iww, Part::It});
  const double h = v[0], hu = v[1], huu = v[2], hw = v[3], huw = v[4], hww = v[5];
  const double x = q.x, y = q.y;
  KernelJet j;
  j.value = h;
  j.gradient = {2 * x * hu, 2 * y * hu, hw};
  j.hessian(0, 0) = 4 * x * x * huu + 2 * hu;
  j.hessian(1, 1) = 4 * y * y * huu + 2 * hu;
  j.hessian(0, 1) = j.hessian(1, 0) = 4 * x * y * huu;
  j.hessian(0, 2) = j.hessian(2, 0) = 2 * x * huw;
  j.hessian(1, 2) = j.hessian(2, 1) = 2 * y * huw;
  j.hessian(2, 2) = hww;
  j.d_t = -2 * h / t + v[6];
  return j;
}

double heat_kernel_two_point(double t, const GroupElement &p, const GroupElement &q,
                             const QuadratureConfig &cfg) {
  return heat_kernel(t, group_mul(q, group_inv(p)), cfg);
}

double y_applied_kernel(double t, const GroupElement &q, const QuadraticModel &m,
                        const QuadratureConfig &cfg) {
  if (m.is_zero()) return 0.0;
  const double x = q.x, y = q.y;
  const double g = m.gamma(x, y), gx = m.gamma_x(x, y), gy = m.gamma_y(x, y);
  const KernelJet j = heat_kernel_jet(t, q, cfg);
  const Eigen::Matrix3d &H = j.hessian;
  const Eigen::Vector3d &d = j.gradient;
  return 0.5 * g * (x * x + y * y) * H(2, 2) + g * (x * H(1, 2) - y * H(0, 2)) -
         0.5 * (x * gy - y * gx) * d[2] - 2 * (gx * d[0] + gy * d[1]);
}

double y_adjoint_applied_kernel(double t, const GroupElement &q, const QuadraticModel &m,
                                const QuadratureConfig &cfg) {
  if (m.is_zero()) return 0.0;
  // With a_ww = γ(x²+y²)/2, a_wy = γx/2, a_wx = −γy/2 and b = (−2γ_x, −2γ_y,
  // −½(xγ_y − yγ_x)):  Σ∂_j a_jk = (0, 0, ½(xγ_y − yγ_x)), Σ∂_jk a_jk = 0 and
  // div b = −2Δγ = −4(a + c).
  const double x = q.x, y = q.y;
  const double g = m.gamma(x, y), gx = m.gamma_x(x, y), gy = m.gamma_y(x, y);
  const KernelJet j = heat_kernel_jet(t, q, cfg);
  const Eigen::Matrix3d &H = j.hessian;
  const Eigen::Vector3d &d = j.gradient;
  return 0.5 * g * (x * x + y * y) * H(2, 2) + g * (x * H(1, 2) - y * H(0, 2)) +
         1.5 * (x * gy - y * gx) * d[2] + 2 * (gx * d[0] + gy * d[1]) +
         4 * (m.a + m.c) * j.value;
}

YKernelValues y_kernel_values(double t, const GroupElement &q, const QuadraticModel &m,
                              const QuadratureConfig &cfg) {
  if (m.is_zero()) return {};
  const double x = q.x, y = q.y, u = x * x + y * y;
  const auto v = kernel_integrals<4>(t, u, q.w, cfg, {Part::I, Part::Iu, Part::Iw, Part::Iww});
  const double h = v[0], hu = v[1], hw = v[2], hww = v[3];
  const double g = m.gamma(x, y), gp = m.gamma_prime(x, y);
  const double common = 0.5 * g * u * hww;
  return {common + 0.5 * gp * hw - 8 * g * hu,
          common - 1.5 * gp * hw + 8 * g * hu + 4 * (m.a + m.c) * h};
}

double y_applied_kernel_closed_form(double t, const GroupElement &q, const QuadraticModel &m,
                                    double exponent_denominator, const QuadratureConfig &cfg) {
  if (!(t > 0)) throw UsageError("kernel time must be positive");
  if (!(exponent_denominator > 0)) throw UsageError("exponent denominator must be positive");
  cfg.validate();
  const double x = q.x, y = q.y, w = q.w, u = x * x + y * y;
  const double g = m.gamma(x, y), gp = m.gamma_prime(x, y);
  const double P = 1.0 / std::pow(4 * std::numbers::pi * t, 2);
  auto integrand = [&](double r) {
    const double k = s_over_tanh(r);
    const double e = s_over_sinh(r) * std::exp(-u * k / (exponent_denominator * t));
    // 4t/tanh r = 4t k / r, so r(…) is written without dividing by r
    const double bracket = g * std::cos(r * w / t) * (r * r * u - 4 * t * k) +
                           t * gp * r * std::sin(r * w / t);
    return std::array<double, 1>{-e * bracket / (t * t)};
  };
  const double abs_int = cfg.abs_tol / (2 * P);
  const double S = truncation(t, u * 4 / exponent_denominator, w, abs_int * 1e-1,
                              cfg.max_truncation);
  const auto r = integrate_adaptive<1>(integrand, 0.0, S, abs_int, cfg.rel_tol, cfg.max_nodes,
                                       initial_panels(S, t, w));
  if (!r.converged) throw ToleranceError("closed-form 𝒴h quadrature did not converge", 2 * P * r.error[0]);
  return 2 * P * r.value[0];
}

double box_mass(double t, double xy_half_width, double w_half_width,
                const QuadratureConfig &cfg) {
  if (!(t > 0)) throw UsageError("kernel time must be positive");
  if (!(xy_half_width > 0) || !(w_half_width > 0)) throw UsageError("box must be non-empty");
  cfg.validate();
  const double P = prefactor(t);
  const double X = xy_half_width, W = w_half_width;
  auto integrand = [&](double s) {
    const double alpha = s_over_tanh(s) / (4 * t);
    const double gauss = std::sqrt(std::numbers::pi / alpha) * std::erf(X * std::sqrt(alpha));
    // ∫_{−W}^{W} cos(ws/t) dw = 2 t sin(Ws/t)/s
    const double arg = W * s / t;
    const double wint = std::abs(arg) < 1e-8 ? 2 * W : 2 * t * std::sin(arg) / s;
    return std::array<double, 1>{s_over_sinh(s) * gauss * gauss * wint};
  };
  // the integrand decays like s e^{-s} · 4πt/s
  double S = 8;
  while (S < cfg.max_truncation && S * std::exp(-S) * 16 * t * (2 * W + 1) > cfg.abs_tol * 1e-2)
    S *= 1.5;
  S = std::min(S, cfg.max_truncation);
  const auto r = integrate_adaptive<1>(integrand, 0.0, S, cfg.abs_tol / (2 * P), cfg.rel_tol,
                                       cfg.max_nodes, initial_panels(S, t, W));
  if (!r.converged) throw ToleranceError("box-mass quadrature did not converge", 2 * P * r.error[0]);
  return 2 * P * r.value[0];
}

} // namespace srheat
