#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace srheat {

/// Result of a vector-valued adaptive integration.
template <std::size_t N> struct QuadratureResult {
  std::array<double, N> value{};
  std::array<double, N> error{};
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N> struct Panel {
  double a, b;
  std::array<double, N> value, error;
};

template <std::size_t N, class F> Panel<N> gk15(F &f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, N> kron{}, gauss{};
  const std::array<double, N> fc = f(c);
  for (std::size_t i = 0; i < N; ++i) {
    kron[i] = kWgk[7] * fc[i];
    gauss[i] = kWg[3] * fc[i];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const std::array<double, N> f1 = f(c - dx), f2 = f(c + dx);
    for (std::size_t i = 0; i < N; ++i) {
      const double s = f1[i] + f2[i];
      kron[i] += kWgk[j] * s;
      if (j % 2 == 1) gauss[i] += kWg[j / 2] * s;
    }
  }
  Panel<N> p{a, b, {}, {}};
  for (std::size_t i = 0; i < N; ++i) {
    p.value[i] = kron[i] * h;
    p.error[i] = std::abs((kron[i] - gauss[i]) * h);
  }
  return p;
}

} // namespace detail

/// Adaptive Gauss–Kronrod (G7/K15) integration of a vector-valued function on
/// [a, b]. The interval is first cut into `initial_panels` equal panels; the
/// panel with the largest tolerance-weighted error is bisected until every
/// component satisfies |error_i| <= max(abs_tol, rel_tol * |value_i|) or the
/// evaluation budget is spent. The error estimate is the plain |K15 − G7|,
/// which is conservative for smooth integrands.
template <std::size_t N, class F>
QuadratureResult<N> integrate_adaptive(F &&f, double a, double b, double abs_tol, double rel_tol,
                                       std::size_t max_evaluations, int initial_panels = 1) {
  using Panel = detail::Panel<N>;
  QuadratureResult<N> out;
  std::vector<Panel> panels;
  const int n0 = std::max(1, initial_panels);
  for (int k = 0; k < n0; ++k) {
    const double lo = a + (b - a) * k / n0, hi = k + 1 == n0 ? b : a + (b - a) * (k + 1) / n0;
    panels.push_back(detail::gk15<N>(f, lo, hi));
    out.evaluations += 15;
  }

  auto totals = [&](std::array<double, N> &value, std::array<double, N> &error) {
    value.fill(0.0);
    error.fill(0.0);
    for (const Panel &p : panels)
      for (std::size_t i = 0; i < N; ++i) {
        value[i] += p.value[i];
        error[i] += p.error[i];
      }
  };

  for (;;) {
    std::array<double, N> value, error, tol;
    totals(value, error);
    bool ok = true;
    for (std::size_t i = 0; i < N; ++i) {
      tol[i] = std::max(abs_tol, rel_tol * std::abs(value[i]));
      ok = ok && error[i] <= tol[i];
    }
    if (ok || out.evaluations + 30 > max_evaluations) {
      out.value = value;
      out.error = error;
      out.converged = ok;
      return out;
    }
    // bisect the panel contributing most to the worst-off components
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t k = 0; k < panels.size(); ++k) {
      double score = 0.0;
      for (std::size_t i = 0; i < N; ++i) score = std::max(score, panels[k].error[i] / tol[i]);
      if (score > worst_score) {
        worst_score = score;
        worst = k;
      }
    }
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    panels[worst] = detail::gk15<N>(f, p.a, mid);
    panels.push_back(detail::gk15<N>(f, mid, p.b));
    out.evaluations += 30;
  }
}

} // namespace srheat
