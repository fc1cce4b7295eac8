#include "srheat/perturbation.hpp"
#include "srheat/diffusion.hpp"
#include "srheat/error.hpp"

#include "parallel.hpp"

#include <cmath>
#include <sstream>

namespace srheat {

namespace {

constexpr std::array<Var, 3> kVars = {Var::x, Var::y, Var::w};

bool is_zero(const Expr &e) { return e.is_constant(0.0); }

} // namespace

Expr gamma_expr(const QuadraticModel &m) {
  const Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
  return m.a * (x * x) + m.b * (x * y) + m.c * (y * y);
}

Frame model_frame(const QuadraticModel &m) {
  const Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
  const Expr s = 1 + gamma_expr(m);
  return Frame({Expr::constant(1), Expr(), -0.5 * y * s}, {Expr(), Expr::constant(1), 0.5 * x * s});
}

Expr SecondOrderOperator::apply(const Expr &phi) const {
  Expr out = c * phi;
  for (int j = 0; j < 3; ++j) {
    const Expr dj = differentiate(phi, kVars[j]);
    if (!is_zero(b[j])) out = out + b[j] * dj;
    for (int k = 0; k < 3; ++k)
      if (!is_zero(a[j][k])) out = out + a[j][k] * differentiate(dj, kVars[k]);
  }
  return out;
}

double SecondOrderOperator::apply(const Jet &phi, const Point &q) const {
  double out = eval(c, q) * phi.value;
  for (int j = 0; j < 3; ++j) {
    out += eval(b[j], q) * phi.gradient[j];
    for (int k = 0; k < 3; ++k) out += eval(a[j][k], q) * phi.hessian(j, k);
  }
  return out;
}

SecondOrderOperator SecondOrderOperator::adjoint() const {
  // ∂_jk(a_jk φ) = a_jk ∂_jk φ + 2(∂_k a_jk) ∂_j φ + (∂_jk a_jk) φ for symmetric a
  SecondOrderOperator out;
  out.a = a;
  out.c = c;
  for (int j = 0; j < 3; ++j) {
    out.b[j] = -b[j];
    out.c = out.c - differentiate(b[j], kVars[j]);
    for (int k = 0; k < 3; ++k) {
      if (is_zero(a[j][k])) continue;
      const Expr dk = differentiate(a[j][k], kVars[k]);
      out.b[j] = out.b[j] + 2 * dk;
      out.c = out.c + differentiate(dk, kVars[j]);
    }
  }
  return out;
}

SecondOrderOperator perturbation_operator(const QuadraticModel &m) {
  const Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
  const Expr g = gamma_expr(m);
  const Expr gx = differentiate(g, Var::x), gy = differentiate(g, Var::y);
  SecondOrderOperator Y;
  Y.a[2][2] = 0.5 * g * (x * x + y * y);
  Y.a[1][2] = Y.a[2][1] = 0.5 * g * x;
  Y.a[0][2] = Y.a[2][0] = -0.5 * g * y;
  Y.b = {-2 * gx, -2 * gy, -0.5 * (x * gy - y * gx)};
  return Y;
}

EpsilonExpansionReport epsilon_expansion_check(const QuadraticModel &m, double eps) {
  if (!(eps >= 0) || !std::isfinite(eps)) throw UsageError("eps must be non-negative");
  const Frame F = model_frame(m);
  const Frame Fe = eps == 0 ? nilpotent_approximation(F) : epsilon_approximation(F, eps);
  const CompiledField f1(Fe.f1()), f2(Fe.f2());
  const CompiledExpr c1(Fe.c12_1()), c2(Fe.c12_2());
  const double e2 = eps * eps;

  EpsilonExpansionReport r;
  r.eps = eps;
  constexpr int n = 9;
  constexpr double radius = 0.25;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = radius * (2.0 * i / (n - 1) - 1), y = radius * (2.0 * j / (n - 1) - 1);
        const Point q(x, y, radius * (2.0 * k / (n - 1) - 1));
        const double g = m.gamma(x, y);
        const Eigen::Vector3d e1(1, 0, -0.5 * y - e2 * 0.5 * y * g);
        const Eigen::Vector3d e2v(0, 1, 0.5 * x + e2 * 0.5 * x * g);
        r.frame_residual = std::max(
            {r.frame_residual, (f1(q) - e1).cwiseAbs().maxCoeff(), (f2(q) - e2v).cwiseAbs().maxCoeff()});
        r.c12_residual = std::max({r.c12_residual, std::abs(c1(q) - 2 * e2 * m.gamma_y(x, y)),
                                   std::abs(c2(q) + 2 * e2 * m.gamma_x(x, y))});
      }
  r.residual = std::max(r.frame_residual, r.c12_residual);
  return r;
}

void DuhamelConfig::validate() const {
  if (n_samples < 10000) throw UsageError("duhamel_k1 needs at least 10^4 samples");
  if (s_strata < 1) throw UsageError("s_strata must be positive");
  if (n_samples < 2 * static_cast<std::size_t>(s_strata)) {
    std::ostringstream os;
    os << "stratum starvation: " << n_samples << " samples cannot fill " << s_strata
       << " strata with at least 2 each";
    throw UsageError(os.str());
  }
  if (steps_per_unit < 1 || min_steps < 1) throw UsageError("step counts must be positive");
  if (refine < 1 || noise_substeps < 1 || noise_substeps % refine != 0)
    throw UsageError("noise_substeps must be a positive multiple of refine");
  quadrature.validate();
}

namespace {

// Running mean and sum of squared deviations, mergeable in a fixed order.
struct Accumulator {
  std::size_t n = 0;
  double mean = 0, m2 = 0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  void merge(const Accumulator &o) {
    if (o.n == 0) return;
    const double N = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * o.n / N;
    m2 += o.m2 + d * d * n * o.n / N;
    n += o.n;
  }
};

constexpr std::size_t kSamplesPerBlock = 4096;
constexpr std::uint64_t kDuhamelStream = 2;

} // namespace

DuhamelEstimate duhamel_k1(const QuadraticModel &m, const DuhamelConfig &cfg) {
  cfg.validate();
  const std::size_t S = static_cast<std::size_t>(cfg.s_strata);
  DuhamelEstimate est;
  est.n_samples = cfg.n_samples;
  est.s_strata = cfg.s_strata;
  est.steps_per_unit = cfg.steps_per_unit * cfg.refine;
  if (m.is_zero()) return est;

  const std::size_t n_blocks = (cfg.n_samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  std::vector<std::vector<Accumulator>> blocks(n_blocks, std::vector<Accumulator>(S));

  parallel_for(n_blocks, resolve_threads(cfg.threads), [&](std::size_t b) {
    std::mt19937_64 rng = block_engine(cfg.seed, kDuhamelStream, b);
    std::uniform_real_distribution<double> uniform;
    const std::size_t first = b * kSamplesPerBlock;
    const std::size_t last = std::min(cfg.n_samples, first + kSamplesPerBlock);
    for (std::size_t i = first; i < last; ++i) {
      const std::size_t j = i % S;
      const double s = (j + uniform(rng)) / S;
      // sample from the kernel at the shorter time, differentiate the longer one
      const bool swap = s >= 0.5;
      const double tau = swap ? 1 - s : s;
      const int base = std::max(cfg.min_steps, static_cast<int>(std::ceil(cfg.steps_per_unit * tau)));
      const GroupElement q =
          sample_heisenberg(tau, base * cfg.refine, cfg.noise_substeps / cfg.refine, rng);
      const YKernelValues v = y_kernel_values(1 - tau, q, m, cfg.quadrature);
      const double value = swap ? v.y_adjoint : v.y;
      if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "non-finite Duhamel integrand at s=" << s << ", q=(" << q.x << ", " << q.y << ", "
           << q.w << ")";
        throw ToleranceError(os.str(), std::numeric_limits<double>::infinity());
      }
      blocks[b][j].add(value);
    }
  });

  double variance = 0;
  for (std::size_t j = 0; j < S; ++j) {
    Accumulator acc;
    for (const auto &blk : blocks) acc.merge(blk[j]);
    if (acc.n < 2) throw UsageError("stratum starvation: a stratum received fewer than 2 samples");
    est.raw += acc.mean / S;
    variance += acc.m2 / (acc.n - 1) / acc.n / (double(S) * S);
  }
  est.raw_std_error = std::sqrt(variance);
  est.k1 = 16 * est.raw;
  est.std_error = 16 * est.raw_std_error;
  return est;
}

std::pair<double, double> predicted_expansion(const Frame &F, const Point &q) {
  return {1.0 / 16, kappa(F, q) / 16};
}

double scaling_bridge(double p_eps_at_1, double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw UsageError("eps must be positive");
  return p_eps_at_1 / std::pow(eps, 4);
}

} // namespace srheat
