#include "srheat/diffusion.hpp"
#include "srheat/error.hpp"

#include "parallel.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <set>

namespace srheat {

void PathConfig::validate() const {
  if (!(t_final > 0) || !std::isfinite(t_final)) throw UsageError("t_final must be positive");
  if (n_steps < 64) throw UsageError("n_steps must be at least 64");
  if (n_paths < 1000) throw UsageError("n_paths must be at least 1000");
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char *env = std::getenv("SRHEAT_THREADS")) {
    int n = 0;
    const char *end = env + std::char_traits<char>::length(env);
    if (std::from_chars(env, end, n).ec == std::errc() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr std::size_t kPathsPerBlock = 4096;
constexpr double kExplosionRadius = 1e6;

enum class PathOutcome { ok, exploded, degenerate };

PathOutcome heun_path(const Frame &F, Point &q, double dt, int n_steps, std::mt19937_64 &rng,
                      std::normal_distribution<double> &normal) {
  const double sd = std::sqrt(dt);
  Eigen::Vector3d f1, f2, drift, g1, g2, gdrift;
  try {
    for (int k = 0; k < n_steps; ++k) {
      const double dW1 = sd * normal(rng), dW2 = sd * normal(rng);
      F.horizontal_at(q, f1, f2, drift);
      const Point predictor = q + std::numbers::sqrt2 * (f1 * dW1 + f2 * dW2) + drift * dt;
      F.horizontal_at(predictor, g1, g2, gdrift);
      q += 0.5 * std::numbers::sqrt2 * ((f1 + g1) * dW1 + (f2 + g2) * dW2) +
           0.5 * (drift + gdrift) * dt;
      if (!(q.norm() <= kExplosionRadius)) return PathOutcome::exploded;
    }
  } catch (const DegenerateFrameError &) {
    return PathOutcome::degenerate;
  } catch (const DomainError &) {
    return PathOutcome::degenerate;
  }
  return PathOutcome::ok;
}

} // namespace

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

EndpointSamples simulate_endpoints(const Frame &F, const Point &start, const PathConfig &cfg,
                                   int threads) {
  cfg.validate();
  F.check_contact(start);
  F.reeb(); // build the shared derived data before workers start

  struct Block {
    std::vector<Point> points;
    std::size_t exploded = 0, degenerate = 0;
  };
  const std::size_t n_blocks = (cfg.n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
  std::vector<Block> blocks(n_blocks);
  const double dt = cfg.t_final / cfg.n_steps;

  parallel_for(n_blocks, resolve_threads(threads), [&](std::size_t b) {
    std::mt19937_64 rng = block_engine(cfg.seed, 0, b);
    std::normal_distribution<double> normal;
    const std::size_t first = b * kPathsPerBlock;
    const std::size_t count = std::min(kPathsPerBlock, cfg.n_paths - first);
    Block &out = blocks[b];
    out.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      Point q = start;
      switch (heun_path(F, q, dt, cfg.n_steps, rng, normal)) {
      case PathOutcome::ok: out.points.push_back(q); break;
      case PathOutcome::exploded: ++out.exploded; break;
      case PathOutcome::degenerate: ++out.degenerate; break;
      }
    }
  });

  EndpointSamples result;
  result.start = start;
  result.t = cfg.t_final;
  result.points.reserve(cfg.n_paths);
  for (const Block &b : blocks) {
    result.points.insert(result.points.end(), b.points.begin(), b.points.end());
    result.aborted_explosion += b.exploded;
    result.aborted_degenerate += b.degenerate;
  }
  return result;
}

GroupElement sample_heisenberg(double t, int n_steps, std::mt19937_64 &rng) {
  return sample_heisenberg(t, n_steps, 1, rng);
}

GroupElement sample_heisenberg(double t, int n_steps, int substeps, std::mt19937_64 &rng) {
  // Heun for f̂1 = ∂x − (y/2)∂w, f̂2 = ∂y + (x/2)∂w. The fields are affine, so
  // the corrector averages them at the step midpoint.
  std::normal_distribution<double> normal;
  const double sd = std::numbers::sqrt2 * std::sqrt(t / (static_cast<double>(n_steps) * substeps));
  double x = 0, y = 0, w = 0;
  for (int k = 0; k < n_steps; ++k) {
    double dx = 0, dy = 0;
    for (int j = 0; j < substeps; ++j) {
      dx += sd * normal(rng);
      dy += sd * normal(rng);
    }
    const double xm = x + 0.5 * dx, ym = y + 0.5 * dy;
    w += 0.5 * (xm * dy - ym * dx);
    x += dx;
    y += dy;
  }
  return {x, y, w};
}

void write_csv(std::ostream &os, const EndpointSamples &samples) {
  os << "x,y,w\n";
  char buf[32];
  for (const Point &p : samples.points) {
    for (int k = 0; k < 3; ++k) {
      const auto r = std::to_chars(buf, buf + sizeof(buf), p[k]);
      os.write(buf, r.ptr - buf);
      os << (k == 2 ? '\n' : ',');
    }
  }
}

Bandwidth make_bandwidth(double h_xy) {
  if (!(h_xy > 0)) throw UsageError("bandwidth must be positive");
  return {h_xy, h_xy * h_xy};
}

Bandwidth default_bandwidth(double t, std::size_t n_samples) {
  if (!(t > 0) || n_samples == 0) throw UsageError("bandwidth needs t > 0 and samples");
  return make_bandwidth(2.5 * std::sqrt(t) * std::pow(static_cast<double>(n_samples), -0.125));
}

namespace {

double pairwise_sum(const double *v, std::size_t n) {
  if (n <= 16) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double epanechnikov(double u) { return std::abs(u) < 1 ? 0.75 * (1 - u * u) : 0.0; }

} // namespace

DensityEstimate density_at_start(const std::vector<Point> &samples, const Point &start,
                                 const Bandwidth &bw) {
  if (!(bw.h_xy > 0) || !(bw.h_w > 0)) throw UsageError("bandwidth must be positive");
  DensityEstimate est;
  est.bandwidth = bw;
  const std::size_t n = samples.size();
  if (n == 0) {
    est.empty_window = true;
    return est;
  }
  const double volume = bw.h_xy * bw.h_xy * bw.h_w;
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point d = samples[i] - start;
    weight[i] = epanechnikov(d.x() / bw.h_xy) * epanechnikov(d.y() / bw.h_xy) *
                epanechnikov(d.z() / bw.h_w);
    if (weight[i] > 0) ++est.in_window;
  }
  est.empty_window = est.in_window == 0;
  est.value = pairwise_sum(weight.data(), n) / (n * volume);

  constexpr std::size_t kBatches = 16;
  if (n >= kBatches) {
    double batch[kBatches];
    for (std::size_t b = 0; b < kBatches; ++b) {
      const std::size_t lo = b * n / kBatches, hi = (b + 1) * n / kBatches;
      batch[b] = pairwise_sum(weight.data() + lo, hi - lo) / ((hi - lo) * volume);
    }
    double mean = 0, ss = 0;
    for (double v : batch) mean += v / kBatches;
    for (double v : batch) ss += (v - mean) * (v - mean);
    est.std_error = std::sqrt(ss / (kBatches - 1) / kBatches);
  }
  return est;
}

ExpansionFit fit_expansion(const std::vector<std::pair<double, double>> &points) {
  std::set<double> distinct;
  for (const auto &[t, p] : points) {
    if (!(t > 0) || !std::isfinite(p)) throw UsageError("fit points need t > 0 and finite p");
    distinct.insert(t);
  }
  if (distinct.size() < 3) throw UsageError("fit_expansion needs at least 3 distinct t values");
  Eigen::MatrixXd A(points.size(), 3);
  Eigen::VectorXd y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double t = points[i].first;
    A.row(i) << 1, t, t * t;
    y[i] = 16 * t * t * points[i].second;
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
  return {c[0], c[1], c[2]};
}

} // namespace srheat
