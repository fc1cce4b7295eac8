#pragma once

#include "srheat/geometry.hpp"
#include "srheat/heisenberg.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

namespace srheat {

struct PathConfig {
  double t_final = 1.0;
  int n_steps = 512;
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;

  void validate() const; // t_final > 0, n_steps >= 64, n_paths >= 1000
};

struct EndpointSamples {
  Point start = Point::Zero();
  double t = 0;
  std::vector<Point> points;          // endpoints of completed paths, in path order
  std::size_t aborted_explosion = 0;  // |q| exceeded 1e6
  std::size_t aborted_degenerate = 0; // left the contact region
};

/// Engine for one block of work, derived from (seed, stream, block) only.
/// simulate_endpoints draws paths [4096·b, 4096·(b+1)) from
/// block_engine(seed, 0, b), two normals per step.
std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block);

/// Worker count: `requested` if positive, else $SRHEAT_THREADS if set, else
/// the hardware concurrency.
int resolve_threads(int requested);

/// Simulates dq = √2 f1(q)∘dW1 + √2 f2(q)∘dW2 + (c²₁₂ f1 − c¹₁₂ f2)(q) dt with
/// the Stratonovich–Heun scheme; the generator is Δ_f = f1² + f2² + c²₁₂f1 − c¹₁₂f2.
/// Paths are generated in fixed blocks with their own seeded streams, so the
/// result does not depend on `threads`.
EndpointSamples simulate_endpoints(const Frame &F, const Point &start, const PathConfig &cfg,
                                   int threads = 0);

/// Endpoint at time t of the Heisenberg diffusion started at the identity,
/// with the same Heun scheme specialised to f̂1, f̂2 (no drift).
GroupElement sample_heisenberg(double t, int n_steps, std::mt19937_64 &rng);

/// As above, but the Brownian increments are drawn on a grid `substeps` times
/// finer and summed per step. Runs with n_steps·substeps fixed consume the
/// same normals, so halving substeps while doubling n_steps refines the scheme
/// along the same Brownian path.
GroupElement sample_heisenberg(double t, int n_steps, int substeps, std::mt19937_64 &rng);

/// "x,y,w" header plus one row per sample, shortest round-trip decimals.
void write_csv(std::ostream &os, const EndpointSamples &samples);

struct Bandwidth {
  double h_xy = 0;
  double h_w = 0; // always h_xy²
};

/// h_xy = 2.5 √t n^(−1/8), h_w = h_xy². The √t keeps the window a fixed
/// fraction of the diffusion's spread, so on Heisenberg the smoothing bias is
/// the same relative amount (≈ −2.5% at n = 10⁶) at every t.
Bandwidth default_bandwidth(double t, std::size_t n_samples);
Bandwidth make_bandwidth(double h_xy);

struct DensityEstimate {
  double value = 0;
  Bandwidth bandwidth;
  double std_error = 0;
  std::size_t in_window = 0;
  bool empty_window = false;
};

/// Product Epanechnikov estimate of the density at `start` with scales
/// (h, h, h²); the standard error is from 16 batch means.
DensityEstimate density_at_start(const std::vector<Point> &samples, const Point &start,
                                 const Bandwidth &bandwidth);

struct ExpansionFit {
  double a0 = 0; // normalised so that p = 1/(16t²) gives a0 = 1
  double a1 = 0;
  double a2 = 0;
};

/// Least squares of 16t²p(t) on {1, t, t²}. Needs at least 3 distinct t.
ExpansionFit fit_expansion(const std::vector<std::pair<double, double>> &points);

} // namespace srheat
