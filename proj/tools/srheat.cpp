// Command-line front end: invariants, heat kernel values, the Duhamel
// coefficient, path simulation and small-time fits.
//
// Exit codes: 0 success, 2 usage error (bad flags, bad structure or
// expression), 3 numerical failure (tolerance not met, domain error).

#include "srheat/diffusion.hpp"
#include "srheat/error.hpp"
#include "srheat/heisenberg.hpp"
#include "srheat/perturbation.hpp"
#include "srheat/structure.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace srheat;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// Shortest round-trip decimal, so CSV output is byte-stable.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_list(const std::string &text, const char *what) {
  std::vector<double> out;
  const char *p = text.data(), *end = p + text.size();
  while (p < end) {
    while (p < end && *p == ' ') ++p;
    double v;
    const auto r = std::from_chars(p, end, v);
    if (r.ec != std::errc()) throw UsageError(std::string("cannot read ") + what + " \"" + text + "\"");
    out.push_back(v);
    p = r.ptr;
    while (p < end && *p == ' ') ++p;
    if (p < end) {
      if (*p != ',') throw UsageError(std::string("expected ',' in ") + what + " \"" + text + "\"");
      ++p;
    }
  }
  return out;
}

Point parse_point(const std::string &text) {
  const std::vector<double> v = parse_list(text, "point");
  if (v.size() != 3) throw UsageError("a point needs three coordinates x,y,w: \"" + text + "\"");
  return {v[0], v[1], v[2]};
}

// A small table printed either aligned or as CSV.
class Table {
public:
  Table(std::vector<std::string> header, bool csv) : header_(std::move(header)), csv_(csv) {}

  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void print(std::ostream &os) const {
    if (csv_) {
      write_csv_line(os, header_);
      for (const auto &r : rows_) write_csv_line(os, r);
      return;
    }
    std::vector<std::size_t> width(header_.size());
    for (std::size_t i = 0; i < header_.size(); ++i) width[i] = header_[i].size();
    for (const auto &r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    auto line = [&](const std::vector<std::string> &cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        os << cells[i];
        if (i + 1 < cells.size()) os << std::string(width[i] - cells[i].size() + 2, ' ');
      }
      os << '\n';
    };
    line(header_);
    for (const auto &r : rows_) line(r);
  }

private:
  static void write_csv_line(std::ostream &os, const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  bool csv_;
};

struct Options {
  bool csv = false;
  int threads = 0;

  std::string structure;
  std::vector<std::string> points;

  double t = 1, x = 0, y = 0, w = 0;
  double abs_tol = 1e-13, rel_tol = 1e-12;
  double lambda = 0;

  double a = 0, b = 0, c = 0;
  std::size_t samples = 100000;
  int strata = 32;
  std::uint64_t seed = 1;
  int refine = 1;

  int steps = 128;
  std::size_t paths = 100000;
  std::string out;
  std::string t_grid;
  std::string analytic;
};

int cmd_invariants(const Options &o) {
  const Structure s = load_structure(o.structure);
  std::vector<Point> pts;
  for (const auto &p : o.points) pts.push_back(parse_point(p));
  if (pts.empty()) pts.push_back(Point::Zero());
  Table table({"x", "y", "w", "chi", "kappa", "c01_1", "c01_2", "c02_1", "c02_2", "c12_1", "c12_2"},
              o.csv);
  for (const Point &q : pts) {
    const StructureConstants k = structure_constants(s.frame, q);
    table.row({num(q.x()), num(q.y()), num(q.z()), num(chi(k)), num(kappa(k)), num(k.c01_1),
               num(k.c01_2), num(k.c02_1), num(k.c02_2), num(k.c12_1), num(k.c12_2)});
  }
  table.print(std::cout);
  return 0;
}

int cmd_kernel(const Options &o) {
  if (!(o.t > 0)) throw UsageError("--t must be positive");
  QuadratureConfig cfg;
  cfg.abs_tol = o.abs_tol;
  cfg.rel_tol = o.rel_tol;
  const GroupElement q{o.x, o.y, o.w};
  const double h = heat_kernel(o.t, q, cfg);
  std::vector<std::string> header = {"t", "x", "y", "w", "h"};
  std::vector<std::string> row = {num(o.t), num(o.x), num(o.y), num(o.w), num(h)};
  if (o.lambda != 0) {
    if (!(o.lambda > 0)) throw UsageError("--homogeneity needs λ > 0");
    // h_t(q) = λ⁴ h_{λ²t}(δ_λ q)
    const double scaled =
        std::pow(o.lambda, 4) * heat_kernel(o.lambda * o.lambda * o.t, dilate(q, o.lambda), cfg);
    header.insert(header.end(), {"lambda", "lambda4_h_scaled", "relative_mismatch"});
    row.insert(row.end(), {num(o.lambda), num(scaled), num(std::abs(scaled - h) / std::abs(h))});
  }
  Table table(header, o.csv);
  table.row(row);
  table.print(std::cout);
  return 0;
}

int cmd_duhamel(const Options &o) {
  const QuadraticModel m{o.a, o.b, o.c};
  DuhamelConfig cfg;
  cfg.n_samples = o.samples;
  cfg.s_strata = o.strata;
  cfg.seed = o.seed;
  cfg.refine = o.refine;
  cfg.threads = o.threads;
  const DuhamelEstimate e = duhamel_k1(m, cfg);
  const Invariants inv = invariants(model_frame(m), Point::Zero());
  auto z = [&](double target) {
    return e.std_error > 0 ? num((e.k1 - target) / e.std_error) : std::string("nan");
  };
  Table table({"quantity", "value"}, o.csv);
  table.row({"a", num(o.a)});
  table.row({"b", num(o.b)});
  table.row({"c", num(o.c)});
  table.row({"k1", num(e.k1)});
  table.row({"std_error", num(e.std_error)});
  table.row({"raw", num(e.raw)});
  table.row({"raw_std_error", num(e.raw_std_error)});
  table.row({"samples", std::to_string(e.n_samples)});
  table.row({"strata", std::to_string(e.s_strata)});
  table.row({"steps_per_unit", std::to_string(e.steps_per_unit)});
  table.row({"chi", num(inv.chi)});
  table.row({"kappa", num(inv.kappa)});
  table.row({"two_trace", num(2 * (o.a + o.c))});
  table.row({"z_vs_kappa", z(inv.kappa)});
  table.row({"z_vs_two_trace", z(2 * (o.a + o.c))});
  table.print(std::cout);
  return 0;
}

PathConfig path_config(const Options &o, double t) {
  PathConfig cfg;
  cfg.t_final = t;
  cfg.n_steps = o.steps;
  cfg.n_paths = o.paths;
  cfg.seed = o.seed;
  return cfg;
}

int cmd_simulate(const Options &o) {
  const Structure s = load_structure(o.structure);
  if (!(o.t > 0)) throw UsageError("--t must be positive");
  const EndpointSamples samples = simulate_endpoints(s.frame, Point::Zero(), path_config(o, o.t), o.threads);
  if (o.out.empty() || o.out == "-") {
    write_csv(std::cout, samples);
  } else {
    std::ofstream f(o.out);
    if (!f) throw UsageError("cannot write \"" + o.out + "\"");
    write_csv(f, samples);
  }
  std::cerr << samples.points.size() << " paths completed, " << samples.aborted_explosion
            << " exploded, " << samples.aborted_degenerate << " left the contact region\n";
  return 0;
}

int cmd_fit(const Options &o) {
  const std::vector<double> grid = parse_list(o.t_grid, "t-grid");
  if (grid.empty()) throw UsageError("--t-grid is empty");
  for (double t : grid)
    if (!(t > 0)) throw UsageError("--t-grid values must be positive");
  if (!o.analytic.empty() && o.analytic != "su2") throw UsageError("--analytic accepts only su2");

  std::vector<std::pair<double, double>> points;
  Table table({"t", "p", "std_error", "in_window", "normalised"}, o.csv);
  if (o.analytic == "su2") {
    for (double t : grid) {
      const double p = std::exp(t) / (16 * t * t);
      points.emplace_back(t, p);
      table.row({num(t), num(p), "0", "0", num(16 * t * t * p)});
    }
  } else {
    if (o.structure.empty()) throw UsageError("fit needs a structure unless --analytic is given");
    const Structure s = load_structure(o.structure);
    for (double t : grid) {
      const EndpointSamples samples = simulate_endpoints(s.frame, Point::Zero(), path_config(o, t), o.threads);
      const DensityEstimate d =
          density_at_start(samples.points, Point::Zero(), default_bandwidth(t, samples.points.size()));
      points.emplace_back(t, d.value);
      table.row({num(t), num(d.value), num(d.std_error), std::to_string(d.in_window),
                 num(16 * t * t * d.value)});
    }
  }
  const ExpansionFit fit = fit_expansion(points);
  table.print(std::cout);
  Table coef({"a0", "a1", "a2"}, o.csv);
  coef.row({num(fit.a0), num(fit.a1), num(fit.a2)});
  if (!o.csv) std::cout << '\n';
  coef.print(std::cout);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Sub-Riemannian heat kernel small-time asymptotics on 3D contact structures"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "worker threads (default: $SRHEAT_THREADS, else all cores)")
      ->check(CLI::NonNegativeNumber);

  auto *inv = app.add_subcommand("invariants", "χ, κ and structure constants at points");
  inv->add_option("structure", o.structure, "heisenberg | model:a,b,c | rotated-heisenberg:θ | file.json")
      ->required();
  inv->add_option("--point", o.points, "x,y,w (repeatable; default the origin)");
  inv->add_flag("--csv", o.csv, "CSV output");

  auto *ker = app.add_subcommand("kernel", "Heisenberg heat kernel h_t(x, y, w)");
  ker->add_option("--t", o.t, "time")->required();
  ker->add_option("--x", o.x);
  ker->add_option("--y", o.y);
  ker->add_option("--w", o.w);
  ker->add_option("--abs-tol", o.abs_tol, "absolute quadrature tolerance");
  ker->add_option("--rel-tol", o.rel_tol, "relative quadrature tolerance");
  ker->add_option("--homogeneity", o.lambda, "also evaluate λ⁴ h_{λ²t}(δ_λ q) and the mismatch");
  ker->add_flag("--csv", o.csv, "CSV output");

  auto *duh = app.add_subcommand("duhamel", "first-order coefficient 16·(h ∗ 𝒴h)(1, 0) for a quadratic model");
  duh->add_option("--a", o.a);
  duh->add_option("--b", o.b);
  duh->add_option("--c", o.c);
  duh->add_option("--samples", o.samples, "Monte Carlo samples (≥ 10⁴)");
  duh->add_option("--strata", o.strata, "equal-width strata in s");
  duh->add_option("--seed", o.seed);
  duh->add_option("--refine", o.refine, "Heun step multiplier on the same Brownian paths (1 or 2)");
  duh->add_flag("--csv", o.csv, "CSV output");

  auto *sim = app.add_subcommand("simulate", "endpoints of the diffusion generated by Δ_f, as CSV");
  sim->add_option("structure", o.structure)->required();
  sim->add_option("--t", o.t, "final time");
  sim->add_option("--steps", o.steps, "Heun steps (≥ 64)");
  sim->add_option("--paths", o.paths, "number of paths (≥ 1000)");
  sim->add_option("--seed", o.seed);
  sim->add_option("--out", o.out, "output file (default stdout)");

  auto *fit = app.add_subcommand("fit", "fit 16t²p(t, 0, 0) ≈ a0 + a1 t + a2 t² over a t-grid");
  fit->add_option("structure", o.structure);
  fit->add_option("--t-grid", o.t_grid, "comma-separated times")->required();
  fit->add_option("--steps", o.steps, "Heun steps per path (≥ 64)");
  fit->add_option("--paths", o.paths, "paths per time (≥ 1000)");
  fit->add_option("--seed", o.seed);
  fit->add_option("--analytic", o.analytic, "su2: use p = e^t/(16t²) instead of simulating");
  fit->add_flag("--csv", o.csv, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*inv) return cmd_invariants(o);
    if (*ker) return cmd_kernel(o);
    if (*duh) return cmd_duhamel(o);
    if (*sim) return cmd_simulate(o);
    if (*fit) return cmd_fit(o);
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownIdentifierError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateFrameError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
