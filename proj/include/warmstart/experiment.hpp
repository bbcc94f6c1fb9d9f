#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "warmstart/gmres.hpp"
#include "warmstart/guess.hpp"
#include "warmstart/history.hpp"
#include "warmstart/ilu.hpp"
#include "warmstart/sketch.hpp"
#include "warmstart/testcase.hpp"

namespace warmstart {

enum class GuessMethod { Baseline, Pod, Rand };

inline std::string to_string(GuessMethod m) {
  switch (m) {
    case GuessMethod::Baseline: return "baseline";
    case GuessMethod::Pod: return "pod";
    case GuessMethod::Rand: return "rand";
  }
  return "baseline";
}

inline GuessMethod guess_method_from_string(const std::string& s) {
  if (s == "baseline") return GuessMethod::Baseline;
  if (s == "pod") return GuessMethod::Pod;
  if (s == "rand") return GuessMethod::Rand;
  throw std::invalid_argument("unknown guess method: " + s);
}

struct ExperimentConfig {
  std::size_t nx = 100;
  std::size_t ny = 100;
  double t0 = 2.3;
  double dt = 1e-3;
  std::size_t nt = 200;
  GuessMethod method = GuessMethod::Baseline;
  std::size_t history_size = 35;   // M
  std::size_t reduced_dim = 20;    // m
  std::size_t refresh_period = 50;
  double tol = 1e-7;
  std::size_t max_iters = 300;
  std::uint64_t seed = 42;
  std::string output_path = "report.csv";
};

struct SolveRecord {
  std::size_t step = 0;
  double t = 0.0;
  std::size_t iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  double guess_time_s = 0.0;
  double solve_time_s = 0.0;
  std::string guess_method;  // zero | previous | pod | rand
};

struct RunReport {
  ExperimentConfig config;
  std::vector<SolveRecord> records;

  double mean_iterations() const {
    if (records.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : records) s += static_cast<double>(r.iterations);
    return s / static_cast<double>(records.size());
  }

  double mean_step_time_s() const {
    if (records.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : records) s += r.guess_time_s + r.solve_time_s;
    return s / static_cast<double>(records.size());
  }
};

/// Optional per-step probe, mainly for tests; receives the telemetry record
/// together with the accepted solution and the guess that seeded the solver.
using StepObserver =
    std::function<void(const SolveRecord&, const Vector& solution, const Vector& guess)>;

/// Runs one guess-strategy experiment over the test-case sequence. Step 0
/// starts from the zero vector; until the history window is full every method
/// falls back to the previous solution (warm-up); afterwards pod/rand build
/// the subspace guess. Deterministic for a fixed config and seed up to the
/// timing columns.
inline RunReport run_experiment(const ExperimentConfig& cfg, const StepObserver& observer = {}) {
  if (cfg.method != GuessMethod::Baseline && cfg.reduced_dim > cfg.history_size)
    throw std::invalid_argument("run_experiment: m must not exceed M");
  if (cfg.method != GuessMethod::Baseline && cfg.reduced_dim == 0)
    throw std::invalid_argument("run_experiment: m must be positive");

  const Grid2d grid{cfg.nx, cfg.ny};
  const SystemSequence seq(grid, TimeGrid{cfg.t0, cfg.dt, cfg.nt});
  const std::size_t n = grid.n_unknowns();
  const bool keep_history = cfg.method != GuessMethod::Baseline;

  RunReport report;
  report.config = cfg;
  report.records.reserve(cfg.nt);

  HistoryWindow history(keep_history ? cfg.history_size : 1, n);
  std::optional<SketchState> sketch;
  Vector previous(n, 0.0);

  using clock = std::chrono::steady_clock;
  const auto seconds_since = [](clock::time_point from) {
    return std::chrono::duration<double>(clock::now() - from).count();
  };

  for (std::size_t i = 0; i < cfg.nt; ++i) {
    auto [a, b] = seq.assemble_step(i);
    const Ilu0Factors prec = ilu0_factor(a);

    const auto guess_start = clock::now();
    Vector guess;
    std::string label;
    if (i == 0) {
      guess.assign(n, 0.0);
      label = "zero";
    } else if (!keep_history || !history.full()) {
      guess = previous;
      label = "previous";
    } else {
      DenseMatrix basis;
      const auto basis_start = clock::now();
      if (cfg.method == GuessMethod::Pod) {
        basis = pod_basis(history, cfg.reduced_dim);
        label = "pod";
      } else {
        basis = basis_from_sketch(*sketch);
        label = "rand";
      }
      const double basis_time = seconds_since(basis_start);
      GuessReport rep = compute_initial_guess(a, b, basis);
      rep.basis_time_s = basis_time;
      guess = std::move(rep.guess);
    }
    const double guess_time = seconds_since(guess_start);
    const double initial_residual = norm2(subtract(b, spmv(a, guess)));

    const auto solve_start = clock::now();
    GmresConfig gc;
    gc.tol = cfg.tol;
    gc.max_iters = cfg.max_iters;
    GmresResult sol = gmres(a, &prec, b, guess, gc);
    const double solve_time = seconds_since(solve_start);

    SolveRecord rec;
    rec.step = i;
    rec.t = seq.time_at(i);
    rec.iterations = sol.stats.iterations;
    rec.initial_residual = initial_residual;
    rec.final_residual = norm2(subtract(b, spmv(a, sol.x)));
    rec.guess_time_s = guess_time;
    rec.solve_time_s = solve_time;
    rec.guess_method = label;

    if (observer) observer(rec, sol.x, guess);

    if (keep_history) {
      std::optional<Vector> evicted = history.push(sol.x);
      if (cfg.method == GuessMethod::Rand && history.full()) {
        if (!sketch) {
          sketch = sketch_from_scratch(history, cfg.reduced_dim, cfg.refresh_period,
                                       std::mt19937_64(cfg.seed));
        } else {
          sketch = sketch_progressive_update(std::move(*sketch), history, *evicted, sol.x);
        }
      }
    }
    previous = std::move(sol.x);
    report.records.push_back(std::move(rec));
  }
  return report;
}

struct RunComparison {
  double baseline_mean_iterations = 0.0;
  double method_mean_iterations = 0.0;
  double baseline_mean_time_s = 0.0;
  double method_mean_time_s = 0.0;
  double iteration_speedup = 0.0;  // baseline mean / method mean
  double time_speedup = 0.0;
};

inline RunComparison compare_runs(const RunReport& baseline, const RunReport& other) {
  if (baseline.config.nt != other.config.nt || baseline.config.nx != other.config.nx ||
      baseline.config.ny != other.config.ny)
    throw std::invalid_argument("compare_runs: runs use different grids or step counts");
  RunComparison c;
  c.baseline_mean_iterations = baseline.mean_iterations();
  c.method_mean_iterations = other.mean_iterations();
  c.baseline_mean_time_s = baseline.mean_step_time_s();
  c.method_mean_time_s = other.mean_step_time_s();
  c.iteration_speedup = c.baseline_mean_iterations / c.method_mean_iterations;
  c.time_speedup = c.baseline_mean_time_s / c.method_mean_time_s;
  return c;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace detail

/// CSV layout: '#'-prefixed key=value config echo, a fixed header row, then
/// one row per step. Floating-point columns carry full double precision so a
/// round trip reproduces every aggregate exactly.
inline void write_report(const RunReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open " + path);

  const ExperimentConfig& c = r.config;
  out << "# nx=" << c.nx << "\n# ny=" << c.ny << "\n";
  out << "# t0=" << detail::format_double(c.t0) << "\n";
  out << "# dt=" << detail::format_double(c.dt) << "\n";
  out << "# nt=" << c.nt << "\n";
  out << "# method=" << to_string(c.method) << "\n";
  out << "# M=" << c.history_size << "\n# m=" << c.reduced_dim << "\n";
  out << "# refresh_period=" << c.refresh_period << "\n";
  out << "# tol=" << detail::format_double(c.tol) << "\n";
  out << "# max_iters=" << c.max_iters << "\n";
  out << "# seed=" << c.seed << "\n";
  out << "# out=" << c.output_path << "\n";
  out << "step,t,iterations,initial_residual,final_residual,guess_time_s,solve_time_s\n";
  for (const auto& rec : r.records) {
    out << rec.step << ',' << detail::format_double(rec.t) << ',' << rec.iterations << ','
        << detail::format_double(rec.initial_residual) << ','
        << detail::format_double(rec.final_residual) << ','
        << detail::format_double(rec.guess_time_s) << ','
        << detail::format_double(rec.solve_time_s) << "\n";
  }
  if (!out) throw std::runtime_error("write_report: failed writing " + path);
}

inline RunReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_report: cannot open " + path);

  RunReport r;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(2, eq - 2);
      std::string value = line.substr(eq + 1);
      ExperimentConfig& c = r.config;
      if (key == "nx") c.nx = std::stoul(value);
      else if (key == "ny") c.ny = std::stoul(value);
      else if (key == "t0") c.t0 = std::stod(value);
      else if (key == "dt") c.dt = std::stod(value);
      else if (key == "nt") c.nt = std::stoul(value);
      else if (key == "method") c.method = guess_method_from_string(value);
      else if (key == "M") c.history_size = std::stoul(value);
      else if (key == "m") c.reduced_dim = std::stoul(value);
      else if (key == "refresh_period") c.refresh_period = std::stoul(value);
      else if (key == "tol") c.tol = std::stod(value);
      else if (key == "max_iters") c.max_iters = std::stoul(value);
      else if (key == "seed") c.seed = std::stoull(value);
      else if (key == "out") c.output_path = value;
      continue;
    }
    if (!saw_header) {
      saw_header = true;  // column header row
      continue;
    }
    std::istringstream ss(line);
    std::string field;
    SolveRecord rec;
    std::getline(ss, field, ','); rec.step = std::stoul(field);
    std::getline(ss, field, ','); rec.t = std::stod(field);
    std::getline(ss, field, ','); rec.iterations = std::stoul(field);
    std::getline(ss, field, ','); rec.initial_residual = std::stod(field);
    std::getline(ss, field, ','); rec.final_residual = std::stod(field);
    std::getline(ss, field, ','); rec.guess_time_s = std::stod(field);
    if (!std::getline(ss, field, ',')) throw std::runtime_error("read_report: short row in " + path);
    rec.solve_time_s = std::stod(field);
    r.records.push_back(std::move(rec));
  }
  if (!saw_header) throw std::runtime_error("read_report: missing header in " + path);
  return r;
}

}  // namespace warmstart
