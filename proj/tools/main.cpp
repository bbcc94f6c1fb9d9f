// Experiment driver: runs guess-strategy experiments over the elliptic
// test-case sequence and compares the resulting reports.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "warmstart/warmstart.hpp"

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Flat key=value config file; '#' starts a comment line.
void apply_config_file(const std::string& path, warmstart::ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "nx") cfg.nx = std::stoul(value);
    else if (key == "ny") cfg.ny = std::stoul(value);
    else if (key == "grid") cfg.nx = cfg.ny = std::stoul(value);
    else if (key == "t0") cfg.t0 = std::stod(value);
    else if (key == "dt") cfg.dt = std::stod(value);
    else if (key == "nt") cfg.nt = std::stoul(value);
    else if (key == "method") cfg.method = warmstart::guess_method_from_string(value);
    else if (key == "M") cfg.history_size = std::stoul(value);
    else if (key == "m") cfg.reduced_dim = std::stoul(value);
    else if (key == "refresh_period" || key == "refresh") cfg.refresh_period = std::stoul(value);
    else if (key == "tol") cfg.tol = std::stod(value);
    else if (key == "max_iters") cfg.max_iters = std::stoul(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "out") cfg.output_path = value;
    else
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key +
                               "'");
  }
}

int run_command(const std::string& config_path, const warmstart::ExperimentConfig& overrides,
                const CLI::App& cmd) {
  warmstart::ExperimentConfig cfg;
  if (!config_path.empty()) apply_config_file(config_path, cfg);

  // Command-line flags win over the config file.
  if (cmd.count("--grid")) { cfg.nx = overrides.nx; cfg.ny = overrides.ny; }
  if (cmd.count("--nx")) cfg.nx = overrides.nx;
  if (cmd.count("--ny")) cfg.ny = overrides.ny;
  if (cmd.count("--t0")) cfg.t0 = overrides.t0;
  if (cmd.count("--dt")) cfg.dt = overrides.dt;
  if (cmd.count("--nt")) cfg.nt = overrides.nt;
  if (cmd.count("--method")) cfg.method = overrides.method;
  if (cmd.count("--M")) cfg.history_size = overrides.history_size;
  if (cmd.count("--m")) cfg.reduced_dim = overrides.reduced_dim;
  if (cmd.count("--refresh")) cfg.refresh_period = overrides.refresh_period;
  if (cmd.count("--tol")) cfg.tol = overrides.tol;
  if (cmd.count("--max-iters")) cfg.max_iters = overrides.max_iters;
  if (cmd.count("--seed")) cfg.seed = overrides.seed;
  if (cmd.count("--out")) cfg.output_path = overrides.output_path;

  const warmstart::RunReport report = warmstart::run_experiment(cfg);
  warmstart::write_report(report, cfg.output_path);

  std::printf("method=%s steps=%zu mean_iterations=%.4f mean_step_time_s=%.6f -> %s\n",
              warmstart::to_string(cfg.method).c_str(), report.records.size(),
              report.mean_iterations(), report.mean_step_time_s(), cfg.output_path.c_str());
  return 0;
}

int compare_command(const std::string& baseline_path, const std::string& other_path) {
  const warmstart::RunReport baseline = warmstart::read_report(baseline_path);
  const warmstart::RunReport other = warmstart::read_report(other_path);
  const warmstart::RunComparison c = warmstart::compare_runs(baseline, other);

  std::printf("%-4s %-4s %-24s %-14s %-28s %-18s\n", "M", "m", "avg time per timestep [s]",
              "time speedup", "avg iterations per timestep", "iterations speedup");
  std::printf("%-4zu %-4zu %-24.6f %-14.4f %-28.4f %-18.4f\n", other.config.history_size,
              other.config.reduced_dim, c.method_mean_time_s, c.time_speedup,
              c.method_mean_iterations, c.iteration_speedup);
  std::printf("baseline: avg time %.6f s, avg iterations %.4f\n", c.baseline_mean_time_s,
              c.baseline_mean_iterations);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated solves for slowly varying sequences of sparse linear systems"};
  app.require_subcommand(1);

  warmstart::ExperimentConfig overrides;
  std::string config_path;
  std::size_t grid = 100;

  CLI::App* run = app.add_subcommand("run", "Run one experiment and write a CSV report");
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--grid", grid, "interior points per dimension (sets nx and ny)");
  run->add_option("--nx", overrides.nx, "interior points in x");
  run->add_option("--ny", overrides.ny, "interior points in y");
  run->add_option("--t0", overrides.t0, "start time");
  run->add_option("--dt", overrides.dt, "timestep");
  run->add_option("--nt", overrides.nt, "number of timesteps");
  run->add_option("--method", overrides.method, "guess strategy")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, warmstart::GuessMethod>{
              {"baseline", warmstart::GuessMethod::Baseline},
              {"pod", warmstart::GuessMethod::Pod},
              {"rand", warmstart::GuessMethod::Rand}},
          CLI::ignore_case));
  run->add_option("--M", overrides.history_size, "history window size");
  run->add_option("--m", overrides.reduced_dim, "reduced basis dimension");
  run->add_option("--refresh", overrides.refresh_period, "sketch refresh period");
  run->add_option("--tol", overrides.tol, "GMRES relative tolerance");
  run->add_option("--max-iters", overrides.max_iters, "GMRES iteration cap");
  run->add_option("--seed", overrides.seed, "RNG seed");
  run->add_option("--out", overrides.output_path, "CSV output path");

  std::string baseline_path, other_path;
  CLI::App* compare = app.add_subcommand("compare", "Compare two report CSVs");
  compare->add_option("baseline", baseline_path, "baseline report CSV")->required();
  compare->add_option("other", other_path, "method report CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      overrides.nx = run->count("--nx") ? overrides.nx : grid;
      overrides.ny = run->count("--ny") ? overrides.ny : grid;
      return run_command(config_path, overrides, *run);
    }
    return compare_command(baseline_path, other_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
