// kerrsteer: steady states, positive-P runs, single-point steering analyses and
// parameter sweeps of the intracavity Kerr coupler.
//
// Exit codes: 0 ok, 2 configuration or usage error, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kerrsteer/config.hpp"
#include "kerrsteer/csv.hpp"
#include "kerrsteer/errors.hpp"
#include "kerrsteer/oracles.hpp"
#include "kerrsteer/pipeline.hpp"
#include "kerrsteer/plot.hpp"
#include "kerrsteer/steady_state.hpp"

namespace fs = std::filesystem;
using namespace kerrsteer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::optional<double> omega_max;
  std::optional<std::size_t> omega_points;
  std::optional<std::size_t> theta_points;
  std::optional<std::size_t> branch;
};

RunConfig load(const Options& o) {
  RunConfig c = load_config(o.config);
  if (o.omega_max) c.grids.omega_max = *o.omega_max;
  if (o.omega_points) c.grids.omega_points = *o.omega_points;
  if (o.theta_points) c.grids.theta_points = *o.theta_points;
  if (c.grids.omega_points < 1 || c.grids.theta_points < 1) throw ConfigError("grid point counts must be >= 1");
  if (c.grids.omega_max < 0.0) throw ConfigError("--omega-max must be >= 0");
  return c;
}

std::string describe(const SteadyStateResult& s) {
  return fmt::format("a1 = {:.12e} {:+.12e}i, a2 = {:.12e} {:+.12e}i, residual {:.3e}, max Re(eig) {:.6e}",
                     s.point.a1.real(), s.point.a1.imag(), s.point.a2.real(), s.point.a2.imag(), s.residual_norm,
                     s.eigenvalues[3].real());
}

// Every stable branch reachable from the standard starting points, or the relaxation
// result from the empty cavity when no stable branch exists.
SteadyStateResult select_branch(const CouplerParams& p, const std::optional<std::size_t>& branch) {
  const auto branches = find_steady_states(p);
  if (branches.empty()) return solve_steady_state(p);
  if (branch) {
    if (*branch >= branches.size()) {
      throw ConfigError(fmt::format("--branch {} requested but only {} stable branch(es) exist", *branch,
                                    branches.size()));
    }
    return branches[*branch];
  }
  if (branches.size() > 1) {
    std::string msg = fmt::format("{} stable steady states found; select one with --branch:", branches.size());
    for (std::size_t i = 0; i < branches.size(); ++i) msg += fmt::format("\n  [{}] {}", i, describe(branches[i]));
    throw ConfigError(msg);
  }
  return branches.front();
}

int cmd_steady(const Options& o) {
  const RunConfig c = load(o);
  const auto branches = find_steady_states(c.params);
  if (branches.empty()) {
    const SteadyStateResult s = solve_steady_state(c.params);
    fmt::print("no stable steady state; empty-cavity relaxation ends at\n  {}\n", describe(s));
    return kExitNumerical;
  }
  std::string csv = "branch,re_a1,im_a1,re_a2,im_a2,residual_norm,max_re_eigenvalue\n";
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& s = branches[i];
    fmt::print("[{}] {}\n", i, describe(s));
    csv += fmt::format("{},{},{},{},{},{},{}\n", i, format_real(s.point.a1.real()), format_real(s.point.a1.imag()),
                       format_real(s.point.a2.real()), format_real(s.point.a2.imag()), format_real(s.residual_norm),
                       format_real(s.eigenvalues[3].real()));
  }
  if (branches.size() > 1) fmt::print("multiple stable branches; `point` needs --branch\n");
  write_file(fs::path(o.out) / "steady.csv", csv);
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  const RunConfig c = load(o);
  if (!c.ensemble) throw ConfigError("simulate needs an [ensemble] section");
  EnsembleConfig e = *c.ensemble;
  if (o.seed) e.seed = *o.seed;
  e.threads = o.threads;
  for (const auto& w : e.warnings(c.params)) fmt::print(stderr, "warning: {}\n", w);

  const MomentSeries series = simulate_ensemble(c.params, e);
  const fs::path out(o.out);
  write_file(out / "moments.csv", moments_csv(series));
  const SimulationSummary summary = summarize_simulation(c.params, series, c.window_fraction);
  write_file(out / "summary.csv", summary_csv(summary));
  const std::string text = summary_text(summary);
  write_file(out / "summary.txt", text);
  fmt::print("{} trajectories, {} diverged\n{}", series.n_traj, series.n_diverged, text);
  for (const auto& d : series.divergences) fmt::print(stderr, "trajectory {} diverged at t = {}\n", d.trajectory, d.time);
  if (summary.unreliable) {
    fmt::print(stderr, "error: diverged fraction {} exceeds {}; result flagged unreliable\n",
               summary.diverged_fraction, e.unreliable_fraction);
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_point(const Options& o) {
  const RunConfig c = load(o);
  const SteadyStateResult steady = select_branch(c.params, o.branch);
  const PointResult r = analyze_point(c.params, steady, c.grids, o.threads);
  const fs::path out(o.out);
  write_file(out / "spectrum.csv", spectrum_csv(r.spectrum));
  write_file(out / "report.csv", report_csv(r.report));
  const std::string report = report_text(c, r);
  write_file(out / "report.toml", report);
  write_file(out / "spectrum.svg", spectrum_svg(r.spectrum));
  fmt::print("{}", report.substr(report.find("[report]")));
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const RunConfig c = load(o);
  if (!c.sweep) throw ConfigError("sweep needs a [sweep] section");
  const SweepGrid g = run_sweep(*c.sweep, c.grids, o.threads, [](std::size_t done, std::size_t total) {
    if (done % 50 == 0 || done == total) fmt::print(stderr, "\r{}/{} cells", done, total);
    if (done == total) fmt::print(stderr, "\n");
  });
  const fs::path out(o.out);
  write_file(out / "sweep.csv", sweep_csv(g));
  write_file(out / "sweep.svg",
             heatmap_svg(g, fmt::format("{} over ({}, {})", to_string(c.sweep->observable), c.sweep->axis1.name,
                                        c.sweep->axis2.name)));
  std::size_t counts[4] = {}, failed = 0;
  for (const auto& cell : g.cells) {
    if (cell.status == CellStatus::Ok) ++counts[static_cast<int>(cell.report.classification)];
    else ++failed;
  }
  fmt::print("cells: {} no_steering, {} symmetric, {} asymmetric_2_steers_1, {} asymmetric_1_steers_2, {} masked\n",
             counts[0], counts[1], counts[2], counts[3], failed);
  return kExitOk;
}

int cmd_check(const Options& o) {
  const RunConfig c = load(o);
  const auto results = run_checks(c.params, c.grids, o.threads);
  bool all = true;
  for (const auto& r : results) {
    fmt::print("{:<34} {}  {}\n", r.name, r.passed ? "PASS" : "FAIL", r.detail);
    all = all && r.passed;
  }
  return all ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steering analysis of the intracavity Kerr nonlinear coupler"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "Configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--threads", o.threads, "Worker threads (0 = one per core)")->capture_default_str();
  };
  auto add_grid = [&o](CLI::App* sub) {
    sub->add_option("--omega-max", o.omega_max, "Largest analysis frequency (0 = 20 max gamma)");
    sub->add_option("--omega-points", o.omega_points, "Frequency grid points");
    sub->add_option("--theta-points", o.theta_points, "Quadrature angle grid points on [0, pi)");
  };

  auto* steady = app.add_subcommand("steady", "Steady states and their stability");
  add_common(steady);
  auto* simulate = app.add_subcommand("simulate", "Positive-P ensemble simulation");
  add_common(simulate);
  simulate->add_option("--seed", o.seed, "Override the ensemble seed");
  auto* point = app.add_subcommand("point", "Steering report and spectra at one parameter point");
  add_common(point);
  add_grid(point);
  point->add_option("--branch", o.branch, "Steady-state branch index when several are stable");
  auto* sweep = app.add_subcommand("sweep", "Two-parameter sweep of a steering observable");
  add_common(sweep);
  add_grid(sweep);
  auto* check = app.add_subcommand("check", "Run the invariant and oracle suite on one parameter point");
  add_common(check);
  add_grid(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*steady) return cmd_steady(o);
    if (*simulate) return cmd_simulate(o);
    if (*point) return cmd_point(o);
    if (*sweep) return cmd_sweep(o);
    if (*check) return cmd_check(o);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
