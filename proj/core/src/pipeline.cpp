#include "kerrsteer/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "kerrsteer/errors.hpp"
#include "kerrsteer/parallel.hpp"
#include "kerrsteer/spectra.hpp"

namespace kerrsteer {

namespace {

std::string pair(cplx z) { return fmt::format("[{}, {}]", format_exact(z.real()), format_exact(z.imag())); }

}  // namespace

PointResult analyze_point(const CouplerParams& params, const SteadyStateResult& steady, const GridSpec& grid,
                          unsigned threads) {
  PointResult out;
  out.params = params;
  out.steady = steady;
  const LinearizedModel model = linearize(params, steady.point);
  const auto omegas = omega_grid(params, grid);
  const auto thetas = theta_grid(grid);
  out.report = minimize_report(model, omegas, thetas, MinimizeOptions{true, 1e-4, threads});

  out.spectrum.resize(omegas.size());
  parallel_for(omegas.size(), threads, [&](std::size_t i) {
    const SpectralMatrix s = spectral_matrix(model, omegas[i]);
    SpectrumRow& row = out.spectrum[i];
    row.omega = omegas[i];
    row.epr_12 = epr_products(output_covariance(model, s, out.report.epr_12.theta)).epr_12;
    row.epr_21 = epr_products(output_covariance(model, s, out.report.epr_21.theta)).epr_21;
    row.duan_simon_scaled = epr_products(output_covariance(model, s, out.report.duan_simon.theta)).duan_simon_scaled;
  });
  return out;
}

PointResult analyze_point(const CouplerParams& params, const GridSpec& grid, unsigned threads) {
  return analyze_point(params, solve_steady_state(params), grid, threads);
}

std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Unstable: return "unstable";
    case CellStatus::NonConverged: return "nonconverged";
  }
  return "unknown";
}

double observable_value(Observable o, const SteeringReport& r) {
  switch (o) {
    case Observable::MinEpr12: return r.epr_12.value;
    case Observable::MinEpr21: return r.epr_21.value;
    case Observable::MinDuanSimon: return r.duan_simon.value;
    case Observable::Classification: return static_cast<double>(static_cast<int>(r.classification));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

CouplerParams cell_params(const SweepSpec& spec, double x1, double x2) {
  CouplerParams p = spec.fixed;
  p.set(spec.axis1.name, x1);
  p.set(spec.axis2.name, x2);
  return p;
}

SweepGrid run_sweep(const SweepSpec& spec, const GridSpec& grid, unsigned threads,
                    const std::function<void(std::size_t, std::size_t)>& progress) {
  spec.validate();
  SweepGrid out;
  out.spec = spec;
  out.axis1 = spec.axis1.values();
  out.axis2 = spec.axis2.values();
  const std::size_t total = out.axis1.size() * out.axis2.size();
  out.cells.resize(total);

  const auto thetas = theta_grid(grid);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(total, threads, [&](std::size_t k) {
    SweepCell& cell = out.cells[k];
    cell.x1 = out.axis1[k / out.axis2.size()];
    cell.x2 = out.axis2[k % out.axis2.size()];
    cell.value = std::numeric_limits<double>::quiet_NaN();
    const CouplerParams p = cell_params(spec, cell.x1, cell.x2);
    try {
      const SteadyStateResult ss = solve_steady_state(p);
      const LinearizedModel model = linearize(p, ss.point);
      cell.report = minimize_report(model, omega_grid(p, grid), thetas, MinimizeOptions{true, 1e-4, 1});
      cell.value = observable_value(spec.observable, cell.report);
      cell.status = CellStatus::Ok;
    } catch (const UnstablePoint& e) {
      cell.status = CellStatus::Unstable;
      cell.diagnostic = e.what();
    } catch (const NumericalError& e) {
      cell.status = CellStatus::NonConverged;
      cell.diagnostic = e.what();
    }
    const std::size_t n = done.fetch_add(1) + 1;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(n, total);
    }
  });
  return out;
}

std::string report_text(const RunConfig& config, const PointResult& r) {
  RunConfig resolved = config;
  resolved.params = r.params;
  std::string out = format_config(resolved);
  auto line = [&out](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
  auto angle = [&](std::string_view key, double theta) {
    line(key, format_exact(theta));
    line(fmt::format("{}_deg", key), format_exact(theta * 180.0 / std::numbers::pi));
  };

  out += "\n[report]\n";
  line("classification", fmt::format("\"{}\"", to_string(r.report.classification)));
  line("min_epr_12", format_exact(r.report.epr_12.value));
  line("omega_12", format_exact(r.report.epr_12.omega));
  angle("theta_12", r.report.epr_12.theta);
  line("min_epr_21", format_exact(r.report.epr_21.value));
  line("omega_21", format_exact(r.report.epr_21.omega));
  angle("theta_21", r.report.epr_21.theta);
  line("min_duan_simon_scaled", format_exact(r.report.duan_simon.value));
  line("omega_ds", format_exact(r.report.duan_simon.omega));
  angle("theta_ds", r.report.duan_simon.theta);
  line("steady_a1", pair(r.steady.point.a1));
  line("steady_a2", pair(r.steady.point.a2));
  line("steady_residual", format_exact(r.steady.residual_norm));
  line("max_re_eigenvalue", format_exact(r.steady.eigenvalues[3].real()));
  return out;
}

double SimulationSummary::max_abs_z() const {
  double worst = 0.0;
  for (const auto& c : components) worst = std::max(worst, std::abs(c.z));
  return worst;
}

SimulationSummary summarize_simulation(const CouplerParams& params, const MomentSeries& series,
                                       double window_fraction) {
  SimulationSummary s;
  s.moments = steady_moment_estimate(series, window_fraction);
  s.steady = solve_steady_state(params);
  s.diverged_fraction = series.diverged_fraction();
  s.unreliable = series.unreliable;

  auto add = [&](std::string name, double est, double ref, double se) {
    double z = 0.0;
    if (se > 0.0) z = (est - ref) / se;
    else if (est != ref) z = std::copysign(std::numeric_limits<double>::infinity(), est - ref);
    s.components.push_back({std::move(name), est, ref, se, z});
  };
  const Estimate& m1 = s.moments.mean_a1;
  const Estimate& m2 = s.moments.mean_a2;
  add("re_a1", m1.value.real(), s.steady.point.a1.real(), m1.se_re);
  add("im_a1", m1.value.imag(), s.steady.point.a1.imag(), m1.se_im);
  add("re_a2", m2.value.real(), s.steady.point.a2.real(), m2.se_re);
  add("im_a2", m2.value.imag(), s.steady.point.a2.imag(), m2.se_im);
  return s;
}

std::string summary_text(const SimulationSummary& s) {
  std::string out;
  out += fmt::format("window_points = {}\n", s.moments.window_points);
  out += fmt::format("diverged_fraction = {}\n", format_exact(s.diverged_fraction));
  out += fmt::format("unreliable = {}\n", s.unreliable ? "true" : "false");
  out += fmt::format("max_abs_z = {}\n", format_exact(s.max_abs_z()));
  out += fmt::format("{:<8} {:>22} {:>22} {:>14} {:>10}\n", "quantity", "late-time mean", "steady state", "std. error",
                     "z");
  for (const auto& c : s.components) {
    out += fmt::format("{:<8} {:>22.12e} {:>22.12e} {:>14.6e} {:>10.4f}\n", c.name, c.estimate, c.reference,
                       c.standard_error, c.z);
  }
  return out;
}

}  // namespace kerrsteer
