#pragma once

// End-to-end analyses behind the command-line tool: single parameter points, two-axis
// sweeps and positive-P runs with their comparison against the steady state.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "kerrsteer/config.hpp"
#include "kerrsteer/criteria.hpp"
#include "kerrsteer/positive_p.hpp"
#include "kerrsteer/steady_state.hpp"

namespace kerrsteer {

/// Criteria along the omega grid, each evaluated at the angle of its own minimum.
struct SpectrumRow {
  double omega = 0.0;
  double epr_12 = 1.0;
  double epr_21 = 1.0;
  double duan_simon_scaled = 1.0;
};

struct PointResult {
  CouplerParams params;
  SteadyStateResult steady;
  SteeringReport report;
  std::vector<SpectrumRow> spectrum;
};

/// Linearizes around `steady` and minimizes over the grids. Throws UnstablePoint.
PointResult analyze_point(const CouplerParams& params, const SteadyStateResult& steady, const GridSpec& grid,
                          unsigned threads = 1);

/// Same, from the steady state reached from the empty cavity.
PointResult analyze_point(const CouplerParams& params, const GridSpec& grid, unsigned threads = 1);

enum class CellStatus { Ok, Unstable, NonConverged };

std::string_view to_string(CellStatus s);

struct SweepCell {
  double x1 = 0.0;
  double x2 = 0.0;
  CellStatus status = CellStatus::Ok;
  double value = 0.0;  // NaN unless status is Ok
  SteeringReport report;
  std::string diagnostic;
};

/// Classification cells store the enumerator index: 0 no steering, 1 symmetric,
/// 2 asymmetric with 2 steering 1, 3 asymmetric with 1 steering 2.
double observable_value(Observable o, const SteeringReport& r);

struct SweepGrid {
  SweepSpec spec;
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<SweepCell> cells;  // row-major: axis1 index outer, axis2 index inner

  [[nodiscard]] const SweepCell& at(std::size_t i, std::size_t j) const { return cells[i * axis2.size() + j]; }
};

/// The baseline with both axis overrides applied.
CouplerParams cell_params(const SweepSpec& spec, double x1, double x2);

/// Cells run in parallel and never abort the sweep: steady-state failures and unstable
/// points are recorded in the cell status. `progress` is called once per finished cell.
SweepGrid run_sweep(const SweepSpec& spec, const GridSpec& grid, unsigned threads = 0,
                    const std::function<void(std::size_t done, std::size_t total)>& progress = {});

/// The resolved configuration followed by a [report] section holding the steady state
/// and the steering minima with round-trip precision.
std::string report_text(const RunConfig& config, const PointResult& result);

struct ComponentZ {
  std::string name;
  double estimate = 0.0;
  double reference = 0.0;
  double standard_error = 0.0;
  double z = 0.0;  // (estimate - reference) / standard_error; 0 when both errors vanish
};

struct SimulationSummary {
  SteadyMoments moments;
  SteadyStateResult steady;
  std::vector<ComponentZ> components;  // re/im of mean_a1 and mean_a2
  double diverged_fraction = 0.0;
  bool unreliable = false;

  [[nodiscard]] double max_abs_z() const;
};

SimulationSummary summarize_simulation(const CouplerParams& params, const MomentSeries& series,
                                       double window_fraction);

std::string summary_text(const SimulationSummary& s);

}  // namespace kerrsteer
