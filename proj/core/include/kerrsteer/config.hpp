#pragma once

// Run configuration files.
//
// A small TOML-like format: `[section]` headers, `key = value` lines, `#` comments.
// Values are numbers, quoted strings, booleans, `[re, im]` pairs for complex pumps, or
// (in [params] and for sweep bounds) a product of a number and another parameter,
// e.g. `delta1 = 0.001 * coupling_j`. Derived values are resolved at load time and
// written back fully resolved by `format_config`.
//
//   [params]    gamma1 gamma2 delta1 delta2 eps1 eps2 chi1 chi2 coupling_j
//   [grids]     omega_max omega_points theta_points mirror_negative
//   [ensemble]  n_traj dt t_final seed record_stride stepper window_fraction
//               divergence_factor
//   [sweep]     observable, axisN, axisN_scale, axisN_lo, axisN_hi, axisN_points (N = 1, 2)
//   [report]    ignored on input; emitted by `point`

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kerrsteer/criteria.hpp"
#include "kerrsteer/model.hpp"
#include "kerrsteer/positive_p.hpp"

namespace kerrsteer {

enum class AxisScale { Linear, Log };

struct SweepAxis {
  std::string name;
  AxisScale scale = AxisScale::Linear;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n_points = 2;

  [[nodiscard]] std::vector<double> values() const;
};

enum class Observable { MinEpr12, MinEpr21, Classification, MinDuanSimon };

std::string_view to_string(Observable o);
Observable observable_from_string(std::string_view s);

struct SweepSpec {
  SweepAxis axis1;
  SweepAxis axis2;
  Observable observable = Observable::Classification;
  CouplerParams fixed;

  /// Throws ConfigError: n_points >= 2, lo < hi, log scale needs lo > 0, names must be
  /// CouplerParams fields and distinct.
  void validate() const;
};

struct RunConfig {
  CouplerParams params;
  GridSpec grids;
  std::optional<EnsembleConfig> ensemble;
  double window_fraction = 0.5;
  std::optional<SweepSpec> sweep;
};

/// Throws ConfigError with "origin:line: message" diagnostics.
RunConfig parse_config(std::string_view text, std::string_view origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration text; parse_config(format_config(c)) reproduces c exactly.
std::string format_config(const RunConfig& config);

/// Shortest round-trip decimal representation.
std::string format_exact(double x);

}  // namespace kerrsteer
