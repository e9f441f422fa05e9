#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kerrsteer/model.hpp"

namespace kerrsteer {

enum class Stepper {
  SemiImplicit,   // midpoint drift (three fixed-point sweeps), noise evaluated at the step start
  EulerMaruyama,
};

struct EnsembleConfig {
  std::size_t n_traj = 1000;
  double dt = 1e-3;
  double t_final = 10.0;
  std::uint64_t seed = 1;
  std::size_t record_stride = 100;
  Stepper stepper = Stepper::SemiImplicit;
  unsigned threads = 0;
  // A trajectory is dropped once |alpha| > divergence_factor * (1 + |steady state|).
  double divergence_factor = 1e6;
  // Fraction of dropped trajectories above which a run is flagged unreliable.
  double unreliable_fraction = 1e-3;

  /// Throws ConfigError on hard violations (n_traj < 2, non-positive dt, ...).
  void validate() const;
  /// Soft recommendations, e.g. dt >= 1 / (10 max(gamma)).
  [[nodiscard]] std::vector<std::string> warnings(const CouplerParams& params) const;
};

/// Ensemble mean of a complex quantity with separate standard errors for its parts.
struct Estimate {
  cplx value{};
  double se_re = 0.0;
  double se_im = 0.0;
};

struct DivergenceEvent {
  std::size_t trajectory = 0;
  double time = 0.0;
};

struct MomentSeries {
  std::vector<double> times;
  std::vector<Estimate> mean_a1;
  std::vector<Estimate> mean_a2;
  std::vector<Estimate> n1;  // <a1+ a1>, estimates <a1^dagger a1>
  std::vector<Estimate> n2;
  std::size_t n_traj = 0;
  std::size_t n_diverged = 0;
  std::vector<DivergenceEvent> divergences;
  bool unreliable = false;
  // Final states of the surviving trajectories, in trajectory order.
  std::vector<PhaseSpacePoint> final_points;

  [[nodiscard]] double diverged_fraction() const {
    return n_traj == 0 ? 0.0 : static_cast<double>(n_diverged) / static_cast<double>(n_traj);
  }
};

/// Per-trajectory RNG seed, a pure function of (seed, index).
std::uint64_t trajectory_seed(std::uint64_t seed, std::size_t index);

/// Integrates every trajectory of the positive-P equations from the origin and returns
/// ensemble moments on the recorded grid (every record_stride-th step, starting at t = 0).
/// Output depends only on (params, cfg minus threads). Throws TrajectoryDivergence only
/// if fewer than two trajectories survive.
MomentSeries simulate_ensemble(const CouplerParams& params, const EnsembleConfig& cfg);

/// The noise-free trajectory under the configured stepper, on the same recorded grid.
std::vector<PhaseSpacePoint> integrate_deterministic(const CouplerParams& params, const EnsembleConfig& cfg);

struct SteadyMoments {
  Estimate mean_a1;
  Estimate mean_a2;
  Estimate n1;
  Estimate n2;
  std::size_t window_points = 0;
};

/// Averages over the last `window_fraction` of the recorded times. Each error is the
/// larger of the mean ensemble standard error and the scatter across the window.
/// Throws WindowTooShort below 10 recorded points.
SteadyMoments steady_moment_estimate(const MomentSeries& series, double window_fraction);

struct CovarianceEstimate {
  Mat4c value;  // <dx_k dx_l>, dx = x - mean, normally ordered in the positive-P sense
  Mat4d se_re;
  Mat4d se_im;
};

/// Sample fluctuation covariance of positive-P samples (no conjugation; compare with the
/// Lyapunov solution of A C + C A^T = D).
CovarianceEstimate fluctuation_covariance(std::span<const PhaseSpacePoint> samples);

}  // namespace kerrsteer
