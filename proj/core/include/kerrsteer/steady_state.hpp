#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "kerrsteer/model.hpp"

namespace kerrsteer {

using Spectrum4 = std::array<cplx, 4>;

struct SteadyStateResult {
  PhaseSpacePoint point;
  double residual_norm = 0.0;  // |f(point)|
  Spectrum4 eigenvalues{};     // of the Jacobian, ascending real part then imaginary part
  bool stable = false;         // every eigenvalue has negative real part
  PhaseSpacePoint rk4_point;   // the Runge-Kutta end point before Newton polishing
  double relax_time = 0.0;
};

/// Defaults resolve the stiffest rate of the given parameters: a zero `step` or `max_time`
/// means 1e-3 / max(gamma) and 50 / min(gamma) respectively.
struct SteadyStateOptions {
  double step = 0.0;
  double tol = 1e-8;
  double max_time = 0.0;
  double newton_tol = 1e-10;
  double overflow_guard = 1e12;
};

/// Integrates the noise-free equations with classic RK4 until |f| <= tol (1 + |alpha|),
/// then polishes with `newton_refine` and classifies stability.
/// Throws NonConvergence when max_time elapses first and DivergenceDetected when |alpha|
/// exceeds `overflow_guard`.
SteadyStateResult relax_to_steady_state(const CouplerParams& params, const PhaseSpacePoint& initial,
                                        double step, double tol, double max_time,
                                        double newton_tol = 1e-10, double overflow_guard = 1e12);

/// Relaxation from the empty cavity with default (or supplied) tolerances.
SteadyStateResult solve_steady_state(const CouplerParams& params, const SteadyStateOptions& opts = {});

/// Newton iteration on f(alpha) = 0 until |f| <= tol (1 + |alpha|).
/// Throws SingularJacobian or NonConvergence.
PhaseSpacePoint newton_refine(const CouplerParams& params, const PhaseSpacePoint& guess, double tol,
                              int max_iters);

/// Eigenvalues of the Jacobian, ordered by real part then imaginary part.
Spectrum4 stability_spectrum(const CouplerParams& params, const PhaseSpacePoint& point);

/// Relaxes from a fixed set of starting points (the origin first) and returns every
/// distinct stable fixed point found, in discovery order. Used to expose Kerr bistability.
std::vector<SteadyStateResult> find_steady_states(const CouplerParams& params,
                                                  const SteadyStateOptions& opts = {},
                                                  std::size_t extra_starts = 6);

}  // namespace kerrsteer
