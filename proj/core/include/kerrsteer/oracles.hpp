#pragma once

// Independent cross-checks for the analytic routes: finite differences for the Jacobian,
// frequency quadrature of S(w) for the Lyapunov covariance, and the uncertainty bound
// for output covariances. Used by the `check` subcommand and the test suites.

#include <cstddef>
#include <string>
#include <vector>

#include "kerrsteer/criteria.hpp"
#include "kerrsteer/spectra.hpp"

namespace kerrsteer {

/// Central finite differences of deterministic_drift with respect to each of the four
/// independent variables, step h_rel * (1 + |point|).
Mat4c finite_difference_jacobian(const CouplerParams& params, const PhaseSpacePoint& point, double h_rel = 1e-6);

/// max_ij |M_fd - M| / max(|M_ij|, 1).
double jacobian_fd_error(const CouplerParams& params, const PhaseSpacePoint& point, double h_rel = 1e-6);

struct SpectrumIntegral {
  Mat4c value;           // (1 / 2 pi) * integral of S(w) over the real line
  double omega_cut = 0;  // quadrature covers [-omega_cut, omega_cut]
  std::size_t intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of S(w) / (2 pi) on [-W, W] with
/// W = cut_factor * max |Re eig(A)|, plus the analytic 1/w^2 tail D / (pi W) when
/// `tail` is set.
SpectrumIntegral integrate_spectrum(const LinearizedModel& model, double cut_factor = 50.0, bool tail = true,
                                    double rel_tol = 1e-9, std::size_t max_intervals = 4000);

/// max_ij |X_ij - Y_ij| / max(|Y_ij|, floor * max|Y|).
double relative_entry_error(const Mat4c& x, const Mat4c& y, double floor = 1e-6);

/// Smallest of v[X_i] v[Y_i] (i = 1, 2) over the grid; >= 1 for any physical state.
double min_uncertainty_product(const LinearizedModel& model, const std::vector<double>& omegas,
                               const std::vector<double>& thetas);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the invariant suite on one parameter set: Jacobian vs finite differences,
/// spectral integral vs Lyapunov covariance, uncertainty bound, label-swap symmetry of
/// the steering minima, and conjugate-manifold closure of the steady state.
std::vector<CheckResult> run_checks(const CouplerParams& params, const GridSpec& grid, unsigned threads = 1);

}  // namespace kerrsteer
