#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kerrsteer/spectra.hpp"

namespace kerrsteer {

// Index of each quadrature in OutputCovariance::v.
inline constexpr int kX1 = 0;
inline constexpr int kY1 = 1;
inline constexpr int kX2 = 2;
inline constexpr int kY2 = 3;

/// Convention: epr_12 is the product of the inferred variances of mode 1, inferred from
/// measurements on mode 2. epr_12 < 1 therefore means "mode 2 steers mode 1".
struct SteeringValues {
  double omega = 0.0;
  double theta = 0.0;
  double epr_12 = 1.0;
  double epr_21 = 1.0;
  double duan_simon_scaled = 1.0;  // best sign choice, divided by 4
};

enum class Classification {
  NoSteering,
  Symmetric,
  Asymmetric2Steers1,  // epr_12 < 1 <= epr_21
  Asymmetric1Steers2,  // epr_21 < 1 <= epr_12
};

std::string_view to_string(Classification c);
Classification classification_from_string(std::string_view s);

/// The classification obtained after relabelling the modes.
Classification mirrored(Classification c);

/// Values below 1 - kCriterionMargin count as a violation. Away from the spectral
/// features every criterion sits at exactly 1 up to rounding, which must not be read
/// as steering.
inline constexpr double kCriterionMargin = 1e-9;

Classification classify(double min_epr_12, double min_epr_21);

struct InferredVariances {
  double x = 0.0;
  double y = 0.0;
};

/// V_inf(X_t) = V(X_t) - V(X_t, X_p)^2 / V(X_p), and likewise for Y.
/// A partner variance below `eps_div` drops the correction when the covariance is also
/// below `eps_div`, and throws UnphysicalCovariance otherwise.
InferredVariances inferred_variance(const OutputCovariance& v, int target_x, int target_y, int partner_x,
                                    int partner_y, double eps_div = 1e-12);

SteeringValues epr_products(const OutputCovariance& v);

struct Extremum {
  double value = 1.0;
  double omega = 0.0;
  double theta = 0.0;
};

struct SteeringReport {
  Extremum epr_12;
  Extremum epr_21;
  Extremum duan_simon;
  Classification classification = Classification::NoSteering;
};

struct MinimizeOptions {
  bool refine = true;
  double refine_tol = 1e-4;  // golden-section bracket width, in omega and in theta
  unsigned threads = 1;
};

/// Evaluates epr_products on the full grid product, takes per-criterion minima (ties go
/// to the smallest omega, then the smallest theta), then polishes each minimum with a
/// golden-section search in omega and then theta. Refinement never raises a minimum.
/// Throws EmptyGrid.
SteeringReport minimize_report(const LinearizedModel& model, const std::vector<double>& omega_grid,
                               const std::vector<double>& theta_grid, const MinimizeOptions& opts = {});

/// One row of the full (omega x theta) evaluation.
std::vector<SteeringValues> evaluate_grid(const LinearizedModel& model, const std::vector<double>& omega_grid,
                                          const std::vector<double>& theta_grid, unsigned threads = 1);

struct GridSpec {
  double omega_max = 0.0;  // 0: 20 max(gamma)
  std::size_t omega_points = 400;
  std::size_t theta_points = 180;
  bool mirror_negative = false;
};

/// omega in [0, omega_max] (optionally mirrored to negative values), theta in [0, pi).
std::vector<double> omega_grid(const CouplerParams& params, const GridSpec& spec);
std::vector<double> theta_grid(const GridSpec& spec);

}  // namespace kerrsteer
