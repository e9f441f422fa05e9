#include "kerrsteer/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "kerrsteer/errors.hpp"
#include "kerrsteer/parallel.hpp"

namespace kerrsteer {

namespace {

constexpr int kCriteria = 3;  // epr_12, epr_21, duan_simon

double criterion(const SteeringValues& s, int c) {
  switch (c) {
    case 0: return s.epr_12;
    case 1: return s.epr_21;
    default: return s.duan_simon_scaled;
  }
}

double wrap_theta(double theta) {
  const double pi = std::numbers::pi;
  double t = std::fmod(theta, pi);
  if (t < 0.0) t += pi;
  return t;
}

template <class F>
double golden_section(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::NoSteering: return "no_steering";
    case Classification::Symmetric: return "symmetric";
    case Classification::Asymmetric2Steers1: return "asymmetric_2_steers_1";
    case Classification::Asymmetric1Steers2: return "asymmetric_1_steers_2";
  }
  return "unknown";
}

Classification classification_from_string(std::string_view s) {
  for (auto c : {Classification::NoSteering, Classification::Symmetric, Classification::Asymmetric2Steers1,
                 Classification::Asymmetric1Steers2}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError(fmt::format("unknown classification '{}'", s));
}

Classification mirrored(Classification c) {
  switch (c) {
    case Classification::Asymmetric2Steers1: return Classification::Asymmetric1Steers2;
    case Classification::Asymmetric1Steers2: return Classification::Asymmetric2Steers1;
    default: return c;
  }
}

Classification classify(double min_epr_12, double min_epr_21) {
  const bool steer_1 = min_epr_12 < 1.0 - kCriterionMargin;
  const bool steer_2 = min_epr_21 < 1.0 - kCriterionMargin;
  if (steer_1 && steer_2) return Classification::Symmetric;
  if (steer_1) return Classification::Asymmetric2Steers1;
  if (steer_2) return Classification::Asymmetric1Steers2;
  return Classification::NoSteering;
}

InferredVariances inferred_variance(const OutputCovariance& cov, int tx, int ty, int px, int py, double eps_div) {
  const Mat4d& v = cov.v;
  auto infer = [&](int t, int p) {
    const double partner = v(p, p);
    const double cross = v(t, p);
    if (partner < eps_div) {
      if (std::abs(cross) > eps_div) {
        throw UnphysicalCovariance(fmt::format(
            "partner variance {:.3e} vanishes while its covariance {:.3e} does not (omega = {:g}, theta = {:g})",
            partner, cross, cov.omega, cov.theta));
      }
      return v(t, t);
    }
    return v(t, t) - cross * cross / partner;
  };
  return {infer(tx, px), infer(ty, py)};
}

SteeringValues epr_products(const OutputCovariance& cov) {
  const InferredVariances m1 = inferred_variance(cov, kX1, kY1, kX2, kY2);
  const InferredVariances m2 = inferred_variance(cov, kX2, kY2, kX1, kY1);
  const Mat4d& v = cov.v;
  const double local = v(kX1, kX1) + v(kX2, kX2) + v(kY1, kY1) + v(kY2, kY2);
  const double cross = 2.0 * (v(kY1, kY2) - v(kX1, kX2));
  // V(X1 - X2) + V(Y1 + Y2) and V(X1 + X2) + V(Y1 - Y2)
  const double ds = std::min(local + cross, local - cross);
  return {cov.omega, cov.theta, m1.x * m1.y, m2.x * m2.y, ds / 4.0};
}

std::vector<SteeringValues> evaluate_grid(const LinearizedModel& model, const std::vector<double>& omegas,
                                          const std::vector<double>& thetas, unsigned threads) {
  if (omegas.empty() || thetas.empty()) throw EmptyGrid("omega and theta grids must be nonempty");
  std::vector<SteeringValues> out(omegas.size() * thetas.size());
  parallel_for(omegas.size(), threads, [&](std::size_t i) {
    const SpectralMatrix s = spectral_matrix(model, omegas[i]);
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      out[i * thetas.size() + j] = epr_products(output_covariance(model, s, thetas[j]));
    }
  });
  return out;
}

SteeringReport minimize_report(const LinearizedModel& model, const std::vector<double>& omegas,
                               const std::vector<double>& thetas, const MinimizeOptions& opts) {
  if (omegas.empty() || thetas.empty()) throw EmptyGrid("omega and theta grids must be nonempty");

  // Best (value, theta) per omega row and criterion; rows are reduced in omega order
  // afterwards so ties resolve to the smallest omega, then the smallest theta.
  struct RowBest {
    std::array<Extremum, kCriteria> best;
  };
  std::vector<RowBest> rows(omegas.size());
  parallel_for(omegas.size(), opts.threads, [&](std::size_t i) {
    const SpectralMatrix s = spectral_matrix(model, omegas[i]);
    RowBest row;
    for (auto& e : row.best) e.value = std::numeric_limits<double>::infinity();
    for (double theta : thetas) {
      const SteeringValues sv = epr_products(output_covariance(model, s, theta));
      for (int c = 0; c < kCriteria; ++c) {
        const double val = criterion(sv, c);
        if (val < row.best[c].value) row.best[c] = {val, omegas[i], theta};
      }
    }
    rows[i] = row;
  });

  std::array<Extremum, kCriteria> best;
  std::array<std::size_t, kCriteria> best_row{};
  for (auto& e : best) e.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < kCriteria; ++c) {
      if (rows[i].best[c].value < best[c].value) {
        best[c] = rows[i].best[c];
        best_row[c] = i;
      }
    }
  }

  if (opts.refine) {
    const double dtheta = thetas.size() > 1 ? thetas[1] - thetas[0] : std::numbers::pi / 2.0;
    for (int c = 0; c < kCriteria; ++c) {
      auto value_at = [&](double omega, double theta) {
        return criterion(epr_products(output_covariance(model, omega, theta)), c);
      };
      const std::size_t k = best_row[c];
      const double lo = omegas[k > 0 ? k - 1 : k];
      const double hi = omegas[k + 1 < omegas.size() ? k + 1 : k];
      double omega = best[c].omega;
      double theta = best[c].theta;
      if (hi > lo) {
        omega = golden_section([&](double w) { return value_at(w, theta); }, lo, hi, opts.refine_tol);
      }
      theta = golden_section([&](double t) { return value_at(omega, t); }, theta - dtheta, theta + dtheta,
                             opts.refine_tol);
      const double refined = value_at(omega, theta);
      if (refined < best[c].value) best[c] = {refined, omega, wrap_theta(theta)};
    }
  }

  SteeringReport report;
  report.epr_12 = best[0];
  report.epr_21 = best[1];
  report.duan_simon = best[2];
  report.classification = classify(report.epr_12.value, report.epr_21.value);
  return report;
}

std::vector<double> omega_grid(const CouplerParams& params, const GridSpec& spec) {
  if (spec.omega_points < 1) throw EmptyGrid("omega_points must be >= 1");
  const double wmax = spec.omega_max > 0.0 ? spec.omega_max : 20.0 * std::max(params.gamma1, params.gamma2);
  std::vector<double> pos(spec.omega_points);
  for (std::size_t i = 0; i < spec.omega_points; ++i) {
    pos[i] = spec.omega_points == 1 ? 0.0
                                    : wmax * static_cast<double>(i) / static_cast<double>(spec.omega_points - 1);
  }
  if (!spec.mirror_negative) return pos;
  std::vector<double> out;
  out.reserve(2 * pos.size());
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it > 0.0) out.push_back(-*it);
  }
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

std::vector<double> theta_grid(const GridSpec& spec) {
  if (spec.theta_points < 1) throw EmptyGrid("theta_points must be >= 1");
  std::vector<double> out(spec.theta_points);
  for (std::size_t j = 0; j < spec.theta_points; ++j) {
    out[j] = std::numbers::pi * static_cast<double>(j) / static_cast<double>(spec.theta_points);
  }
  return out;
}

}  // namespace kerrsteer
