#include "kerrsteer/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <fmt/format.h>

#include "kerrsteer/errors.hpp"
#include "kerrsteer/steady_state.hpp"

namespace kerrsteer {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  Mat4c kronrod;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const LinearizedModel& model, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  Mat4c k = Mat4c::Zero();
  Mat4c g = Mat4c::Zero();
  for (int i = 0; i < 8; ++i) {
    const double x = kXgk[i] * h;
    const Mat4c f = i == 7 ? spectral_matrix(model, c).s
                           : Mat4c(spectral_matrix(model, c - x).s + spectral_matrix(model, c + x).s);
    k += kWgk[i] * f;
    if (i % 2 == 1) g += kWg[i / 2] * f;
  }
  k *= h;
  g *= h;
  return {lo, hi, k, (k - g).cwiseAbs().maxCoeff()};
}

}  // namespace

Mat4c finite_difference_jacobian(const CouplerParams& params, const PhaseSpacePoint& point, double h_rel) {
  const Vec4c x0 = point.vec();
  const double h = h_rel * (1.0 + point.norm());
  Mat4c m;
  for (int k = 0; k < 4; ++k) {
    Vec4c xp = x0, xm = x0;
    xp(k) += h;
    xm(k) -= h;
    m.col(k) = (deterministic_drift(params, xp) - deterministic_drift(params, xm)) / (2.0 * h);
  }
  return m;
}

double jacobian_fd_error(const CouplerParams& params, const PhaseSpacePoint& point, double h_rel) {
  const Mat4c fd = finite_difference_jacobian(params, point, h_rel);
  const Mat4c an = jacobian(params, point);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      worst = std::max(worst, std::abs(fd(i, j) - an(i, j)) / std::max(std::abs(an(i, j)), 1.0));
    }
  }
  return worst;
}

SpectrumIntegral integrate_spectrum(const LinearizedModel& model, double cut_factor, bool tail, double rel_tol,
                                    std::size_t max_intervals) {
  const Spectrum4 ev = stability_spectrum(model.params, model.steady);
  double rate = 0.0;
  for (const cplx& e : ev) rate = std::max(rate, std::abs(e.real()));
  const double cut = cut_factor * rate;

  // Start from segments that are narrow near w = 0, where the Lorentzian features live.
  std::priority_queue<Segment> queue;
  Mat4c total = Mat4c::Zero();
  double total_error = 0.0;
  constexpr int kInitial = 16;
  std::vector<double> edges;
  for (int i = -kInitial; i <= kInitial; ++i) {
    const double u = static_cast<double>(i) / kInitial;
    edges.push_back(cut * u * std::abs(u));
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment s = gauss_kronrod(model, edges[i], edges[i + 1]);
    total += s.kronrod;
    total_error += s.error;
    queue.push(std::move(s));
  }
  while (queue.size() < max_intervals) {
    const double scale = total.cwiseAbs().maxCoeff();
    if (total_error <= rel_tol * scale) break;
    const Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    Segment left = gauss_kronrod(model, worst.lo, mid);
    Segment right = gauss_kronrod(model, mid, worst.hi);
    total += left.kronrod + right.kronrod - worst.kronrod;
    total_error += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
  }

  SpectrumIntegral out;
  out.omega_cut = cut;
  out.intervals = queue.size();
  // Beyond |w| = W, S(w) = D / w^2 + (odd terms) + O(w^-4).
  out.value = total / (2.0 * std::numbers::pi);
  if (tail) out.value += model.d.d / (std::numbers::pi * cut);
  return out;
}

double relative_entry_error(const Mat4c& x, const Mat4c& y, double floor) {
  const double scale = floor * y.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double denom = std::max(std::abs(y(i, j)), scale);
      if (denom == 0.0) {
        if (x(i, j) != cplx(0.0)) worst = std::numeric_limits<double>::infinity();
        continue;
      }
      worst = std::max(worst, std::abs(x(i, j) - y(i, j)) / denom);
    }
  }
  return worst;
}

double min_uncertainty_product(const LinearizedModel& model, const std::vector<double>& omegas,
                               const std::vector<double>& thetas) {
  double lowest = std::numeric_limits<double>::infinity();
  for (double w : omegas) {
    const SpectralMatrix s = spectral_matrix(model, w);
    for (double t : thetas) {
      const Mat4d v = output_covariance(model, s, t).v;
      lowest = std::min({lowest, v(kX1, kX1) * v(kY1, kY1), v(kX2, kX2) * v(kY2, kY2)});
    }
  }
  return lowest;
}

std::vector<CheckResult> run_checks(const CouplerParams& params, const GridSpec& grid, unsigned threads) {
  std::vector<CheckResult> out;
  const SteadyStateResult ss = solve_steady_state(params);
  out.push_back({"steady_state_stable", ss.stable,
                 fmt::format("max Re(eig) = {:.6e}, residual = {:.3e}", ss.eigenvalues[3].real(), ss.residual_norm)});
  out.push_back({"steady_state_conjugate_manifold", ss.point.conjugate_mismatch() <= 1e-9,
                 fmt::format("mismatch = {:.3e}", ss.point.conjugate_mismatch())});
  const double rk4_gap = mode_norm(ss.rk4_point.vec() - ss.point.vec()) / (1.0 + ss.point.norm());
  out.push_back({"rk4_newton_agreement", rk4_gap <= 1e-6, fmt::format("relative gap = {:.3e}", rk4_gap)});

  const double jac = jacobian_fd_error(params, ss.point);
  out.push_back({"jacobian_finite_difference", jac < 1e-6, fmt::format("max relative error = {:.3e}", jac)});
  if (!ss.stable) return out;

  const LinearizedModel model = linearize(params, ss.point);
  const Mat4c lyap = static_covariance(model);
  const SpectrumIntegral integral = integrate_spectrum(model);
  const double lyap_err = relative_entry_error(integral.value, lyap);
  out.push_back({"spectral_lyapunov_consistency", lyap_err <= 1e-3,
                 fmt::format("max relative entry error = {:.3e} ({} intervals, cut {:g})", lyap_err,
                             integral.intervals, integral.omega_cut)});

  const auto omegas = omega_grid(params, grid);
  const auto thetas = theta_grid(grid);
  const double unc = min_uncertainty_product(model, omegas, thetas);
  out.push_back({"uncertainty_bound", unc >= 1.0 - 1e-12, fmt::format("min V(X)V(Y) = {:.12f}", unc)});

  const MinimizeOptions opts{true, 1e-4, threads};
  const SteeringReport report = minimize_report(model, omegas, thetas, opts);
  const SteeringReport swapped =
      minimize_report(linearize(params.swapped(), solve_steady_state(params.swapped()).point), omegas, thetas, opts);
  const double swap_gap = std::max(std::abs(report.epr_12.value - swapped.epr_21.value),
                                   std::abs(report.epr_21.value - swapped.epr_12.value));
  out.push_back({"label_swap_symmetry",
                 swap_gap <= 1e-9 && swapped.classification == mirrored(report.classification),
                 fmt::format("max |difference| = {:.3e}, classification {} vs {}", swap_gap,
                             to_string(report.classification), to_string(swapped.classification))});

  const bool steerable = report.classification != Classification::NoSteering;
  out.push_back({"steerable_implies_inseparable", !steerable || report.duan_simon.value < 1.0 - kCriterionMargin,
                 fmt::format("classification {}, min Duan-Simon {:.6f}", to_string(report.classification),
                             report.duan_simon.value)});
  return out;
}

}  // namespace kerrsteer
