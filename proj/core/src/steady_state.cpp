#include "kerrsteer/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "kerrsteer/errors.hpp"

namespace kerrsteer {

namespace {

bool converged(const Vec4c& f, const Vec4c& x, double tol) {
  return mode_norm(f) <= tol * (1.0 + mode_norm(x));
}

double default_step(const CouplerParams& p) { return 1e-3 / std::max(p.gamma1, p.gamma2); }
double default_max_time(const CouplerParams& p) { return 50.0 / std::min(p.gamma1, p.gamma2); }

}  // namespace

PhaseSpacePoint newton_refine(const CouplerParams& params, const PhaseSpacePoint& guess, double tol,
                              int max_iters) {
  Vec4c x = guess.vec();
  Vec4c f = deterministic_drift(params, x);
  for (int it = 0; it < max_iters; ++it) {
    if (converged(f, x, tol)) return PhaseSpacePoint::from(x);
    const Eigen::FullPivLU<Mat4c> lu(jacobian(params, PhaseSpacePoint::from(x)));
    if (!lu.isInvertible()) {
      throw SingularJacobian(fmt::format("singular Jacobian at Newton iteration {}", it));
    }
    x -= lu.solve(f);
    if (!PhaseSpacePoint::from(x).finite()) {
      throw NonConvergence("Newton iterate became non-finite");
    }
    f = deterministic_drift(params, x);
  }
  if (converged(f, x, tol)) return PhaseSpacePoint::from(x);
  throw NonConvergence(fmt::format("Newton did not reach tol {:g} in {} iterations (residual {:.3e})", tol,
                                   max_iters, mode_norm(f)));
}

Spectrum4 stability_spectrum(const CouplerParams& params, const PhaseSpacePoint& point) {
  const Eigen::ComplexEigenSolver<Mat4c> solver(jacobian(params, point), false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solve failed");
  Spectrum4 ev;
  for (int k = 0; k < 4; ++k) ev[k] = solver.eigenvalues()(k);
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

SteadyStateResult relax_to_steady_state(const CouplerParams& params, const PhaseSpacePoint& initial,
                                        double step, double tol, double max_time, double newton_tol,
                                        double overflow_guard) {
  if (!(step > 0.0) || !(tol > 0.0) || !(max_time > 0.0)) {
    throw ConfigError("relax_to_steady_state: step, tol and max_time must be positive");
  }
  params.validate();

  Vec4c x = initial.vec();
  double t = 0.0;
  bool done = false;
  const double h = step;
  while (true) {
    const Vec4c k1 = deterministic_drift(params, x);
    if (converged(k1, x, tol)) {
      done = true;
      break;
    }
    if (t >= max_time) break;
    const Vec4c k2 = deterministic_drift(params, Vec4c(x + (0.5 * h) * k1));
    const Vec4c k3 = deterministic_drift(params, Vec4c(x + (0.5 * h) * k2));
    const Vec4c k4 = deterministic_drift(params, Vec4c(x + h * k3));
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    const double n = mode_norm(x);
    if (!std::isfinite(n) || n > overflow_guard) {
      throw DivergenceDetected(fmt::format("|alpha| = {:.3e} exceeded the overflow guard at t = {:g}", n, t));
    }
  }
  if (!done) {
    throw NonConvergence(fmt::format("RK4 relaxation did not settle by t = {:g} (residual {:.3e})", max_time,
                                     mode_norm(deterministic_drift(params, x))));
  }

  SteadyStateResult r;
  r.rk4_point = PhaseSpacePoint::from(x);
  r.relax_time = t;
  r.point = newton_refine(params, r.rk4_point, newton_tol, 50);
  r.residual_norm = mode_norm(deterministic_drift(params, r.point));
  r.eigenvalues = stability_spectrum(params, r.point);
  r.stable = std::all_of(r.eigenvalues.begin(), r.eigenvalues.end(), [](cplx e) { return e.real() < 0.0; });
  return r;
}

SteadyStateResult solve_steady_state(const CouplerParams& params, const SteadyStateOptions& opts) {
  const double step = opts.step > 0.0 ? opts.step : default_step(params);
  const double max_time = opts.max_time > 0.0 ? opts.max_time : default_max_time(params);
  return relax_to_steady_state(params, PhaseSpacePoint{}, step, opts.tol, max_time, opts.newton_tol,
                               opts.overflow_guard);
}

std::vector<SteadyStateResult> find_steady_states(const CouplerParams& params, const SteadyStateOptions& opts,
                                                  std::size_t extra_starts) {
  const double step = opts.step > 0.0 ? opts.step : default_step(params);
  const double max_time = opts.max_time > 0.0 ? opts.max_time : default_max_time(params);

  // Starting points: the empty cavity, then the linear-cavity amplitudes scaled up and
  // down and rotated, which lands on the other branch of a bistable Kerr response.
  std::vector<PhaseSpacePoint> starts{PhaseSpacePoint{}};
  const cplx lin1 = params.eps1 / cplx(params.gamma1, params.delta1);
  const cplx lin2 = params.eps2 / cplx(params.gamma2, params.delta2);
  static constexpr double kScales[] = {3.0, 0.3, 10.0, 0.1, 30.0, 0.03};
  for (std::size_t k = 0; k < extra_starts; ++k) {
    const double s = kScales[k % std::size(kScales)];
    const cplx rot = std::polar(1.0, 0.5 * static_cast<double>(k));
    starts.push_back(PhaseSpacePoint::classical(s * rot * lin1, s * rot * lin2));
  }

  std::vector<SteadyStateResult> found;
  for (const auto& start : starts) {
    SteadyStateResult r;
    try {
      r = relax_to_steady_state(params, start, step, opts.tol, max_time, opts.newton_tol, opts.overflow_guard);
    } catch (const NumericalError&) {
      continue;
    }
    if (!r.stable) continue;
    const bool seen = std::any_of(found.begin(), found.end(), [&](const SteadyStateResult& f) {
      return mode_norm(f.point.vec() - r.point.vec()) <= 1e-6 * (1.0 + f.point.norm());
    });
    if (!seen) found.push_back(r);
  }
  return found;
}

}  // namespace kerrsteer
