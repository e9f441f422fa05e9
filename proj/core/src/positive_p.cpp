#include "kerrsteer/positive_p.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "kerrsteer/errors.hpp"
#include "kerrsteer/parallel.hpp"
#include "kerrsteer/steady_state.hpp"

namespace kerrsteer {

namespace {

// Trajectories are grouped into fixed-size blocks. Block boundaries never depend on the
// thread count, and blocks are merged in index order, so results are bit-reproducible.
constexpr std::size_t kBlockSize = 64;
constexpr int kQuantities = 4;  // a1, a2, n1, n2

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Welford {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  void merge(const Welford& o) {
    if (o.n == 0.0) return;
    if (n == 0.0) {
      *this = o;
      return;
    }
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * (o.n / total);
    m2 += o.m2 + d * d * (n * o.n / total);
    n = total;
  }

  [[nodiscard]] double standard_error() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

// Accumulators for one recorded time: re/im of each quantity.
using RecordAcc = std::array<Welford, 2 * kQuantities>;

struct BlockResult {
  std::vector<RecordAcc> acc;
  std::vector<DivergenceEvent> divergences;
  std::vector<PhaseSpacePoint> finals;
};

struct Grid {
  std::size_t n_steps;
  std::size_t n_records;
};

Grid time_grid(const EnsembleConfig& cfg) {
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
  return {n_steps, n_steps / cfg.record_stride + 1};
}

// Drift part of one step; the noise B(x) dW is added by the caller (Ito, start of step).
Vec4c drift_increment(const CouplerParams& p, const Vec4c& x, double dt, Stepper stepper) {
  if (stepper == Stepper::EulerMaruyama) return dt * deterministic_drift(p, x);
  Vec4c mid = x;
  for (int sweep = 0; sweep < 3; ++sweep) mid = x + (0.5 * dt) * deterministic_drift(p, mid);
  return dt * deterministic_drift(p, mid);
}

std::array<cplx, kQuantities> observables(const Vec4c& x) {
  return {x(0), x(2), x(1) * x(0), x(3) * x(2)};
}

double guard_scale(const CouplerParams& params) {
  try {
    return 1.0 + solve_steady_state(params).point.norm();
  } catch (const Error&) {
    return 1.0 + std::abs(params.eps1) / params.gamma1 + std::abs(params.eps2) / params.gamma2;
  }
}

}  // namespace

void EnsembleConfig::validate() const {
  if (n_traj < 2) throw ConfigError("ensemble.n_traj must be >= 2");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("ensemble.dt must be positive");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("ensemble.t_final must be positive");
  if (record_stride < 1) throw ConfigError("ensemble.record_stride must be >= 1");
  if (!(divergence_factor > 0.0)) throw ConfigError("ensemble.divergence_factor must be positive");
  if (t_final < dt) throw ConfigError("ensemble.t_final must be at least one time step");
}

std::vector<std::string> EnsembleConfig::warnings(const CouplerParams& params) const {
  std::vector<std::string> out;
  const double limit = 1.0 / (10.0 * std::max(params.gamma1, params.gamma2));
  if (dt >= limit) {
    out.push_back(fmt::format("dt = {:g} is not below 1/(10 max(gamma)) = {:g}; results may be inaccurate", dt, limit));
  }
  return out;
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(0xD1B54A32D192ED03ull + static_cast<std::uint64_t>(index)));
}

std::vector<PhaseSpacePoint> integrate_deterministic(const CouplerParams& params, const EnsembleConfig& cfg) {
  params.validate();
  cfg.validate();
  const Grid grid = time_grid(cfg);
  std::vector<PhaseSpacePoint> out;
  out.reserve(grid.n_records);
  Vec4c x = Vec4c::Zero();
  out.push_back(PhaseSpacePoint::from(x));
  for (std::size_t s = 1; s <= grid.n_steps; ++s) {
    x += drift_increment(params, x, cfg.dt, cfg.stepper);
    if (s % cfg.record_stride == 0) out.push_back(PhaseSpacePoint::from(x));
  }
  return out;
}

MomentSeries simulate_ensemble(const CouplerParams& params, const EnsembleConfig& cfg) {
  params.validate();
  cfg.validate();
  const Grid grid = time_grid(cfg);
  const double guard = cfg.divergence_factor * guard_scale(params);
  const double sqrt_dt = std::sqrt(cfg.dt);

  const std::size_t n_blocks = (cfg.n_traj + kBlockSize - 1) / kBlockSize;
  std::vector<BlockResult> blocks(n_blocks);

  parallel_for(n_blocks, cfg.threads, [&](std::size_t b) {
    const std::size_t first = b * kBlockSize;
    const std::size_t count = std::min(kBlockSize, cfg.n_traj - first);
    // Records are buffered per trajectory so that a later divergence can drop the whole path.
    std::vector<std::array<cplx, kQuantities>> path(grid.n_records);
    BlockResult& out = blocks[b];
    out.acc.assign(grid.n_records, RecordAcc{});

    for (std::size_t t = 0; t < count; ++t) {
      const std::size_t traj = first + t;
      std::mt19937_64 rng(trajectory_seed(cfg.seed, traj));
      std::normal_distribution<double> normal(0.0, 1.0);

      Vec4c x = Vec4c::Zero();
      path[0] = observables(x);
      bool diverged = false;
      for (std::size_t s = 1; s <= grid.n_steps; ++s) {
        const Vec4c d = diffusion_diagonal(params, x);
        Vec4c noise;
        for (int k = 0; k < 4; ++k) noise(k) = std::sqrt(d(k)) * (sqrt_dt * normal(rng));
        x += drift_increment(params, x, cfg.dt, cfg.stepper) + noise;
        const double n = mode_norm(x);
        if (!std::isfinite(n) || n > guard) {
          out.divergences.push_back({traj, static_cast<double>(s) * cfg.dt});
          diverged = true;
          break;
        }
        if (s % cfg.record_stride == 0) path[s / cfg.record_stride] = observables(x);
      }
      if (diverged) continue;

      for (std::size_t r = 0; r < grid.n_records; ++r) {
        for (int q = 0; q < kQuantities; ++q) {
          out.acc[r][2 * q].add(path[r][q].real());
          out.acc[r][2 * q + 1].add(path[r][q].imag());
        }
      }
      out.finals.push_back(PhaseSpacePoint::from(x));
    }
  });

  std::vector<RecordAcc> total(grid.n_records);
  MomentSeries series;
  series.n_traj = cfg.n_traj;
  for (const auto& block : blocks) {
    for (std::size_t r = 0; r < grid.n_records; ++r) {
      for (std::size_t c = 0; c < total[r].size(); ++c) total[r][c].merge(block.acc[r][c]);
    }
    series.divergences.insert(series.divergences.end(), block.divergences.begin(), block.divergences.end());
    series.final_points.insert(series.final_points.end(), block.finals.begin(), block.finals.end());
  }
  series.n_diverged = series.divergences.size();
  series.unreliable = series.diverged_fraction() > cfg.unreliable_fraction;
  if (cfg.n_traj - series.n_diverged < 2) {
    const auto& first = series.divergences.front();
    throw TrajectoryDivergence(fmt::format("{} of {} trajectories diverged (first: trajectory {} at t = {:g})",
                                           series.n_diverged, cfg.n_traj, first.trajectory, first.time));
  }

  auto estimate = [](const RecordAcc& acc, int q) {
    return Estimate{cplx(acc[2 * q].mean, acc[2 * q + 1].mean), acc[2 * q].standard_error(),
                    acc[2 * q + 1].standard_error()};
  };
  series.times.reserve(grid.n_records);
  for (std::size_t r = 0; r < grid.n_records; ++r) {
    series.times.push_back(static_cast<double>(r * cfg.record_stride) * cfg.dt);
    series.mean_a1.push_back(estimate(total[r], 0));
    series.mean_a2.push_back(estimate(total[r], 1));
    series.n1.push_back(estimate(total[r], 2));
    series.n2.push_back(estimate(total[r], 3));
  }
  return series;
}

SteadyMoments steady_moment_estimate(const MomentSeries& series, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction < 1.0)) {
    throw ConfigError("window_fraction must lie in (0, 1)");
  }
  const std::size_t n = series.times.size();
  const auto count = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n)));
  if (count < 10) {
    throw WindowTooShort(fmt::format("only {} recorded points in the averaging window (need >= 10)", count));
  }
  const std::size_t start = n - count;

  auto average = [&](const std::vector<Estimate>& xs) {
    Welford re, im;
    double se_re = 0.0, se_im = 0.0;
    for (std::size_t k = start; k < n; ++k) {
      re.add(xs[k].value.real());
      im.add(xs[k].value.imag());
      se_re += xs[k].se_re;
      se_im += xs[k].se_im;
    }
    const double m = static_cast<double>(count);
    const double scatter_re = std::sqrt(re.m2 / (m - 1.0));
    const double scatter_im = std::sqrt(im.m2 / (m - 1.0));
    return Estimate{cplx(re.mean, im.mean), std::max(se_re / m, scatter_re), std::max(se_im / m, scatter_im)};
  };
  return {average(series.mean_a1), average(series.mean_a2), average(series.n1), average(series.n2), count};
}

CovarianceEstimate fluctuation_covariance(std::span<const PhaseSpacePoint> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw ConfigError("fluctuation_covariance needs at least two samples");
  Vec4c mean = Vec4c::Zero();
  for (const auto& s : samples) mean += s.vec();
  mean /= static_cast<double>(n);

  CovarianceEstimate est;
  est.value.setZero();
  est.se_re.setZero();
  est.se_im.setZero();
  Mat4d sq_re = Mat4d::Zero();
  Mat4d sq_im = Mat4d::Zero();
  for (const auto& s : samples) {
    const Vec4c dx = s.vec() - mean;
    const Mat4c prod = dx * dx.transpose();
    est.value += prod;
    sq_re += prod.real().cwiseAbs2();
    sq_im += prod.imag().cwiseAbs2();
  }
  const double nd = static_cast<double>(n);
  est.value /= nd;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double var_re = std::max(0.0, sq_re(i, j) / nd - std::pow(est.value(i, j).real(), 2));
      const double var_im = std::max(0.0, sq_im(i, j) / nd - std::pow(est.value(i, j).imag(), 2));
      est.se_re(i, j) = std::sqrt(var_re / (nd - 1.0));
      est.se_im(i, j) = std::sqrt(var_im / (nd - 1.0));
    }
  }
  return est;
}

}  // namespace kerrsteer
