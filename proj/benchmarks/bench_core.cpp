#include <benchmark/benchmark.h>

#include "kerrsteer/criteria.hpp"
#include "kerrsteer/positive_p.hpp"
#include "kerrsteer/spectra.hpp"
#include "kerrsteer/steady_state.hpp"

namespace {

using namespace kerrsteer;

CouplerParams baseline() {
  CouplerParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 36.0;
  p.coupling_j = 5.0;
  p.delta1 = 0.001 * p.coupling_j;
  p.delta2 = 200.0 * p.delta1;
  p.eps1 = 1e3;
  p.eps2 = 80.0 * p.eps1;
  p.chi1 = 1e-8;
  p.chi2 = 10.0 * p.chi1;
  return p;
}

const LinearizedModel& model() {
  static const LinearizedModel m = linearize(baseline());
  return m;
}

void BM_SteadyState(benchmark::State& state) {
  const CouplerParams p = baseline();
  for (auto _ : state) benchmark::DoNotOptimize(solve_steady_state(p));
}
BENCHMARK(BM_SteadyState)->Unit(benchmark::kMillisecond);

void BM_SpectralMatrix(benchmark::State& state) {
  const LinearizedModel& m = model();
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_matrix(m, w));
    w += 1e-3;
  }
}
BENCHMARK(BM_SpectralMatrix);

void BM_OutputCovarianceAndCriteria(benchmark::State& state) {
  const LinearizedModel& m = model();
  const SpectralMatrix s = spectral_matrix(m, 3.0);
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(epr_products(output_covariance(m, s, theta)));
    theta += 1e-3;
  }
}
BENCHMARK(BM_OutputCovarianceAndCriteria);

void BM_MinimizeReport(benchmark::State& state) {
  const LinearizedModel& m = model();
  GridSpec g;
  g.omega_points = static_cast<std::size_t>(state.range(0));
  g.theta_points = static_cast<std::size_t>(state.range(1));
  const auto omegas = omega_grid(m.params, g);
  const auto thetas = theta_grid(g);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_report(m, omegas, thetas));
}
BENCHMARK(BM_MinimizeReport)->Args({100, 90})->Args({400, 180})->Unit(benchmark::kMillisecond);

void BM_Ensemble(benchmark::State& state) {
  const CouplerParams p = baseline();
  EnsembleConfig cfg;
  cfg.n_traj = static_cast<std::size_t>(state.range(0));
  cfg.t_final = 1.0;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ensemble(p, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ensemble)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
