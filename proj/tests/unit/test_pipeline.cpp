#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "kerrsteer/csv.hpp"
#include "kerrsteer/errors.hpp"
#include "kerrsteer/pipeline.hpp"
#include "kerrsteer/plot.hpp"

using namespace kerrsteer;
using kerrsteer::testing::fig2_params;
using kerrsteer::testing::linear_params;

namespace {

GridSpec coarse() {
  GridSpec g;
  g.omega_points = 60;
  g.theta_points = 30;
  return g;
}

SweepSpec small_sweep(const CouplerParams& base, Observable o, SweepAxis a1, SweepAxis a2) {
  SweepSpec s;
  s.fixed = base;
  s.observable = o;
  s.axis1 = std::move(a1);
  s.axis2 = std::move(a2);
  return s;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("vacuum sweep is identically one") {
    CouplerParams base = linear_params();
    const SweepGrid g = run_sweep(small_sweep(base, Observable::MinEpr12, {"eps2", AxisScale::Linear, 0.5, 3.0, 2},
                                              {"gamma2", AxisScale::Log, 0.5, 4.0, 2}),
                                  coarse(), 2);
    REQUIRE(g.cells.size() == 4);
    for (const auto& c : g.cells) {
      CHECK(c.status == CellStatus::Ok);
      CHECK(c.value == 1.0);
    }
  }

  TEST_CASE("sweep cells match independent point analyses") {
    const CouplerParams base = fig2_params();
    const SweepGrid g = run_sweep(small_sweep(base, Observable::MinEpr21, {"eps2", AxisScale::Log, 4e4, 1.6e5, 2},
                                              {"delta2", AxisScale::Linear, 0.5, 2.0, 2}),
                                  coarse(), 0);
    CHECK(g.axis1.size() == 2);
    CHECK(g.axis2.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        const SweepCell& c = g.at(i, j);
        CHECK(c.x1 == g.axis1[i]);
        CHECK(c.x2 == g.axis2[j]);
        REQUIRE(c.status == CellStatus::Ok);
        const PointResult r = analyze_point(cell_params(g.spec, c.x1, c.x2), coarse(), 3);
        CHECK(std::abs(r.report.epr_21.value - c.value) <= 1e-10);
        CHECK(r.report.classification == c.report.classification);
      }
    }
  }

  TEST_CASE("classification codes follow the enumeration") {
    SteeringReport r;
    r.classification = Classification::Asymmetric1Steers2;
    CHECK(observable_value(Observable::Classification, r) == 3.0);
    r.duan_simon.value = 0.25;
    CHECK(observable_value(Observable::MinDuanSimon, r) == 0.25);
  }

  TEST_CASE("failing cells are recorded, not fatal") {
    CouplerParams base;
    base.gamma1 = 1.0;
    base.gamma2 = 1.0;
    base.delta1 = -5.0;
    base.chi1 = 1.0;
    // Pumps beyond the upper turning point push the origin-reached state across the
    // bistable window; some cells may fail to settle within the time limit.
    const SweepGrid g = run_sweep(small_sweep(base, Observable::Classification, {"eps1", AxisScale::Linear, 0.5, 4.0, 4},
                                              {"chi2", AxisScale::Linear, 0.0, 1.0, 2}),
                                  coarse(), 1);
    CHECK(g.cells.size() == 8);
    for (const auto& c : g.cells) {
      if (c.status == CellStatus::Ok) CHECK(std::isfinite(c.value));
      else CHECK(std::isnan(c.value));
    }
    const std::string csv = sweep_csv(g);
    CHECK(parse_csv(csv).rows.size() == 8);
    CHECK(heatmap_svg(g, "test").find("<svg") == 0);
  }

  TEST_CASE("point report embeds a configuration that reproduces it") {
    RunConfig c;
    c.params = fig2_params();
    c.grids = coarse();
    const PointResult r = analyze_point(c.params, c.grids, 2);
    CHECK(r.spectrum.size() == 60);
    const std::string text = report_text(c, r);
    CHECK(text.find("[report]") != std::string::npos);
    const RunConfig again = parse_config(text);
    CHECK(again.params == c.params);
    CHECK(report_text(again, analyze_point(again.params, again.grids, 1)) == text);
  }

  TEST_CASE("simulation summary of a noise-free run") {
    const CouplerParams p = linear_params();
    EnsembleConfig cfg;
    cfg.n_traj = 8;
    cfg.t_final = 30.0;
    cfg.dt = 1e-2;
    cfg.record_stride = 10;
    const MomentSeries s = simulate_ensemble(p, cfg);
    const SimulationSummary sum = summarize_simulation(p, s, 0.3);
    REQUIRE(sum.components.size() == 4);
    for (const auto& c : sum.components) {
      CHECK(c.standard_error <= 1e-10);  // window scatter at rounding level
      CHECK(std::abs(c.estimate - c.reference) < 1e-8);
    }
    CHECK_FALSE(sum.unreliable);
    CHECK(summary_text(sum).find("max_abs_z") != std::string::npos);

    const CsvTable t = parse_csv(moments_csv(s));
    CHECK(t.header == moments_columns());
    CHECK(t.rows.size() == s.times.size());
    for (const auto& row : t.rows) {
      CHECK(row.size() == t.header.size());
      CHECK(std::stod(row[t.column("se_re_a1")]) == 0.0);
    }
  }

  TEST_CASE("CSV formatting") {
    CHECK(format_real(1.5) == "1.500000000000e+00");
    CHECK(format_real(-2.5e-7) == "-2.500000000000e-07");
    const CsvTable t = parse_csv(spectrum_csv({{0.5, 0.9, 1.0, 0.8}}));
    CHECK(t.header == spectrum_columns());
    CHECK(t.rows.at(0).at(t.column("epr_12")) == "9.000000000000e-01");
    CHECK_THROWS_AS((void)t.column("nope"), std::out_of_range);
    const CsvTable rep = parse_csv(report_csv(SteeringReport{}));
    CHECK(rep.header == report_columns());
    CHECK(rep.rows.at(0).back() == "no_steering");
  }
}
