#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"
#include "kerrsteer/criteria.hpp"
#include "kerrsteer/errors.hpp"

using namespace kerrsteer;
using kerrsteer::testing::Draw;
using kerrsteer::testing::fig2_params;
using kerrsteer::testing::linear_params;
using kerrsteer::testing::symmetric_params;

namespace {

OutputCovariance cov(const Mat4d& v) { return {0.0, 0.0, v}; }

GridSpec coarse() {
  GridSpec g;
  g.omega_points = 120;
  g.theta_points = 60;
  return g;
}

double combined_variance(const Mat4d& v, const Eigen::Vector4d& u) { return u.dot(v * u); }

}  // namespace

TEST_SUITE("criteria") {
  TEST_CASE("inferred variances") {
    const InferredVariances vac = inferred_variance(cov(Mat4d::Identity()), kX1, kY1, kX2, kY2);
    CHECK(vac.x == 1.0);
    CHECK(vac.y == 1.0);

    Mat4d v = Mat4d::Identity();
    v(kX1, kX1) = v(kX2, kX2) = 2.0;
    v(kX1, kX2) = v(kX2, kX1) = 1.0;
    CHECK(inferred_variance(cov(v), kX1, kY1, kX2, kY2).x == 1.5);

    Mat4d deterministic = Mat4d::Identity();
    deterministic(kX2, kX2) = 0.0;
    CHECK(inferred_variance(cov(deterministic), kX1, kY1, kX2, kY2).x == 1.0);
    deterministic(kX1, kX2) = deterministic(kX2, kX1) = 0.5;
    CHECK_THROWS_AS(inferred_variance(cov(deterministic), kX1, kY1, kX2, kY2), UnphysicalCovariance);
  }

  TEST_CASE("vacuum sits on every boundary") {
    const SteeringValues s = epr_products(cov(Mat4d::Identity()));
    CHECK(s.epr_12 == 1.0);
    CHECK(s.epr_21 == 1.0);
    CHECK(s.duan_simon_scaled == 1.0);
  }

  TEST_CASE("Duan-Simon expansion equals the combined-quadrature variances") {
    Draw draw(3);
    for (int i = 0; i < 50; ++i) {
      Eigen::Matrix4d g;
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) g(r, c) = draw.uniform(-1.0, 1.0);
      }
      const Mat4d v = Mat4d::Identity() + g * g.transpose();
      const double minus_plus = combined_variance(v, {1, 0, -1, 0}) + combined_variance(v, {0, 1, 0, 1});
      const double plus_minus = combined_variance(v, {1, 0, 1, 0}) + combined_variance(v, {0, 1, 0, -1});
      CHECK(epr_products(cov(v)).duan_simon_scaled == doctest::Approx(std::min(minus_plus, plus_minus) / 4.0).epsilon(1e-12));
    }
  }

  TEST_CASE("classification from the two minima") {
    CHECK(classify(1.0, 1.0) == Classification::NoSteering);
    CHECK(classify(1.0 - 1e-12, 1.0) == Classification::NoSteering);
    CHECK(classify(0.5, 0.7) == Classification::Symmetric);
    CHECK(classify(0.5, 1.0) == Classification::Asymmetric2Steers1);
    CHECK(classify(1.2, 0.9) == Classification::Asymmetric1Steers2);
    for (auto c : {Classification::NoSteering, Classification::Symmetric, Classification::Asymmetric2Steers1,
                   Classification::Asymmetric1Steers2}) {
      CHECK(classification_from_string(to_string(c)) == c);
      CHECK(mirrored(mirrored(c)) == c);
    }
    CHECK(mirrored(Classification::Asymmetric2Steers1) == Classification::Asymmetric1Steers2);
    CHECK_THROWS_AS(classification_from_string("sideways"), ConfigError);
  }

  TEST_CASE("default grids") {
    const auto w = omega_grid(fig2_params(), GridSpec{});
    REQUIRE(w.size() == 400);
    CHECK(w.front() == 0.0);
    CHECK(w.back() == 20.0 * 36.0);
    GridSpec mirrored_grid;
    mirrored_grid.omega_points = 5;
    mirrored_grid.omega_max = 2.0;
    mirrored_grid.mirror_negative = true;
    CHECK(omega_grid(fig2_params(), mirrored_grid) == std::vector<double>{-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0});
    const auto t = theta_grid(GridSpec{});
    REQUIRE(t.size() == 180);
    CHECK(t.front() == 0.0);
    CHECK(t[90] == doctest::Approx(std::numbers::pi / 2));
    GridSpec empty;
    empty.theta_points = 0;
    CHECK_THROWS_AS(theta_grid(empty), EmptyGrid);
    CHECK_THROWS_AS(minimize_report(linearize(linear_params()), {}, {0.0}), EmptyGrid);
  }

  TEST_CASE("linear cavities show no steering") {
    const LinearizedModel m = linearize(linear_params());
    const SteeringReport r = minimize_report(m, omega_grid(m.params, coarse()), theta_grid(coarse()));
    CHECK(r.epr_12.value == 1.0);
    CHECK(r.epr_21.value == 1.0);
    CHECK(r.duan_simon.value == 1.0);
    CHECK(r.classification == Classification::NoSteering);
    // Ties go to the first grid point.
    CHECK(r.epr_12.omega == 0.0);
    CHECK(r.epr_12.theta == 0.0);
  }

  TEST_CASE("identical cavities steer symmetrically at every point") {
    const LinearizedModel m = linearize(symmetric_params());
    const auto rows = evaluate_grid(m, omega_grid(m.params, coarse()), theta_grid(coarse()));
    CHECK(rows.size() == 120 * 60);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.epr_12 - r.epr_21));
    CHECK(worst <= 1e-8);
    const SteeringReport rep = minimize_report(m, omega_grid(m.params, coarse()), theta_grid(coarse()));
    CHECK(rep.classification == Classification::Symmetric);
    CHECK(rep.duan_simon.value < 1.0);
  }

  TEST_CASE("criteria are pi-periodic in the quadrature angle") {
    const LinearizedModel m = linearize(fig2_params());
    for (double w : {0.0, 2.0, 50.0}) {
      for (double t : {0.1, 0.9, 2.2}) {
        const SteeringValues a = epr_products(output_covariance(m, w, t));
        const SteeringValues b = epr_products(output_covariance(m, w, t + std::numbers::pi));
        CHECK(a.epr_12 == doctest::Approx(b.epr_12).epsilon(1e-12));
        CHECK(a.epr_21 == doctest::Approx(b.epr_21).epsilon(1e-12));
        CHECK(a.duan_simon_scaled == doctest::Approx(b.duan_simon_scaled).epsilon(1e-12));
        CHECK(a.epr_12 >= 0.0);
        CHECK(a.epr_21 >= 0.0);
      }
    }
  }

  TEST_CASE("refinement only lowers minima and thread count does not matter") {
    const LinearizedModel m = linearize(fig2_params());
    const auto w = omega_grid(m.params, coarse());
    const auto t = theta_grid(coarse());
    const SteeringReport grid_only = minimize_report(m, w, t, MinimizeOptions{false, 1e-4, 1});
    const SteeringReport refined = minimize_report(m, w, t, MinimizeOptions{true, 1e-4, 1});
    const SteeringReport threaded = minimize_report(m, w, t, MinimizeOptions{true, 1e-4, 4});
    CHECK(refined.epr_12.value <= grid_only.epr_12.value);
    CHECK(refined.epr_21.value <= grid_only.epr_21.value);
    CHECK(refined.duan_simon.value <= grid_only.duan_simon.value);
    CHECK(threaded.epr_12.value == refined.epr_12.value);
    CHECK(threaded.epr_21.value == refined.epr_21.value);
    CHECK(threaded.epr_21.theta == refined.epr_21.theta);
    CHECK(refined.epr_21.theta >= 0.0);
    CHECK(refined.epr_21.theta < std::numbers::pi);
  }

  TEST_CASE("relabelling the modes exchanges the minima") {
    const CouplerParams p = fig2_params();
    const auto w = omega_grid(p, coarse());
    const auto t = theta_grid(coarse());
    const SteeringReport r = minimize_report(linearize(p), w, t);
    const SteeringReport s = minimize_report(linearize(p.swapped()), w, t);
    CHECK(s.epr_12.value == doctest::Approx(r.epr_21.value).epsilon(1e-9));
    CHECK(s.epr_21.value == doctest::Approx(r.epr_12.value).epsilon(1e-9));
    CHECK(s.classification == mirrored(r.classification));
  }

  TEST_CASE("steerable regimes are inseparable") {
    Draw draw(91);
    for (const CouplerParams& p : {fig2_params(), symmetric_params(), draw.stable_params(), draw.stable_params()}) {
      const SteadyStateResult ss = solve_steady_state(p);
      if (!ss.stable) continue;
      const LinearizedModel m = linearize(p, ss.point);
      const SteeringReport r = minimize_report(m, omega_grid(p, coarse()), theta_grid(coarse()));
      if (r.classification != Classification::NoSteering) CHECK(r.duan_simon.value < 1.0);
    }
  }
}
