#include <doctest.h>

#include <numbers>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "kerrsteer/criteria.hpp"
#include "kerrsteer/errors.hpp"
#include "kerrsteer/oracles.hpp"
#include "kerrsteer/spectra.hpp"

using namespace kerrsteer;
using kerrsteer::testing::Draw;
using kerrsteer::testing::fig2_params;
using kerrsteer::testing::linear_params;

namespace {

LinearizedModel scalar_model(double gamma, double d) {
  LinearizedModel m;
  m.a.a = gamma * Mat4c::Identity();
  m.d.d = d * Mat4c::Identity();
  return m;
}

double max_rel(const Mat4d& x, const Mat4d& y) { return (x - y).cwiseAbs().maxCoeff() / (1.0 + y.cwiseAbs().maxCoeff()); }

// (X1, Y1, X2, Y2) -> (Y1, -X1, Y2, -X2): the quadratures a quarter turn later.
Mat4d quarter_turn() {
  Mat4d r = Mat4d::Zero();
  r(0, 1) = 1.0;
  r(1, 0) = -1.0;
  r(2, 3) = 1.0;
  r(3, 2) = -1.0;
  return r;
}

Mat4d mode_exchange() {
  Mat4d p = Mat4d::Zero();
  p(0, 2) = p(1, 3) = p(2, 0) = p(3, 1) = 1.0;
  return p;
}

}  // namespace

TEST_SUITE("spectra") {
  TEST_CASE("linear cavities linearize to a diagonal drift and no diffusion") {
    CouplerParams p = linear_params();
    p.coupling_j = 0.0;
    const LinearizedModel m = linearize(p);
    CHECK(m.d.d.isZero(0.0));
    CHECK(Mat4c(m.a.a.diagonal().asDiagonal()) == m.a.a);
  }

  TEST_CASE("scalar Ornstein-Uhlenbeck spectrum and covariance") {
    const LinearizedModel m = scalar_model(1.5, 0.7);
    for (double w : {0.0, 0.3, -2.0, 40.0}) {
      const Mat4c s = spectral_matrix(m, w).s;
      CHECK((s - (0.7 / (1.5 * 1.5 + w * w)) * Mat4c::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    }
    CHECK((static_covariance(m) - (0.7 / 3.0) * Mat4c::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    const LinearizedModel zero = scalar_model(1.5, 0.0);
    CHECK(spectral_matrix(zero, 2.0).s.isZero(0.0));
    CHECK(static_covariance(zero).isZero(0.0));
  }

  TEST_CASE("spectral matrix equals its defining product") {
    const LinearizedModel m = linearize(fig2_params());
    const Mat4c id = Mat4c::Identity();
    for (double w : {0.0, 0.7, 5.0, 123.0, -8.0}) {
      const Mat4c left = (m.a.a + cplx(0.0, w) * id).inverse();
      const Mat4c right = (m.a.a.transpose() - cplx(0.0, w) * id).inverse();
      const Mat4c direct = left * m.d.d * right;
      const Mat4c s = spectral_matrix(m, w).s;
      CHECK((s - direct).cwiseAbs().maxCoeff() <= 1e-9 * direct.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("Lyapunov covariance solves its equation and matches the frequency integral") {
    Draw draw(77);
    int tested = 0;
    while (tested < 3) {
      const CouplerParams p = draw.stable_params();
      const SteadyStateResult ss = solve_steady_state(p);
      if (!ss.stable) continue;
      const LinearizedModel m = linearize(p, ss.point);
      const Mat4c c = static_covariance(m);
      const Mat4c residual = m.a.a * c + c * m.a.a.transpose() - m.d.d;
      CHECK(residual.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + m.d.d.cwiseAbs().maxCoeff()));
      CHECK(relative_entry_error(integrate_spectrum(m).value, c) <= 1e-3);
      ++tested;
    }
  }

  TEST_CASE("quadrature projection symmetries") {
    const LinearizedModel m = linearize(fig2_params());
    const SpectralMatrix s = spectral_matrix(m, 2.5);
    SpectralMatrix zero = s;
    zero.s.setZero();
    CHECK(quadrature_projection(zero, 0.0).isZero(0.0));
    const Mat4d r = quarter_turn();
    for (double theta : {0.0, 0.3, 1.2, 2.9}) {
      const Mat4d q = quadrature_projection(s, theta);
      CHECK(q == q.transpose());
      CHECK(max_rel(quadrature_projection(s, theta + std::numbers::pi), q) < 1e-12);
      CHECK(max_rel(quadrature_projection(s, theta + std::numbers::pi / 2), r * q * r.transpose()) < 1e-12);
    }
  }

  TEST_CASE("non-Hermitian input is rejected") {
    Draw draw(4);
    SpectralMatrix s;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) s.s(i, j) = draw.complex(-1, 1);
    }
    CHECK_THROWS_AS(quadrature_projection(s, 0.4), NonHermitianResidual);
  }

  TEST_CASE("linear cavities emit vacuum noise") {
    const LinearizedModel m = linearize(linear_params());
    for (double w : {0.0, 0.5, 3.0, 40.0}) {
      for (double theta : {0.0, 0.7, 2.0}) {
        CHECK(output_covariance(m, w, theta).v == Mat4d::Identity());
      }
    }
  }

  TEST_CASE("output covariances of the asymmetric baseline are physical and correlated") {
    const LinearizedModel m = linearize(fig2_params());
    GridSpec g;
    g.omega_points = 100;
    g.theta_points = 45;
    const auto omegas = omega_grid(m.params, g);
    const auto thetas = theta_grid(g);
    for (double w : omegas) {
      for (double t : thetas) {
        const Mat4d v = output_covariance(m, w, t).v;
        CHECK(v == v.transpose());
        CHECK(v.diagonal().minCoeff() >= 0.0);
      }
    }
    CHECK(min_uncertainty_product(m, omegas, thetas) >= 1.0 - 1e-12);

    const double nine_degrees = 9.0 * std::numbers::pi / 180.0;
    double largest = 0.0;
    for (double w : omegas) {
      largest = std::max(largest, (output_covariance(m, w, nine_degrees).v - Mat4d::Identity()).cwiseAbs().maxCoeff());
    }
    CHECK(largest > 1e-3);
  }

  TEST_CASE("relabelling the modes permutes the output covariance") {
    const CouplerParams p = fig2_params();
    const LinearizedModel m = linearize(p);
    const LinearizedModel ms = linearize(p.swapped());
    const Mat4d e = mode_exchange();
    for (double w : {0.0, 1.0, 30.0}) {
      for (double t : {0.1, 1.4}) {
        const Mat4d v = output_covariance(m, w, t).v;
        CHECK(max_rel(output_covariance(ms, w, t).v, e * v * e.transpose()) < 1e-9);
      }
    }
  }
}
