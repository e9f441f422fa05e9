#include <doctest.h>

#include "fixtures.hpp"
#include "kerrsteer/errors.hpp"
#include "kerrsteer/model.hpp"
#include "kerrsteer/oracles.hpp"

using namespace kerrsteer;
using kerrsteer::testing::Draw;

TEST_SUITE("model") {
  TEST_CASE("drift at the origin is the pump") {
    CouplerParams p;
    p.eps1 = 2.0;
    p.eps2 = 3.0;
    p.chi1 = 0.7;
    p.chi2 = -0.4;
    p.coupling_j = 1.3;
    p.delta1 = 0.2;
    const Vec4c f = deterministic_drift(p, PhaseSpacePoint{});
    CHECK(f == Vec4c(2.0, 2.0, 3.0, 3.0));
  }

  TEST_CASE("decoupled linear cavities have their analytic fixed point") {
    CouplerParams p;
    p.gamma1 = 0.5;
    p.gamma2 = 2.0;
    p.eps1 = {1.0, -0.5};
    p.eps2 = 3.0;
    const Vec4c f = deterministic_drift(p, PhaseSpacePoint::classical(p.eps1 / p.gamma1, p.eps2 / p.gamma2));
    CHECK(f.cwiseAbs().maxCoeff() <= 1e-15);
  }

  TEST_CASE("jacobian of decoupled linear cavities is diagonal") {
    CouplerParams p;
    p.gamma1 = 0.5;
    p.gamma2 = 2.0;
    p.delta1 = 0.3;
    p.delta2 = -1.1;
    Draw draw(3);
    const Mat4c m = jacobian(p, draw.point());
    Mat4c expected = Mat4c::Zero();
    expected.diagonal() << -cplx(0.5, 0.3), -cplx(0.5, -0.3), -cplx(2.0, -1.1), -cplx(2.0, 1.1);
    CHECK(m == expected);
  }

  TEST_CASE("coupling entries are state independent") {
    CouplerParams p;
    p.coupling_j = 5.0;
    const Mat4c m = jacobian(p, PhaseSpacePoint{});
    CHECK(m(0, 2) == cplx(0.0, -5.0));
    CHECK(m(1, 3) == cplx(0.0, 5.0));
    CHECK(m(2, 0) == cplx(0.0, -5.0));
    CHECK(m(3, 1) == cplx(0.0, 5.0));
  }

  TEST_CASE("jacobian agrees with central finite differences") {
    Draw draw(11);
    for (int i = 0; i < 100; ++i) {
      const CouplerParams p = draw.params();
      const PhaseSpacePoint x = draw.point();
      CHECK(jacobian_fd_error(p, x) < 1e-6);
    }
  }

  TEST_CASE("drift matrix is the negated jacobian") {
    Draw draw(5);
    const CouplerParams p = draw.params();
    const PhaseSpacePoint x = draw.point();
    CHECK((drift_matrix(p, x).a + jacobian(p, x)).cwiseAbs().maxCoeff() == 0.0);

    CouplerParams lin;
    lin.gamma1 = 0.7;
    lin.gamma2 = 1.9;
    const Mat4c a = drift_matrix(lin, x).a;
    CHECK(a.diagonal() == Vec4c(0.7, 0.7, 1.9, 1.9));
  }

  TEST_CASE("diffusion vanishes without Kerr terms and is always diagonal") {
    Draw draw(8);
    CouplerParams p = draw.params();
    const PhaseSpacePoint x = draw.point();
    const Mat4c d = diffusion_matrix(p, x).d;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) CHECK(d(i, j) == cplx(0.0));
      }
    }
    p.chi1 = p.chi2 = 0.0;
    CHECK(diffusion_matrix(p, x).d.isZero(0.0));
    CHECK(noise_amplitudes(p, x).isZero(0.0));
  }

  TEST_CASE("conjugate diffusion entries on the classical manifold") {
    CouplerParams p;
    p.chi1 = 0.3;
    p.chi2 = -1.2;
    const PhaseSpacePoint x = PhaseSpacePoint::classical({0.4, -1.3}, {2.0, 0.25});
    const Mat4c d = diffusion_matrix(p, x).d;
    CHECK(std::abs(d(1, 1) - std::conj(d(0, 0))) <= 1e-15 * std::abs(d(0, 0)));
    CHECK(std::abs(d(3, 3) - std::conj(d(2, 2))) <= 1e-15 * std::abs(d(2, 2)));
  }

  TEST_CASE("principal square root of the noise") {
    CouplerParams p;
    p.chi1 = 1.0;
    const Mat4c b = noise_amplitudes(p, PhaseSpacePoint{1.0, 0.0, 0.0, 0.0});
    CHECK(std::abs(b(0, 0) - cplx(1.0, -1.0)) < 1e-15);
  }

  TEST_CASE("noise amplitudes reproduce the diffusion matrix") {
    Draw draw(21);
    for (int i = 0; i < 100; ++i) {
      const CouplerParams p = draw.params();
      const PhaseSpacePoint x = draw.point();
      const Mat4c b = noise_amplitudes(p, x);
      CHECK((b * b.transpose() - diffusion_matrix(p, x).d).norm() < 1e-12);
    }
  }

  TEST_CASE("mode relabelling permutes drift, jacobian and diffusion exactly") {
    Draw draw(34);
    const Mat4c perm = mode_swap_permutation();
    for (int i = 0; i < 50; ++i) {
      const CouplerParams p = draw.params();
      const PhaseSpacePoint x = draw.point();
      CHECK(deterministic_drift(p.swapped(), x.swapped()) == perm * deterministic_drift(p, x));
      CHECK(jacobian(p.swapped(), x.swapped()) == perm * jacobian(p, x) * perm.transpose());
      CHECK(diffusion_matrix(p.swapped(), x.swapped()).d == perm * diffusion_matrix(p, x).d * perm.transpose());
    }
  }

  TEST_CASE("the classical manifold is closed under the drift") {
    Draw draw(55);
    for (int i = 0; i < 50; ++i) {
      const CouplerParams p = draw.params();
      const PhaseSpacePoint x = PhaseSpacePoint::classical(draw.complex(-2, 2), draw.complex(-2, 2));
      const Vec4c f = deterministic_drift(p, x);
      CHECK(f(1) == std::conj(f(0)));
      CHECK(f(3) == std::conj(f(2)));
    }
  }

  TEST_CASE("parameter validation names the field") {
    CouplerParams p;
    p.gamma2 = 0.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("gamma2"), ConfigError);
    p = CouplerParams{};
    p.chi1 = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("chi1"), ConfigError);
    p = CouplerParams{};
    p.delta1 = -3.0;
    CHECK_NOTHROW(p.validate());
  }

  TEST_CASE("setting a pump by magnitude keeps its phase") {
    CouplerParams p;
    p.eps1 = std::polar(2.0, 0.7);
    p.set("eps1", 5.0);
    CHECK(std::abs(p.eps1) == doctest::Approx(5.0));
    CHECK(std::arg(p.eps1) == doctest::Approx(0.7));
    CHECK(p.get("eps1") == doctest::Approx(5.0));
    p.set("chi2", 0.25);
    CHECK(p.chi2 == 0.25);
  }
}
