#include "kerrsteer/spectra.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "kerrsteer/errors.hpp"

namespace kerrsteer {

namespace {

template <class Lu>
void require_invertible(const Lu& lu, const char* what, double omega) {
  // PartialPivLU has no rank test; a vanishing reciprocal condition estimate stands in.
  if (!(lu.rcond() > 1e-14)) {
    throw SingularSystem(fmt::format("{} is singular at omega = {:g}", what, omega));
  }
}

}  // namespace

LinearizedModel linearize(const CouplerParams& params, const PhaseSpacePoint& steady) {
  params.validate();
  LinearizedModel m{params, steady, drift_matrix(params, steady), diffusion_matrix(params, steady)};
  const Spectrum4 ev = stability_spectrum(params, steady);
  // ev are eigenvalues of M = -A, sorted by real part; the last is the least stable.
  if (!(ev[3].real() < 0.0)) {
    throw UnstablePoint(fmt::format("fixed point is not linearly stable: max Re(eig) = {:.6e}", ev[3].real()));
  }
  return m;
}

LinearizedModel linearize(const CouplerParams& params, const SteadyStateOptions& opts) {
  const SteadyStateResult ss = solve_steady_state(params, opts);
  return linearize(params, ss.point);
}

SpectralMatrix spectral_matrix(const LinearizedModel& model, double omega) {
  const Mat4c& a = model.a.a;
  const Mat4c iw = cplx(0.0, omega) * Mat4c::Identity();
  // S = X (A^T - i w)^-1 with (A + i w) X = D; the right factor is solved transposed:
  // (A - i w) S^T = X^T.
  const Eigen::PartialPivLU<Mat4c> left(a + iw);
  require_invertible(left, "A + i omega", omega);
  const Mat4c x = left.solve(model.d.d);
  const Eigen::PartialPivLU<Mat4c> right(a - iw);
  require_invertible(right, "A^T - i omega", omega);
  const Mat4c st = right.solve(x.transpose());
  return {omega, st.transpose()};
}

Mat4c static_covariance(const LinearizedModel& model) {
  // vec(A C + C A^T) = (I (x) A + A (x) I) vec(C), column-major vec.
  const Mat4c& a = model.a.a;
  Eigen::Matrix<cplx, 16, 16> k = Eigen::Matrix<cplx, 16, 16>::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      k.block<4, 4>(4 * i, 4 * j) += (i == j ? 1.0 : 0.0) * a;
      k.block<4, 4>(4 * i, 4 * j).diagonal().array() += a(i, j);
    }
  }
  const Eigen::FullPivLU<Eigen::Matrix<cplx, 16, 16>> lu(k);
  if (!lu.isInvertible()) throw SingularSystem("Lyapunov operator is singular");
  const Mat4c d = model.d.d;
  const Eigen::Matrix<cplx, 16, 1> rhs = Eigen::Map<const Eigen::Matrix<cplx, 16, 1>>(d.data());
  const Eigen::Matrix<cplx, 16, 1> c = lu.solve(rhs);
  return Eigen::Map<const Mat4c>(c.data());
}

Mat4c quadrature_map(double theta) {
  const cplx e = std::polar(1.0, -theta);  // e^{-i theta}
  const cplx ec = std::conj(e);
  Mat4c q = Mat4c::Zero();
  for (int m = 0; m < 2; ++m) {
    const int r = 2 * m;
    q(r, r) = e;
    q(r, r + 1) = ec;
    q(r + 1, r) = -kI * e;
    q(r + 1, r + 1) = kI * ec;
  }
  return q;
}

Mat4d quadrature_projection(const SpectralMatrix& s, double theta) {
  const Mat4c q = quadrature_map(theta);
  const Mat4c t = q * s.s * q.transpose();
  const Mat4c sym = 0.5 * (t + t.transpose());
  const double residual = sym.imag().cwiseAbs().maxCoeff();
  const double scale = 1.0 + t.cwiseAbs().maxCoeff();
  if (residual > 1e-8 * scale) {
    throw NonHermitianResidual(fmt::format(
        "quadrature projection has imaginary residual {:.3e} (scale {:.3e}) at omega = {:g}, theta = {:g}", residual,
        scale, s.omega, theta));
  }
  return sym.real();
}

OutputCovariance output_covariance(const LinearizedModel& model, const SpectralMatrix& s, double theta) {
  const Mat4d sq = quadrature_projection(s, theta);
  const Eigen::Vector4d l(std::sqrt(model.params.gamma1), std::sqrt(model.params.gamma1),
                          std::sqrt(model.params.gamma2), std::sqrt(model.params.gamma2));
  Mat4d v = Mat4d::Identity() + 2.0 * (l.asDiagonal() * sq * l.asDiagonal());
  return {s.omega, theta, v};
}

OutputCovariance output_covariance(const LinearizedModel& model, double omega, double theta) {
  return output_covariance(model, spectral_matrix(model, omega), theta);
}

}  // namespace kerrsteer
