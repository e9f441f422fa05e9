#include "kerrsteer/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kerrsteer/errors.hpp"

namespace kerrsteer {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(double v, std::string_view name) {
  if (!std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be a finite real number");
  }
}

struct ModeDrift {
  cplx f;
  cplx fp;
};

// Operation order in `fp` mirrors `f` term by term, so that on the classical manifold
// fp == conj(f) exactly and the deterministic flow cannot drift off the manifold.
inline ModeDrift mode_drift(cplx eps, double gamma, double delta, double chi, double j, cplx a,
                            cplx ap, cplx b, cplx bp) {
  const cplx kerr(0.0, 2.0 * chi);
  const cplx hop(0.0, j);
  return {eps - cplx(gamma, delta) * a - kerr * ((ap * a) * a) - hop * b,
          std::conj(eps) - cplx(gamma, -delta) * ap + kerr * ((a * ap) * ap) + hop * bp};
}

}  // namespace

void CouplerParams::validate() const {
  require_finite(gamma1, "gamma1");
  require_finite(gamma2, "gamma2");
  if (!(gamma1 > 0.0)) throw ConfigError("gamma1 must be > 0 (cavity loss rate), got " + std::to_string(gamma1));
  if (!(gamma2 > 0.0)) throw ConfigError("gamma2 must be > 0 (cavity loss rate), got " + std::to_string(gamma2));
  require_finite(delta1, "delta1");
  require_finite(delta2, "delta2");
  if (!finite(eps1)) throw ConfigError("eps1 must be a finite complex number");
  if (!finite(eps2)) throw ConfigError("eps2 must be a finite complex number");
  require_finite(chi1, "chi1");
  require_finite(chi2, "chi2");
  require_finite(coupling_j, "coupling_j");
}

CouplerParams CouplerParams::swapped() const {
  CouplerParams s = *this;
  std::swap(s.gamma1, s.gamma2);
  std::swap(s.delta1, s.delta2);
  std::swap(s.eps1, s.eps2);
  std::swap(s.chi1, s.chi2);
  return s;
}

bool CouplerParams::is_field(std::string_view name) {
  return std::find(kFieldNames.begin(), kFieldNames.end(), name) != kFieldNames.end();
}

void CouplerParams::set(std::string_view name, double value) {
  auto set_pump = [value](cplx& eps) {
    const double phase = std::abs(eps) > 0.0 ? std::arg(eps) : 0.0;
    eps = phase == 0.0 ? cplx(value, 0.0) : std::polar(value, phase);
  };
  if (name == "gamma1") gamma1 = value;
  else if (name == "gamma2") gamma2 = value;
  else if (name == "delta1") delta1 = value;
  else if (name == "delta2") delta2 = value;
  else if (name == "eps1") set_pump(eps1);
  else if (name == "eps2") set_pump(eps2);
  else if (name == "chi1") chi1 = value;
  else if (name == "chi2") chi2 = value;
  else if (name == "coupling_j") coupling_j = value;
  else throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

double CouplerParams::get(std::string_view name) const {
  if (name == "gamma1") return gamma1;
  if (name == "gamma2") return gamma2;
  if (name == "delta1") return delta1;
  if (name == "delta2") return delta2;
  if (name == "eps1") return std::abs(eps1);
  if (name == "eps2") return std::abs(eps2);
  if (name == "chi1") return chi1;
  if (name == "chi2") return chi2;
  if (name == "coupling_j") return coupling_j;
  throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

bool PhaseSpacePoint::finite() const {
  return kerrsteer::finite(a1) && kerrsteer::finite(a1p) && kerrsteer::finite(a2) && kerrsteer::finite(a2p);
}

double PhaseSpacePoint::norm() const { return mode_norm(vec()); }

double PhaseSpacePoint::conjugate_mismatch() const {
  const double m = std::max(std::abs(a1p - std::conj(a1)), std::abs(a2p - std::conj(a2)));
  return m / (1.0 + norm());
}

double mode_norm(const Vec4c& v) {
  const double m1 = std::norm(v(0)) + std::norm(v(1));
  const double m2 = std::norm(v(2)) + std::norm(v(3));
  return std::sqrt(m1 + m2);
}

Vec4c deterministic_drift(const CouplerParams& p, const Vec4c& s) {
  const ModeDrift m1 = mode_drift(p.eps1, p.gamma1, p.delta1, p.chi1, p.coupling_j, s(0), s(1), s(2), s(3));
  const ModeDrift m2 = mode_drift(p.eps2, p.gamma2, p.delta2, p.chi2, p.coupling_j, s(2), s(3), s(0), s(1));
  return Vec4c(m1.f, m1.fp, m2.f, m2.fp);
}

Mat4c jacobian(const CouplerParams& p, const PhaseSpacePoint& x) {
  Mat4c m = Mat4c::Zero();
  const cplx hop(0.0, p.coupling_j);

  auto fill_mode = [&](int k, double gamma, double delta, double chi, cplx a, cplx ap) {
    const cplx kerr(0.0, 2.0 * chi);
    const cplx cross(0.0, 4.0 * chi);
    const int o = k == 0 ? 2 : -2;  // offset to the partner mode
    m(k, k) = -cplx(gamma, delta) - cross * (ap * a);
    m(k, k + 1) = -kerr * (a * a);
    m(k, k + o) = -hop;
    m(k + 1, k) = kerr * (ap * ap);
    m(k + 1, k + 1) = -cplx(gamma, -delta) + cross * (a * ap);
    m(k + 1, k + 1 + o) = hop;
  };
  fill_mode(0, p.gamma1, p.delta1, p.chi1, x.a1, x.a1p);
  fill_mode(2, p.gamma2, p.delta2, p.chi2, x.a2, x.a2p);
  return m;
}

DriftMatrix drift_matrix(const CouplerParams& params, const PhaseSpacePoint& point) {
  return {-jacobian(params, point)};
}

Vec4c diffusion_diagonal(const CouplerParams& p, const Vec4c& s) {
  const cplx k1(0.0, 2.0 * p.chi1);
  const cplx k2(0.0, 2.0 * p.chi2);
  return Vec4c(-k1 * (s(0) * s(0)), k1 * (s(1) * s(1)), -k2 * (s(2) * s(2)), k2 * (s(3) * s(3)));
}

DiffusionMatrix diffusion_matrix(const CouplerParams& params, const PhaseSpacePoint& point) {
  return {diffusion_diagonal(params, point.vec()).asDiagonal()};
}

Mat4c noise_amplitudes(const CouplerParams& params, const PhaseSpacePoint& point) {
  const Vec4c d = diffusion_diagonal(params, point.vec());
  Mat4c b = Mat4c::Zero();
  for (int k = 0; k < 4; ++k) b(k, k) = std::sqrt(d(k));
  return b;
}

Mat4c mode_swap_permutation() {
  Mat4c p = Mat4c::Zero();
  p(0, 2) = p(1, 3) = p(2, 0) = p(3, 1) = 1.0;
  return p;
}

}  // namespace kerrsteer
