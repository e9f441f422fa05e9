#pragma once

// Positive-P equations of motion for the intracavity Kerr nonlinear coupler.
//
// Units: rates in units of gamma1 (so gamma1 = 1 in the reference regime), hbar = 1.
// Two driven cavities with loss gamma_i, detuning delta_i, coherent pump eps_i and
// Kerr strength chi_i, coupled evanescently with strength J:
//
//   da1/dt  = eps1  - (g1 + i d1) a1  - 2i chi1 a1+ a1^2  - i J a2   + sqrt(-2i chi1 a1^2)  eta1
//   da1+/dt = eps1* - (g1 - i d1) a1+ + 2i chi1 a1+^2 a1  + i J a2+  + sqrt(+2i chi1 a1+^2) eta2
//
// and the same for mode 2 with 1 <-> 2 exchanged.

#include <array>
#include <string>
#include <string_view>

#include "kerrsteer/types.hpp"

namespace kerrsteer {

struct CouplerParams {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  cplx eps1{0.0, 0.0};
  cplx eps2{0.0, 0.0};
  double chi1 = 0.0;
  double chi2 = 0.0;
  double coupling_j = 0.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Exchange every mode-1 constant with its mode-2 counterpart.
  [[nodiscard]] CouplerParams swapped() const;

  /// Field names accepted by `set` / `get`, in canonical order.
  static constexpr std::array<std::string_view, 9> kFieldNames = {
      "gamma1", "gamma2", "delta1", "delta2", "eps1", "eps2", "chi1", "chi2", "coupling_j"};

  static bool is_field(std::string_view name);

  /// Sets a field from a real number. For the complex pumps the magnitude is replaced
  /// and the existing phase kept (a zero pump is taken to have phase 0).
  void set(std::string_view name, double value);

  /// Real value of a field; for pumps this is the magnitude.
  [[nodiscard]] double get(std::string_view name) const;

  bool operator==(const CouplerParams&) const = default;
};

/// The four independent positive-P amplitudes (alpha1, alpha1+, alpha2, alpha2+).
struct PhaseSpacePoint {
  cplx a1{};
  cplx a1p{};
  cplx a2{};
  cplx a2p{};

  [[nodiscard]] Vec4c vec() const { return Vec4c(a1, a1p, a2, a2p); }
  static PhaseSpacePoint from(const Vec4c& v) { return {v(0), v(1), v(2), v(3)}; }

  /// A point on the classical manifold: a1+ = conj(a1), a2+ = conj(a2).
  static PhaseSpacePoint classical(cplx a1, cplx a2) { return {a1, std::conj(a1), a2, std::conj(a2)}; }

  [[nodiscard]] PhaseSpacePoint swapped() const { return {a2, a2p, a1, a1p}; }
  [[nodiscard]] bool finite() const;
  [[nodiscard]] double norm() const;

  /// max(|a1+ - conj a1|, |a2+ - conj a2|) / (1 + norm).
  [[nodiscard]] double conjugate_mismatch() const;

  bool operator==(const PhaseSpacePoint&) const = default;
};

/// A = -M, the drift matrix of d(delta alpha) = -A delta alpha dt + B dW.
struct DriftMatrix {
  Mat4c a;
};

/// D = B B^T; diagonal for the Kerr coupler.
struct DiffusionMatrix {
  Mat4c d;
};

/// Euclidean norm of a 4-vector, summed mode by mode so that relabelling the modes
/// reproduces the value bit for bit.
double mode_norm(const Vec4c& v);

Vec4c deterministic_drift(const CouplerParams& params, const Vec4c& state);
inline Vec4c deterministic_drift(const CouplerParams& params, const PhaseSpacePoint& point) {
  return deterministic_drift(params, point.vec());
}

/// M = d f / d(alpha1, alpha1+, alpha2, alpha2+).
Mat4c jacobian(const CouplerParams& params, const PhaseSpacePoint& point);

DriftMatrix drift_matrix(const CouplerParams& params, const PhaseSpacePoint& point);

/// Diagonal entries (-2i chi1 a1^2, +2i chi1 a1+^2, -2i chi2 a2^2, +2i chi2 a2+^2).
Vec4c diffusion_diagonal(const CouplerParams& params, const Vec4c& state);
DiffusionMatrix diffusion_matrix(const CouplerParams& params, const PhaseSpacePoint& point);

/// Diagonal B with principal square roots of D, so that B B^T = D.
Mat4c noise_amplitudes(const CouplerParams& params, const PhaseSpacePoint& point);

/// Permutation exchanging mode 1 and mode 2 in the (a1, a1+, a2, a2+) basis.
Mat4c mode_swap_permutation();

}  // namespace kerrsteer
