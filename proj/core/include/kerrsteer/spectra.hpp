#pragma once

// Linearized Ornstein-Uhlenbeck treatment of the fluctuations around a steady state,
//
//   d(delta alpha) = -A delta alpha dt + B dW,   D = B B^T,
//
// its stationary spectral matrix S(w) = (A + i w)^-1 D (A^T - i w)^-1, and the output
// quadrature covariances seen through the cavity mirrors.

#include "kerrsteer/model.hpp"
#include "kerrsteer/steady_state.hpp"

namespace kerrsteer {

struct LinearizedModel {
  CouplerParams params;
  PhaseSpacePoint steady;
  DriftMatrix a;
  DiffusionMatrix d;
};

struct SpectralMatrix {
  double omega = 0.0;
  Mat4c s;
};

/// Output spectral covariance in the (X1, Y1, X2, Y2) basis at quadrature angle theta,
/// normalized so that vacuum (shot noise) is the identity.
struct OutputCovariance {
  double omega = 0.0;
  double theta = 0.0;
  Mat4d v;
};

/// Throws UnstablePoint if any eigenvalue of -A has a nonnegative real part.
LinearizedModel linearize(const CouplerParams& params, const PhaseSpacePoint& steady);

/// Steady state from the empty cavity followed by `linearize`.
LinearizedModel linearize(const CouplerParams& params, const SteadyStateOptions& opts = {});

/// Two LU solves; never forms an explicit inverse. Throws SingularSystem.
SpectralMatrix spectral_matrix(const LinearizedModel& model, double omega);

/// C solving A C + C A^T = D. Throws SingularSystem.
Mat4c static_covariance(const LinearizedModel& model);

/// Quadrature map Q(theta) from (da1, da1+, da2, da2+) to (X1, Y1, X2, Y2) with
/// X = a e^{-i theta} + a+ e^{i theta} and Y the quadrature at theta + pi/2.
Mat4c quadrature_map(double theta);

/// Real part of the symmetrized Q S Q^T. Throws NonHermitianResidual if the discarded
/// imaginary part exceeds 1e-8 (1 + |Q S Q^T|).
Mat4d quadrature_projection(const SpectralMatrix& s, double theta);

/// v = I + 2 L Sq L with L = diag(sqrt g1, sqrt g1, sqrt g2, sqrt g2): each cavity
/// leaks all of its loss through a single output mirror.
OutputCovariance output_covariance(const LinearizedModel& model, double omega, double theta);

/// Same, reusing an already computed spectral matrix (must belong to `model`).
OutputCovariance output_covariance(const LinearizedModel& model, const SpectralMatrix& s, double theta);

}  // namespace kerrsteer
