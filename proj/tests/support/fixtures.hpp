#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "kerrsteer/model.hpp"

namespace kerrsteer::testing {

// Rates in units of gamma1.
inline CouplerParams fig2_params() {
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

inline CouplerParams symmetric_params() {
  CouplerParams p;
  p.gamma1 = p.gamma2 = 1.0;
  p.delta1 = p.delta2 = 0.005;
  p.eps1 = p.eps2 = 1e3;
  p.chi1 = p.chi2 = 1e-7;
  p.coupling_j = 5.0;
  return p;
}

inline CouplerParams linear_params() {
  CouplerParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 2.0;
  p.delta1 = 0.3;
  p.delta2 = -0.2;
  p.eps1 = {1.5, 0.5};
  p.eps2 = 2.0;
  p.coupling_j = 1.0;
  return p;
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  cplx complex(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }

  /// Components in [-2, 2], loss rates in [0.1, 2].
  CouplerParams params() {
    CouplerParams p;
    p.gamma1 = uniform(0.1, 2.0);
    p.gamma2 = uniform(0.1, 2.0);
    p.delta1 = uniform(-2.0, 2.0);
    p.delta2 = uniform(-2.0, 2.0);
    p.eps1 = complex(-2.0, 2.0);
    p.eps2 = complex(-2.0, 2.0);
    p.chi1 = uniform(-2.0, 2.0);
    p.chi2 = uniform(-2.0, 2.0);
    p.coupling_j = uniform(-2.0, 2.0);
    return p;
  }

  PhaseSpacePoint point() { return {complex(-2, 2), complex(-2, 2), complex(-2, 2), complex(-2, 2)}; }

  /// A weakly nonlinear regime whose steady state reached from the origin is stable.
  CouplerParams stable_params() {
    CouplerParams p;
    p.gamma1 = uniform(0.5, 2.0);
    p.gamma2 = uniform(0.5, 2.0);
    p.delta1 = uniform(-1.0, 1.0);
    p.delta2 = uniform(-1.0, 1.0);
    p.eps1 = complex(-10.0, 10.0);
    p.eps2 = complex(-10.0, 10.0);
    p.chi1 = uniform(-1e-3, 1e-3);
    p.chi2 = uniform(-1e-3, 1e-3);
    p.coupling_j = uniform(-2.0, 2.0);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace kerrsteer::testing
