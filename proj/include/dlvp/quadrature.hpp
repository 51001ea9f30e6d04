#pragma once

// Definite integrals and L_s norms of 2*pi-periodic functions with
// refinement-based error estimates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dlvp/modulus.hpp"

namespace dlvp {

using RealFunction = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct PeriodicQuadratureOptions {
  /// Sampling grid on [0, 2*pi); doubled on each refinement.
  std::size_t grid = 8192;
  /// Relative tolerance on the returned norm.
  double tol = 1e-10;
  int max_refinements = 4;
};

/// (int_0^{2pi} |g|^s dt)^{1/s}, or max |g| for s = inf. Sign changes found
/// on the grid are located exactly and each sign-constant piece is integrated
/// with adaptive Gauss-Kronrod; without sign changes the periodic trapezoid
/// rule is used. Throws AccuracyError (carrying the last estimate) when
/// successive grids disagree after max_refinements doublings.
QuadratureResult lp_norm_periodic(const RealFunction& g, double s, const PeriodicQuadratureOptions& opts = {});

/// int_a^b g with absolute error estimate <= tol (adaptive Gauss-Kronrod).
QuadratureResult integrate(const RealFunction& g, double a, double b, double tol = 1e-12);

/// int_0^{pi/2} omega(2t/N) sin t dt.
double omega_sine_integral(const ModulusOfContinuity& omega, std::int64_t N, double tol = 1e-12);

/// Zeros of a periodic function, located from sign changes on a uniform grid
/// and refined by bracketing. Sorted, in [0, 2*pi).
std::vector<double> periodic_sign_changes(const RealFunction& g, std::size_t grid,
                                          std::vector<double>* samples = nullptr);

struct PeriodicExtrema {
  double max = 0.0;
  double argmax = 0.0;
  double min = 0.0;
  double argmin = 0.0;
};

/// Grid extrema polished by Brent minimisation around the best candidates.
PeriodicExtrema periodic_extrema(const RealFunction& g, std::size_t grid);

/// ||sin t||_s = ||cos t||_s over one period, in closed form:
/// (2 sqrt(pi) Gamma((s+1)/2) / Gamma(s/2+1))^{1/s}; 1 for s = inf.
double lp_norm_cos(double s);

}  // namespace dlvp
