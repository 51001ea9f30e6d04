#pragma once

// Brute-force reference computations shared by the tests. Nothing here calls
// into the library's numerical routines.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

namespace oracle {

constexpr double kPi = std::numbers::pi;

/// Composite trapezoid rule with `panels` equal panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, std::int64_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.5 * (f(a) + f(b));
  for (std::int64_t i = 1; i < panels; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

/// Composite midpoint rule; avoids endpoint singularities of the integrand.
inline double midpoint(const std::function<double(double)>& f, double a, double b, std::int64_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::int64_t i = 0; i < panels; ++i) sum += f(a + h * (static_cast<double>(i) + 0.5));
  return sum * h;
}

/// Periodic Riemann sum of |g|^s on M points, raised to 1/s; max |g| for s = inf.
inline double riemann_norm(const std::function<double(double)>& g, double s, std::int64_t M) {
  const double h = 2.0 * kPi / static_cast<double>(M);
  if (std::isinf(s)) {
    double m = 0.0;
    for (std::int64_t j = 0; j < M; ++j) m = std::max(m, std::abs(g(h * static_cast<double>(j))));
    return m;
  }
  double sum = 0.0;
  for (std::int64_t j = 0; j < M; ++j) sum += std::pow(std::abs(g(h * static_cast<double>(j))), s);
  return std::pow(sum * h, 1.0 / s);
}

/// sum_{k >= start} w(k) psi(k) cos(k t - theta) by plain summation of `terms` terms.
inline double direct_series(const std::function<double(std::int64_t)>& psi,
                            const std::function<double(std::int64_t)>& w, std::int64_t start, std::int64_t terms,
                            double t, double theta) {
  double sum = 0.0;
  for (std::int64_t k = start; k < start + terms; ++k) {
    sum += w(k) * psi(k) * std::cos(static_cast<double>(k) * t - theta);
  }
  return sum;
}

/// Tail weight written out from its definition.
inline double tau(std::int64_t n, std::int64_t p, std::int64_t k) {
  if (k >= n) return 1.0;
  return 1.0 - static_cast<double>(n - k) / static_cast<double>(p);
}

/// psi_m(k) term by term with factorials from tgamma.
inline double polyharmonic(double q, int m, std::int64_t k) {
  double bracket = 1.0;
  for (int j = 1; j < m; ++j) {
    double prod = 1.0;
    for (int l = 0; l < j; ++l) prod *= static_cast<double>(k + 2 * l);
    bracket += std::pow(1.0 - q * q, j) / (std::tgamma(j + 1.0) * std::pow(2.0, j)) * prod;
  }
  return std::pow(q, static_cast<double>(k)) * bracket;
}

}  // namespace oracle
