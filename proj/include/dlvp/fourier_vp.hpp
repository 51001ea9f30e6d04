#pragma once

// Finite Fourier data and the coefficient-space action of partial sums,
// de la Vallee Poussin sums and (psi, beta)-derivatives.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "dlvp/coefficient_sequences.hpp"

namespace dlvp {

/// Cosine/sine pair of harmonic k.
struct Harmonic {
  double a = 0.0;
  double b = 0.0;
};

/// f(x) = a0/2 + sum_{k=1}^{N} (a_k cos kx + b_k sin kx).
class TrigPoly {
 public:
  static constexpr std::size_t kMaxDegree = 1'000'000;

  TrigPoly() = default;
  TrigPoly(double a0, std::vector<Harmonic> harmonics);

  /// c * cos(kx) + s * sin(kx)
  static TrigPoly monomial(std::size_t k, double c, double s);

  double a0() const noexcept { return a0_; }
  std::size_t degree() const noexcept { return harmonics_.size(); }
  /// Harmonic k (1-based); zero beyond the degree.
  Harmonic harmonic(std::size_t k) const noexcept;
  const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }

  double operator()(double x) const;

  friend TrigPoly operator+(const TrigPoly& lhs, const TrigPoly& rhs);
  friend TrigPoly operator-(const TrigPoly& lhs, const TrigPoly& rhs);
  friend TrigPoly operator*(double c, const TrigPoly& f);

 private:
  double a0_ = 0.0;
  std::vector<Harmonic> harmonics_;
};

/// One worst-case instance: (n, p, beta) plus the class exponent s in [1, inf].
struct VPConfig {
  std::int64_t n = 1;
  std::int64_t p = 1;
  double beta = 0.0;
  double s = std::numeric_limits<double>::infinity();

  std::int64_t first_harmonic() const noexcept { return n - p + 1; }
  void validate() const;
};

/// Conjugate exponent: 1 <-> inf, otherwise s/(s-1).
double conjugate_exponent(double s);
void check_exponent(double s);

/// 1 - (n-k)/p on the ramp n-p+1 <= k <= n-1 and 1 for k >= n.
double tau_weight(std::int64_t n, std::int64_t p, std::int64_t k);

/// Multiplier V_{n,p} applies to harmonic k: min{1, max{0, (n-k)/p}}.
double vp_multiplier(std::int64_t n, std::int64_t p, std::int64_t k);

TrigPoly partial_sum(const TrigPoly& f, std::int64_t k);
double partial_sum(const TrigPoly& f, std::int64_t k, double x);

TrigPoly vp_sum(const TrigPoly& f, std::int64_t n, std::int64_t p);
double vp_sum(const TrigPoly& f, std::int64_t n, std::int64_t p, double x);

/// Output value at x is sum_k (1/psi(k)) [a_k cos(kx + theta) + b_k sin(kx + theta)],
/// theta = beta*pi/2. The constant term is dropped.
TrigPoly psi_beta_derivative(const TrigPoly& f, const PsiSequence& seq, double beta);

/// (1/pi) int phi(x - t) Psi_beta(t) dt on coefficients; inverse of
/// psi_beta_derivative on zero-mean polynomials. Requires phi.a0() == 0.
TrigPoly convolve_with_kernel(const TrigPoly& phi, const PsiSequence& seq, double beta);

/// f - V_{n,p}(f) as a polynomial and pointwise.
TrigPoly deviation(const TrigPoly& f, std::int64_t n, std::int64_t p);
double deviation(const TrigPoly& f, std::int64_t n, std::int64_t p, double x);

/// CSV rows `k,a_k,b_k`; the k=0 row carries a0.
void write_csv(std::ostream& out, const TrigPoly& f);
TrigPoly read_csv(std::istream& in);

}  // namespace dlvp
