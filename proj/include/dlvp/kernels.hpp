#pragma once

// Generating kernel Psi_beta(t) = sum_k psi(k) cos(kt - beta*pi/2), the
// de la Vallee Poussin tail kernel and the residual kernel separating a
// general psi from its geometric companion.

#include <cstdint>

#include "dlvp/coefficient_sequences.hpp"

namespace dlvp {

inline constexpr double kDefaultKernelTol = 1e-12;

struct KernelSpec {
  PsiSequence seq;
  double beta = 0.0;
};

struct TailKernelSpec {
  PsiSequence seq;
  std::int64_t n = 1;
  std::int64_t p = 1;
  double beta = 0.0;

  /// n - p + 1, the lowest harmonic with a nonzero tail weight.
  std::int64_t first_harmonic() const noexcept { return n - p + 1; }
  /// Throws DomainError unless 1 <= p <= n.
  void validate() const;
};

/// beta*pi/2 reduced modulo 2*pi.
double phase_angle(double beta);

/// Psi_beta(t). Geometric and Neumann use closed forms and ignore tol;
/// other families sum until the geometric majorant drops below tol.
double kernel_eval(const KernelSpec& spec, double t, double tol = kDefaultKernelTol);

/// sum_{k >= n-p+1} tau_{n,p}(k) psi(k) cos(kt - beta*pi/2), absolute error <= tol.
double vp_tail_kernel(const TailKernelSpec& spec, double t, double tol = kDefaultKernelTol);

/// vp_tail_kernel / psi(n-p+1); tol is absolute on the scaled value. This is
/// the form every worst-case computation uses, since psi(n-p+1) underflows
/// long before the scaled kernel loses precision.
double vp_tail_kernel_normalized(const TailKernelSpec& spec, double t, double tol = kDefaultKernelTol);

/// r_{n,p}(t) = sum_{k >= n-p+2} tau(k) (psi(k)/psi(n-p+1) - q^{k-n+p-1}) cos(kt - beta*pi/2).
/// Identically zero for the geometric family.
double residual_kernel(const TailKernelSpec& spec, double t, double tol = kDefaultKernelTol);

/// |q^{n-p+1} (1 - (qz)^p) / (p (1 - qz)^2)| at z = e^{it}.
double geometric_tail_envelope(double q, std::int64_t n, std::int64_t p, double t);

/// Uniform bounds on |r_{n,p}(t)| from eps = eps_{n-p+1}.
struct ResidualBounds {
  double epsilon = 0.0;
  /// eps < (1-q)/2, the regime where the displayed constants hold.
  bool applicable = false;
  /// eps / ((1-q)(1-q-eps)); infinite when eps >= 1-q.
  double series_bound = 0.0;
  /// 2 eps / (1-q)^2
  double uniform_bound = 0.0;
  /// 8 eps / (p (1-q)^3)
  double averaged_bound = 0.0;

  double best() const noexcept { return uniform_bound < averaged_bound ? uniform_bound : averaged_bound; }
};

ResidualBounds residual_bounds(const TailKernelSpec& spec);

}  // namespace dlvp
