#pragma once

// Worst-case uniform deviations of V_{n,p} over the classes C^psi_{beta,s}
// (unit L_s ball of zero-mean derivatives) and C^psi_beta H_omega.
//
// Both problems reduce to the tail kernel K(t) of the deviation:
//   f(x) - V_{n,p}(f;x) = (1/pi) int phi(x - t) K(t) dt,  phi = f^psi_beta.
// All values are computed for K / psi(n-p+1) first and rescaled, so large
// n-p+1 never underflows the normalized quantities.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dlvp/coefficient_sequences.hpp"
#include "dlvp/fourier_vp.hpp"
#include "dlvp/modulus.hpp"

namespace dlvp {

enum class WorstCaseMethod { DualNorm, LP, LowerBoundCandidate };

std::string_view to_string(WorstCaseMethod method);

struct WorstCaseResult {
  /// E(class; V_{n,p}).
  double value = 0.0;
  /// value / psi(n-p+1).
  double normalized = 0.0;
  /// Certified lower value, normalized by psi(n-p+1). For DualNorm this is
  /// the quotient norm (1/pi) min_c ||K - c||_{s'} when certification ran;
  /// for LP it is the objective of the recovered feasible witness.
  std::optional<double> normalized_lower;
  /// Absolute error estimate on `normalized`.
  double error_estimate = 0.0;
  WorstCaseMethod method = WorstCaseMethod::DualNorm;
  VPConfig config;
  std::string sequence;
  /// Modulus descriptor for H_omega problems.
  std::optional<std::string> omega;
  /// Grid size of the LP discretisation.
  std::optional<std::size_t> lp_grid;
  /// psi(n-p+1), the factor between `normalized` and `value`.
  double scale = 1.0;
};

struct DualNormOptions {
  /// Relative tolerance of the L_{s'} quadrature.
  double tol = 1e-10;
  /// Sampling grid; 0 selects max(8192, 16 n).
  std::size_t grid = 0;
  /// Also minimise ||K - c||_{s'} over constants c (costs ~40 extra norms).
  bool certify = false;
};

/// (1/pi) ||K||_{s'} with 1/s + 1/s' = 1.
WorstCaseResult worstcase_Us(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta, double s,
                             const DualNormOptions& opts = {});

/// Deviation of the candidate f_{n-p+1} = Psi_beta * sin((n-p+1)x + beta pi/2)/||sin||_s:
/// psi(n-p+1) / (p ||sin||_s).
WorstCaseResult candidate_Us(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta, double s);

struct LpOptions {
  /// Grid size N >= 64; 0 selects max(512, 32 (n-p+1)).
  std::size_t grid = 0;
  /// Solve again at N/2 and fold |v_N - v_{N/2}| into error_estimate.
  bool self_refine = true;
  /// Absolute kernel tolerance for the samples.
  double kernel_tol = 1e-13;
  /// Rotate the sample grid by this many cells (translation-invariance checks).
  std::size_t rotate = 0;
};

/// max (h/pi) sum_j phi_j K_j over |phi_i - phi_j| <= omega(d(t_i, t_j)),
/// solved exactly as the dual transportation problem with cost omega(d).
WorstCaseResult worstcase_Homega_lp(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                                    const ModulusOfContinuity& omega, const LpOptions& opts = {});

/// Normalized value p q^{-(n-p+1)} E of a geometric-family problem against
/// its explicit two-sided bounds.
struct BoundsReport {
  double normalized = 0.0;
  /// Lower bound from the candidate function: 1/||sin||_s, or omega(2/N0)/2.
  double candidate_lower = 0.0;
  /// Upper bound: (2 pi)^{1/s'} / (pi (1-q)^2) for U_s, and
  /// (p/pi) int_{-pi}^{pi} omega(|t|) |K(t)/q^{N0}| dt for H_omega.
  double upper = 0.0;
  /// normalized / ref and normalized (1-q)^2 / ref, ref = 1 or omega(1/N0).
  double fitted_c1 = 0.0;
  double fitted_c2 = 0.0;
  bool within = false;
  std::string class_label;
};

BoundsReport normalized_bounds_check(double q, std::int64_t n, std::int64_t p, double beta, double s,
                                     const DualNormOptions& opts = {});
BoundsReport normalized_bounds_check(double q, std::int64_t n, std::int64_t p, double beta,
                                     const ModulusOfContinuity& omega, const LpOptions& opts = {});

}  // namespace dlvp
