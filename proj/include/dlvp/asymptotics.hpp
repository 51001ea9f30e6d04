#pragma once

// Main terms and remainder envelopes of the asymptotic equalities for
// E(C^psi_{beta,s}; V_{n,p}) and E(C^psi_beta H_omega; V_{n,p}) as n-p -> inf,
// the constant K_{q,p}(s') and the exponents sigma, gamma.
//
// Every term carries the prefactor psi(n-p+1)/p. Functions named *_constant
// return the bracket without it, which is what ratios are formed from.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dlvp/coefficient_sequences.hpp"
#include "dlvp/modulus.hpp"
#include "dlvp/worst_case.hpp"

namespace dlvp {

/// Complete elliptic integral of the first kind, int_0^{pi/2} dt / sqrt(1 - rho^2 sin^2 t),
/// by the arithmetic-geometric mean.
double elliptic_K(double rho);

struct EllipticValue {
  double value = 0.0;
  /// Relative condition number rho K'(rho) / K(rho).
  double condition = 0.0;
  bool ill_conditioned = false;
};

/// elliptic_K with a conditioning diagnostic (flagged above 1e6).
EllipticValue elliptic_K_checked(double rho);

/// 2^{-1/s'} || sqrt(1 - 2 q^p cos pt + q^{2p}) / (1 - 2q cos t + q^2) ||_{s'} over [0, 2 pi].
double K_qp(double q, std::int64_t p, double s_prime, double tol = 1e-12);

/// 1 if (s'=1, p=1); 2 if (s'>1, p=1); 3 if p >= 2.
int sigma_exponent(double s_prime, std::int64_t p);
/// 2 if p=1, else 3.
int gamma_exponent(std::int64_t p);

/// (||cos||_{s'} / pi^{1+1/s'}) K_{q,p}(s').
double thm2_constant(double q, std::int64_t p, double s);
/// (psi(n-p+1)/p) * thm2_constant.
double thm2_main_term(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta, double s);
/// (8/pi^2) (1 - q^{2p}) / (1 - q^2) K(q^p), the s = inf constant in elliptic form.
double thm2_elliptic_constant(double q, std::int64_t p);
/// 4 / (pi (1 - q^2)), the s = inf constant once q^p is negligible.
double thm2_large_p_constant(double q);

/// 1/((n-p+1)(1-q)^sigma) + eps_{n-p+1}/(1-q)^2 min{p, 1/(1-q)}.
double thm2_envelope_constant(const PsiSequence& seq, std::int64_t n, std::int64_t p, double s);
double thm2_remainder_envelope(const PsiSequence& seq, std::int64_t n, std::int64_t p, double s);
/// q^p/(1-q) + 1/((n-p+1)(1-q)^{sigma(1,p)}) + eps/(1-q)^3.
double thm2_large_p_envelope_constant(const PsiSequence& seq, std::int64_t n, std::int64_t p);

/// (4/pi^2) (1 - q^{2p})/(1 - q^2) K(q^p) int_0^{pi/2} omega(2t/(n-p+1)) sin t dt.
double thm3_constant(double q, std::int64_t n, std::int64_t p, const ModulusOfContinuity& omega);
double thm3_main_term(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                      const ModulusOfContinuity& omega);
/// omega(pi)/((1-q)^gamma (n-p+1)) + eps/(1-q)^2 min{p, 1/(1-q)} omega(1/(n-p+1)).
double thm3_envelope_constant(const PsiSequence& seq, std::int64_t n, std::int64_t p,
                              const ModulusOfContinuity& omega);
/// Hoelder form of thm3_constant for omega(t) = t^alpha:
/// 2^{2+alpha} / (pi^2 (n-p+1)^alpha) (1-q^{2p})/(1-q^2) K(q^p) int_0^{pi/2} t^alpha sin t dt.
double holder_constant(double q, std::int64_t n, std::int64_t p, double alpha);

/// Warnings for the hypotheses on omega (convexity and omega(t)/t -> inf).
std::vector<std::string> omega_warnings(const ModulusOfContinuity& omega);

/// The class of a problem instance: an exponent s in [1, inf] or a modulus.
using ProblemClass = std::variant<double, ModulusOfContinuity>;

enum class Theorem { T1, T2, T3, Cor1, Cor2 };

std::string_view to_string(Theorem theorem);
/// Accepts 1, 2, 3, cor1, cor2.
Theorem parse_theorem(std::string_view text);

struct AsymptoticOptions {
  DualNormOptions dual;
  LpOptions lp;
  /// Compute the exact worst case and the ratio exact/main.
  bool with_exact = true;
  /// Theorem 2 at s = inf: use the large-p constant 4/(pi(1-q^2)).
  bool large_p_form = false;
};

struct AsymptoticReport {
  Theorem theorem = Theorem::T2;
  double main_term = 0.0;
  double remainder_envelope = 0.0;
  std::optional<double> exact_value;
  std::optional<double> ratio;

  /// psi(n-p+1)/p; main/envelope/exact divided by it are the normalized values.
  double prefactor = 0.0;
  double main_constant = 0.0;
  double envelope_constant = 0.0;
  std::optional<double> exact_constant;
  std::optional<double> exact_error_estimate;

  /// Theorem 1: |E(C^psi)/psi(n-p+1) - E(C^q)/q^{n-p+1}| and its ratio to the envelope.
  std::optional<double> residual;
  std::optional<double> residual_over_envelope;

  double epsilon = 0.0;
  std::int64_t n = 1;
  std::int64_t p = 1;
  double beta = 0.0;
  std::string sequence;
  std::string class_label;
  std::vector<std::string> warnings;
};

/// Theorem 1 transfer: exact values for psi and its geometric companion.
AsymptoticReport thm1_transfer(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                               const ProblemClass& cls, const AsymptoticOptions& opts = {});

/// Corollary 1 (Neumann) or 2 (polyharmonic).
AsymptoticReport corollary_eval(Theorem which, const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                                const ProblemClass& cls, const AsymptoticOptions& opts = {});

/// Dispatch on theorem; T2 needs an exponent, T3 a modulus.
AsymptoticReport asymptotic_report(Theorem theorem, const PsiSequence& seq, std::int64_t n, std::int64_t p,
                                   double beta, const ProblemClass& cls, const AsymptoticOptions& opts = {});

}  // namespace dlvp
