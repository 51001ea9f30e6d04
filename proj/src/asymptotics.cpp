#include "dlvp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "dlvp/errors.hpp"
#include "dlvp/fourier_vp.hpp"
#include "dlvp/quadrature.hpp"

namespace dlvp {

namespace {

constexpr double kPi = std::numbers::pi;

struct Agm {
  double K = 0.0;
  double E = 0.0;
};

Agm agm(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError(fmt::format("elliptic modulus must lie in [0, 1), got {}", rho));
  double a = 1.0;
  double b = std::sqrt((1.0 - rho) * (1.0 + rho));
  double c = rho;
  double weight = 0.5;
  double sum = weight * c * c;
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    weight *= 2.0;
    sum += weight * c * c;
  }
  Agm out;
  out.K = kPi / (a + b);
  out.E = out.K * (1.0 - sum);
  return out;
}

void check_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError(fmt::format("q must lie in (0, 1), got {}", q));
}

void check_np(std::int64_t n, std::int64_t p) {
  if (p < 1 || p > n) throw DomainError(fmt::format("need 1 <= p <= n, got n={}, p={}", n, p));
}

double first(std::int64_t n, std::int64_t p) { return static_cast<double>(n - p + 1); }

double min_factor(double q, std::int64_t p) { return std::min(static_cast<double>(p), 1.0 / (1.0 - q)); }

double eps_at(const PsiSequence& seq, std::int64_t n, std::int64_t p) {
  return epsilon_tail(seq, n - p + 1).value;
}

// psi(n-p+1)/p without forming psi separately when it would underflow.
double prefactor(const PsiSequence& seq, std::int64_t n, std::int64_t p) {
  return std::exp(seq.log_value(n - p + 1) - std::log(static_cast<double>(p)));
}

// (4/pi^2) (1 - q^{2p})/(1 - q^2) K(q^p).
double elliptic_factor(double q, std::int64_t p) {
  const double qp = std::pow(q, static_cast<double>(p));
  return 4.0 / (kPi * kPi) * (1.0 - qp * qp) / ((1.0 - q) * (1.0 + q)) * elliptic_K(qp);
}

std::string class_label(const ProblemClass& cls) {
  if (const auto* s = std::get_if<double>(&cls)) return fmt::format("s={}", *s);
  return fmt::format("omega={}", std::get<ModulusOfContinuity>(cls).describe());
}

WorstCaseResult exact_for(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                          const ProblemClass& cls, const AsymptoticOptions& opts) {
  if (const auto* s = std::get_if<double>(&cls)) return worstcase_Us(seq, n, p, beta, *s, opts.dual);
  return worstcase_Homega_lp(seq, n, p, beta, std::get<ModulusOfContinuity>(cls), opts.lp);
}

AsymptoticReport skeleton(Theorem th, const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                          const ProblemClass& cls) {
  check_np(n, p);
  AsymptoticReport r;
  r.theorem = th;
  r.n = n;
  r.p = p;
  r.beta = beta;
  r.sequence = seq.describe();
  r.class_label = class_label(cls);
  r.epsilon = eps_at(seq, n, p);
  r.prefactor = prefactor(seq, n, p);
  return r;
}

void attach_exact(AsymptoticReport& r, const WorstCaseResult& exact) {
  const double pp = static_cast<double>(r.p);
  r.exact_constant = pp * exact.normalized;
  r.exact_error_estimate = pp * exact.error_estimate;
  r.exact_value = exact.value;
  if (r.main_constant != 0.0) r.ratio = *r.exact_constant / r.main_constant;
}

void finish(AsymptoticReport& r) {
  r.main_term = r.prefactor * r.main_constant;
  r.remainder_envelope = r.prefactor * r.envelope_constant;
}

}  // namespace

double elliptic_K(double rho) { return agm(rho).K; }

EllipticValue elliptic_K_checked(double rho) {
  const Agm v = agm(rho);
  EllipticValue out;
  out.value = v.K;
  out.condition = rho == 0.0 ? 0.0 : v.E / ((1.0 - rho) * (1.0 + rho) * v.K) - 1.0;
  out.ill_conditioned = out.condition > 1e6;
  return out;
}

double K_qp(double q, std::int64_t p, double s_prime, double tol) {
  check_q(q);
  check_exponent(s_prime);
  if (p < 1) throw DomainError(fmt::format("p must be positive, got {}", p));
  const double qp = std::pow(q, static_cast<double>(p));
  const double pd = static_cast<double>(p);
  // Both factors in cancellation-free form: 1 - 2a cos x + a^2 = (1-a)^2 + 4a sin^2(x/2).
  const RealFunction g = [=](double t) {
    const double sp = std::sin(0.5 * pd * t);
    const double s1 = std::sin(0.5 * t);
    const double num = (1.0 - qp) * (1.0 - qp) + 4.0 * qp * sp * sp;
    const double den = (1.0 - q) * (1.0 - q) + 4.0 * q * s1 * s1;
    return std::sqrt(num) / den;
  };
  PeriodicQuadratureOptions qopts;
  qopts.tol = tol;
  qopts.grid = std::max<std::size_t>(8192, 64 * static_cast<std::size_t>(p));
  const double norm = lp_norm_periodic(g, s_prime, qopts).value;
  return std::isinf(s_prime) ? norm : norm * std::pow(2.0, -1.0 / s_prime);
}

int sigma_exponent(double s_prime, std::int64_t p) {
  check_exponent(s_prime);
  if (p < 1) throw DomainError(fmt::format("p must be positive, got {}", p));
  if (p >= 2) return 3;
  return s_prime == 1.0 ? 1 : 2;
}

int gamma_exponent(std::int64_t p) {
  if (p < 1) throw DomainError(fmt::format("p must be positive, got {}", p));
  return p == 1 ? 2 : 3;
}

double thm2_constant(double q, std::int64_t p, double s) {
  check_exponent(s);
  const double sp = conjugate_exponent(s);
  const double inv = std::isinf(sp) ? 0.0 : 1.0 / sp;
  return lp_norm_cos(sp) / std::pow(kPi, 1.0 + inv) * K_qp(q, p, sp);
}

double thm2_main_term(const PsiSequence& seq, std::int64_t n, std::int64_t p, double /*beta*/, double s) {
  check_np(n, p);
  return prefactor(seq, n, p) * thm2_constant(seq.q(), p, s);
}

double thm2_elliptic_constant(double q, std::int64_t p) {
  check_q(q);
  return 2.0 * elliptic_factor(q, p);
}

double thm2_large_p_constant(double q) {
  check_q(q);
  return 4.0 / (kPi * (1.0 - q) * (1.0 + q));
}

double thm2_envelope_constant(const PsiSequence& seq, std::int64_t n, std::int64_t p, double s) {
  check_np(n, p);
  const double q = seq.q();
  const int sigma = sigma_exponent(conjugate_exponent(s), p);
  return 1.0 / (first(n, p) * std::pow(1.0 - q, sigma)) +
         eps_at(seq, n, p) / ((1.0 - q) * (1.0 - q)) * min_factor(q, p);
}

double thm2_remainder_envelope(const PsiSequence& seq, std::int64_t n, std::int64_t p, double s) {
  return prefactor(seq, n, p) * thm2_envelope_constant(seq, n, p, s);
}

double thm2_large_p_envelope_constant(const PsiSequence& seq, std::int64_t n, std::int64_t p) {
  check_np(n, p);
  const double q = seq.q();
  return std::pow(q, static_cast<double>(p)) / (1.0 - q) +
         1.0 / (first(n, p) * std::pow(1.0 - q, sigma_exponent(1.0, p))) + eps_at(seq, n, p) / std::pow(1.0 - q, 3);
}

double thm3_constant(double q, std::int64_t n, std::int64_t p, const ModulusOfContinuity& omega) {
  check_q(q);
  check_np(n, p);
  return elliptic_factor(q, p) * omega_sine_integral(omega, n - p + 1);
}

double thm3_main_term(const PsiSequence& seq, std::int64_t n, std::int64_t p, double /*beta*/,
                      const ModulusOfContinuity& omega) {
  return prefactor(seq, n, p) * thm3_constant(seq.q(), n, p, omega);
}

double thm3_envelope_constant(const PsiSequence& seq, std::int64_t n, std::int64_t p,
                              const ModulusOfContinuity& omega) {
  check_np(n, p);
  const double q = seq.q();
  const double m = first(n, p);
  return omega(kPi) / (std::pow(1.0 - q, gamma_exponent(p)) * m) +
         eps_at(seq, n, p) / ((1.0 - q) * (1.0 - q)) * min_factor(q, p) * omega(1.0 / m);
}

double holder_constant(double q, std::int64_t n, std::int64_t p, double alpha) {
  check_q(q);
  check_np(n, p);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError(fmt::format("alpha must lie in (0, 1], got {}", alpha));
  const double qp = std::pow(q, static_cast<double>(p));
  const double moment =
      integrate([alpha](double t) { return std::pow(t, alpha) * std::sin(t); }, 0.0, 0.5 * kPi, 1e-14).value;
  return std::pow(2.0, 2.0 + alpha) / (kPi * kPi * std::pow(first(n, p), alpha)) * (1.0 - qp * qp) /
         ((1.0 - q) * (1.0 + q)) * elliptic_K(qp) * moment;
}

std::vector<std::string> omega_warnings(const ModulusOfContinuity& omega) {
  std::vector<std::string> out;
  const ModulusDiagnostics d = diagnose(omega);
  if (!d.zero_at_origin || !d.nondecreasing || !d.subadditive) {
    out.push_back(fmt::format("{} fails the modulus-of-continuity axioms on sampled points", omega.describe()));
  }
  if (!omega.convex() || !d.midpoint_concave) {
    out.push_back(fmt::format("{} is not convex upwards; the H_omega main term is not established", omega.describe()));
  }
  if (!d.ratio_diverges_at_zero) {
    out.push_back(fmt::format("omega(t)/t does not diverge as t -> 0 for {}; the H_omega main term is not asymptotic",
                              omega.describe()));
  }
  return out;
}

std::string_view to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::T1: return "1";
    case Theorem::T2: return "2";
    case Theorem::T3: return "3";
    case Theorem::Cor1: return "cor1";
    case Theorem::Cor2: return "cor2";
  }
  return "?";
}

Theorem parse_theorem(std::string_view text) {
  if (text == "1") return Theorem::T1;
  if (text == "2") return Theorem::T2;
  if (text == "3") return Theorem::T3;
  if (text == "cor1") return Theorem::Cor1;
  if (text == "cor2") return Theorem::Cor2;
  throw UsageError(fmt::format("unknown theorem '{}', expected 1, 2, 3, cor1 or cor2", text));
}

AsymptoticReport thm1_transfer(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                               const ProblemClass& cls, const AsymptoticOptions& opts) {
  AsymptoticReport r = skeleton(Theorem::T1, seq, n, p, beta, cls);
  const double q = seq.q();
  const double pp = static_cast<double>(p);

  double envelope = r.epsilon / ((1.0 - q) * (1.0 - q)) * min_factor(q, p);
  if (const auto* omega = std::get_if<ModulusOfContinuity>(&cls)) {
    envelope *= (*omega)(1.0 / first(n, p));
  }
  const WorstCaseResult geo = exact_for(PsiSequence::geometric(q), n, p, beta, cls, opts);
  const WorstCaseResult own = exact_for(seq, n, p, beta, cls, opts);

  // Main term of the transfer: the geometric companion rescaled by psi(n-p+1).
  r.main_constant = pp * geo.normalized;
  r.envelope_constant = envelope;
  attach_exact(r, own);
  r.exact_error_estimate = pp * (own.error_estimate + geo.error_estimate);
  r.residual = std::abs(own.normalized - geo.normalized);
  if (envelope > 0.0) r.residual_over_envelope = *r.residual / (envelope / pp);
  finish(r);
  return r;
}

AsymptoticReport corollary_eval(Theorem which, const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                                const ProblemClass& cls, const AsymptoticOptions& opts) {
  if (which == Theorem::Cor1 && seq.family() != PsiFamily::Neumann) {
    throw DomainError("the Neumann corollary needs a neumann sequence");
  }
  if (which == Theorem::Cor2 && seq.family() != PsiFamily::Polyharmonic) {
    throw DomainError("the polyharmonic corollary needs a polyharmonic sequence");
  }
  if (which != Theorem::Cor1 && which != Theorem::Cor2) throw DomainError("corollary_eval needs cor1 or cor2");

  AsymptoticReport r = skeleton(which, seq, n, p, beta, cls);
  const double q = seq.q();
  const double m = first(n, p);
  const double pp = static_cast<double>(p);

  // Prefactor from the corollary's own formula rather than from psi.
  double log_pref = m * std::log(q) - std::log(pp);
  double eps_scale = q;
  if (which == Theorem::Cor1) {
    log_pref -= std::log(m);
  } else {
    const int mm = seq.m();
    double sum = 1.0;
    double term = 1.0;
    for (int j = 1; j < mm; ++j) {
      term *= (1.0 - q * q) / (2.0 * j) * (m + 2.0 * (j - 1));
      sum += term;
    }
    log_pref += std::log(sum);
    eps_scale = mm * q;
  }
  r.prefactor = std::exp(log_pref);

  if (const auto* s = std::get_if<double>(&cls)) {
    const int sigma = sigma_exponent(conjugate_exponent(*s), p);
    r.main_constant = thm2_constant(q, p, *s);
    r.envelope_constant = (1.0 / std::pow(1.0 - q, sigma) + eps_scale / ((1.0 - q) * (1.0 - q)) * min_factor(q, p)) / m;
  } else {
    const auto& omega = std::get<ModulusOfContinuity>(cls);
    r.main_constant = thm3_constant(q, n, p, omega);
    r.envelope_constant = (omega(kPi) / std::pow(1.0 - q, gamma_exponent(p)) +
                           eps_scale / ((1.0 - q) * (1.0 - q)) * min_factor(q, p) * omega(1.0 / m)) /
                          m;
    r.warnings = omega_warnings(omega);
  }
  if (opts.with_exact) attach_exact(r, exact_for(seq, n, p, beta, cls, opts));
  finish(r);
  return r;
}

AsymptoticReport asymptotic_report(Theorem theorem, const PsiSequence& seq, std::int64_t n, std::int64_t p,
                                   double beta, const ProblemClass& cls, const AsymptoticOptions& opts) {
  switch (theorem) {
    case Theorem::T1: return thm1_transfer(seq, n, p, beta, cls, opts);
    case Theorem::Cor1:
    case Theorem::Cor2: return corollary_eval(theorem, seq, n, p, beta, cls, opts);
    case Theorem::T2: {
      const auto* s = std::get_if<double>(&cls);
      if (!s) throw UsageError("theorem 2 concerns the classes C^psi_{beta,s}; pass --s");
      AsymptoticReport r = skeleton(theorem, seq, n, p, beta, cls);
      if (opts.large_p_form) {
        if (!std::isinf(*s)) throw UsageError("the large-p form is stated for s = inf only");
        r.main_constant = thm2_large_p_constant(seq.q());
        r.envelope_constant = thm2_large_p_envelope_constant(seq, n, p);
        const double qp = std::pow(seq.q(), static_cast<double>(p));
        if (qp > 0.1) r.warnings.push_back(fmt::format("q^p = {:.3g} > 0.1: outside the large-p regime", qp));
      } else {
        r.main_constant = thm2_constant(seq.q(), p, *s);
        r.envelope_constant = thm2_envelope_constant(seq, n, p, *s);
      }
      if (opts.with_exact) attach_exact(r, exact_for(seq, n, p, beta, cls, opts));
      finish(r);
      return r;
    }
    case Theorem::T3: {
      const auto* omega = std::get_if<ModulusOfContinuity>(&cls);
      if (!omega) throw UsageError("theorem 3 concerns the classes C^psi_beta H_omega; pass --omega");
      AsymptoticReport r = skeleton(theorem, seq, n, p, beta, cls);
      r.main_constant = thm3_constant(seq.q(), n, p, *omega);
      r.envelope_constant = thm3_envelope_constant(seq, n, p, *omega);
      r.warnings = omega_warnings(*omega);
      if (opts.with_exact) attach_exact(r, exact_for(seq, n, p, beta, cls, opts));
      finish(r);
      return r;
    }
  }
  throw DomainError("unknown theorem");
}

}  // namespace dlvp
