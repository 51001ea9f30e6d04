#include "dlvp/kernels.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <fmt/format.h>

#include "dlvp/errors.hpp"

namespace dlvp {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::int64_t kMaxTerms = 50'000'000;

void check_tol(double tol) {
  if (!(tol > 0.0)) throw DomainError(fmt::format("tolerance must be positive, got {}", tol));
}

// e^{i(k t - theta)} with the angle reduced before forming the exponential.
cplx unit_phase(std::int64_t k, double t, double theta) {
  const double angle = std::fmod(static_cast<double>(k) * t - theta, kTwoPi);
  return std::polar(1.0, angle);
}

// 1 - q e^{it}, with the real part written to avoid cancellation near t = 0.
cplx one_minus(double q, double t) {
  const double s = std::sin(0.5 * t);
  return {(1.0 - q) + 2.0 * q * s * s, -q * std::sin(t)};
}

// Geometric tail factor (q^{k+1}/(1-q) style) used to stop a series after
// index k: sum_{j>k} psi(j) <= psi(k) * factor. Returns a negative value when
// the majorant is not valid yet (eps_k >= 1-q).
double majorant_factor(const PsiSequence& seq, std::int64_t k) {
  const double q = seq.q();
  const double eps = seq.certified_epsilon(k).value_or(0.0);
  if (eps >= 1.0 - q) return -1.0;
  return (q + eps) / (1.0 - q - eps);
}

double tau(std::int64_t n, std::int64_t p, std::int64_t k) {
  return k >= n ? 1.0 : 1.0 - static_cast<double>(n - k) / static_cast<double>(p);
}

// sum_{k >= start} weight(k) * (psi(k)/psi(start)) * cos(kt - theta), where
// the weights are bounded by one.
template <class Weight>
double scaled_series(const PsiSequence& seq, std::int64_t start, double t, double theta, double tol,
                     Weight&& weight) {
  const auto table_end = seq.length();
  const cplx step = std::polar(1.0, t);
  cplx phase = unit_phase(start, t, theta);
  double rel = 1.0;  // psi(k)/psi(start)
  double sum = 0.0;
  for (std::int64_t k = start;; ++k) {
    sum += weight(k) * rel * phase.real();
    if (table_end) {
      if (k >= *table_end) return sum;
    } else {
      const double factor = majorant_factor(seq, k);
      if (factor >= 0.0 && rel * factor <= tol) return sum;
      if (k - start > kMaxTerms) {
        throw ConvergenceError(fmt::format("series for {} did not reach tolerance {} within {} terms",
                                           seq.describe(), tol, kMaxTerms));
      }
    }
    rel *= seq.ratio(k);
    if ((k - start) % 64 == 63) {
      phase = unit_phase(k + 1, t, theta);
    } else {
      phase *= step;
    }
  }
}

}  // namespace

void TailKernelSpec::validate() const {
  if (p < 1 || n < 1 || p > n) {
    throw DomainError(fmt::format("need 1 <= p <= n, got n={}, p={}", n, p));
  }
}

double phase_angle(double beta) {
  return std::fmod(beta, 4.0) * 0.5 * std::numbers::pi;
}

double kernel_eval(const KernelSpec& spec, double t, double tol) {
  check_tol(tol);
  const double theta = phase_angle(spec.beta);
  const double q = spec.seq.q();
  const cplx rot = std::polar(1.0, -theta);
  switch (spec.seq.family()) {
    case PsiFamily::Geometric: {
      const cplx d = one_minus(q, t);
      const cplx qz = std::polar(q, t);
      return (rot * qz * std::conj(d)).real() / std::norm(d);
    }
    case PsiFamily::Neumann: {
      const cplx d = one_minus(q, t);
      const cplx minus_log{-0.5 * std::log(std::norm(d)), -std::arg(d)};
      return (rot * minus_log).real();
    }
    default: break;
  }
  const double psi1 = spec.seq(1);
  return psi1 * scaled_series(spec.seq, 1, t, theta, tol / psi1, [](std::int64_t) { return 1.0; });
}

double vp_tail_kernel_normalized(const TailKernelSpec& spec, double t, double tol) {
  spec.validate();
  check_tol(tol);
  const double theta = phase_angle(spec.beta);
  const std::int64_t n = spec.n;
  const std::int64_t p = spec.p;
  const std::int64_t first = spec.first_harmonic();
  if (spec.seq.family() == PsiFamily::Geometric) {
    const double q = spec.seq.q();
    const double qp = std::pow(q, static_cast<double>(p));
    const double sp = std::sin(0.5 * static_cast<double>(p) * t);
    // 1 - (q e^{it})^p and (1 - q e^{it})^2
    const cplx num{(1.0 - qp) + 2.0 * qp * sp * sp, -qp * std::sin(static_cast<double>(p) * t)};
    const cplx d = one_minus(q, t);
    const cplx value = unit_phase(first, t, theta) * num * std::conj(d * d);
    const double den = std::norm(d);
    return value.real() / (static_cast<double>(p) * den * den);
  }
  return scaled_series(spec.seq, first, t, theta, tol, [n, p](std::int64_t k) { return tau(n, p, k); });
}

double vp_tail_kernel(const TailKernelSpec& spec, double t, double tol) {
  spec.validate();
  check_tol(tol);
  const double scale = spec.seq(spec.first_harmonic());
  if (scale == 0.0) return 0.0;
  return scale * vp_tail_kernel_normalized(spec, t, tol / scale);
}

double residual_kernel(const TailKernelSpec& spec, double t, double tol) {
  spec.validate();
  check_tol(tol);
  if (spec.seq.family() == PsiFamily::Geometric ||
      (spec.seq.family() == PsiFamily::Polyharmonic && spec.seq.m() == 1)) {
    return 0.0;
  }
  const double theta = phase_angle(spec.beta);
  const double q = spec.seq.q();
  const std::int64_t n = spec.n;
  const std::int64_t p = spec.p;
  const std::int64_t first = spec.first_harmonic();
  const auto table_end = spec.seq.length();

  const cplx step = std::polar(1.0, t);
  double rel = spec.seq.ratio(first);  // psi(k)/psi(first) at k = first+1
  double geo = q;                      // q^{k-first}
  cplx phase = unit_phase(first + 1, t, theta);
  double sum = 0.0;
  for (std::int64_t k = first + 1;; ++k) {
    sum += tau(n, p, k) * (rel - geo) * phase.real();
    if (table_end) {
      if (k >= *table_end) return sum;
    } else {
      const double factor = majorant_factor(spec.seq, k);
      if (factor >= 0.0 && rel * factor + geo * q / (1.0 - q) <= tol) return sum;
      if (k - first > kMaxTerms) {
        throw ConvergenceError(fmt::format("residual series for {} did not converge", spec.seq.describe()));
      }
    }
    rel *= spec.seq.ratio(k);
    geo *= q;
    if ((k - first) % 64 == 63) {
      phase = unit_phase(k + 1, t, theta);
    } else {
      phase *= step;
    }
  }
}

double geometric_tail_envelope(double q, std::int64_t n, std::int64_t p, double t) {
  const double qp = std::pow(q, static_cast<double>(p));
  const double sp = std::sin(0.5 * static_cast<double>(p) * t);
  const double st = std::sin(0.5 * t);
  const double num = (1.0 - qp) * (1.0 - qp) + 4.0 * qp * sp * sp;  // 1 - 2q^p cos pt + q^{2p}
  const double den = (1.0 - q) * (1.0 - q) + 4.0 * q * st * st;     // 1 - 2q cos t + q^2
  return std::pow(q, static_cast<double>(n - p + 1)) * std::sqrt(num) / (static_cast<double>(p) * den);
}

ResidualBounds residual_bounds(const TailKernelSpec& spec) {
  spec.validate();
  const double q = spec.seq.q();
  const double eps = epsilon_tail(spec.seq, spec.first_harmonic()).value;
  const double pd = static_cast<double>(spec.p);
  ResidualBounds b;
  b.epsilon = eps;
  b.applicable = eps < 0.5 * (1.0 - q);
  b.series_bound = eps < 1.0 - q ? eps / ((1.0 - q) * (1.0 - q - eps)) : std::numeric_limits<double>::infinity();
  b.uniform_bound = 2.0 * eps / ((1.0 - q) * (1.0 - q));
  b.averaged_bound = 8.0 * eps / (pd * std::pow(1.0 - q, 3));
  return b;
}

}  // namespace dlvp
