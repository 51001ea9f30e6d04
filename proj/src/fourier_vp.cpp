#include "dlvp/fourier_vp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "dlvp/errors.hpp"
#include "dlvp/kernels.hpp"
#include "spec_parsing.hpp"

namespace dlvp {

namespace {

void check_np(std::int64_t n, std::int64_t p) {
  if (p < 1 || n < 1 || p > n) throw DomainError(fmt::format("need 1 <= p <= n, got n={}, p={}", n, p));
}

// Rotates the pair so that a cos(kx) + b sin(kx) becomes a cos(kx + theta) + b sin(kx + theta).
Harmonic shift_phase(Harmonic h, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {h.a * c + h.b * s, h.b * c - h.a * s};
}

template <class Multiplier>
TrigPoly scale_harmonics(const TrigPoly& f, double a0, Multiplier&& mult) {
  std::vector<Harmonic> out(f.degree());
  for (std::size_t k = 1; k <= f.degree(); ++k) {
    const double w = mult(static_cast<std::int64_t>(k));
    const Harmonic h = f.harmonic(k);
    out[k - 1] = {w * h.a, w * h.b};
  }
  return TrigPoly(a0, std::move(out));
}

}  // namespace

TrigPoly::TrigPoly(double a0, std::vector<Harmonic> harmonics) : a0_(a0), harmonics_(std::move(harmonics)) {
  if (harmonics_.size() > kMaxDegree) {
    throw DomainError(fmt::format("degree {} exceeds the cap of {} harmonics", harmonics_.size(), kMaxDegree));
  }
}

TrigPoly TrigPoly::monomial(std::size_t k, double c, double s) {
  if (k == 0) return TrigPoly(2.0 * c, {});
  std::vector<Harmonic> h(k);
  h[k - 1] = {c, s};
  return TrigPoly(0.0, std::move(h));
}

Harmonic TrigPoly::harmonic(std::size_t k) const noexcept {
  if (k == 0 || k > harmonics_.size()) return {};
  return harmonics_[k - 1];
}

double TrigPoly::operator()(double x) const {
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> z = step;
  double sum = 0.5 * a0_;
  for (std::size_t k = 1; k <= harmonics_.size(); ++k) {
    sum += harmonics_[k - 1].a * z.real() + harmonics_[k - 1].b * z.imag();
    if (k % 64 == 0) {
      z = std::polar(1.0, std::fmod(static_cast<double>(k + 1) * x, 2.0 * std::numbers::pi));
    } else {
      z *= step;
    }
  }
  return sum;
}

TrigPoly operator+(const TrigPoly& lhs, const TrigPoly& rhs) {
  std::vector<Harmonic> h(std::max(lhs.degree(), rhs.degree()));
  for (std::size_t k = 1; k <= h.size(); ++k) {
    h[k - 1] = {lhs.harmonic(k).a + rhs.harmonic(k).a, lhs.harmonic(k).b + rhs.harmonic(k).b};
  }
  return TrigPoly(lhs.a0() + rhs.a0(), std::move(h));
}

TrigPoly operator*(double c, const TrigPoly& f) {
  return scale_harmonics(f, c * f.a0(), [c](std::int64_t) { return c; });
}

TrigPoly operator-(const TrigPoly& lhs, const TrigPoly& rhs) { return lhs + (-1.0) * rhs; }

void VPConfig::validate() const {
  check_np(n, p);
  check_exponent(s);
}

void check_exponent(double s) {
  if (!(s >= 1.0)) throw DomainError(fmt::format("exponent s must lie in [1, inf], got {}", s));
}

double conjugate_exponent(double s) {
  check_exponent(s);
  if (s == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(s)) return 1.0;
  return s / (s - 1.0);
}

double tau_weight(std::int64_t n, std::int64_t p, std::int64_t k) {
  check_np(n, p);
  if (k <= n - p) {
    throw DomainError(fmt::format("tau_{{{},{}}}({}) is defined only for k >= n-p+1 = {}", n, p, k, n - p + 1));
  }
  if (k >= n) return 1.0;
  return 1.0 - static_cast<double>(n - k) / static_cast<double>(p);
}

double vp_multiplier(std::int64_t n, std::int64_t p, std::int64_t k) {
  check_np(n, p);
  if (k <= n - p) return 1.0;
  if (k >= n) return 0.0;
  return static_cast<double>(n - k) / static_cast<double>(p);
}

TrigPoly partial_sum(const TrigPoly& f, std::int64_t k) {
  if (k < 0) throw DomainError(fmt::format("partial sum index must be >= 0, got {}", k));
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), f.degree());
  return TrigPoly(f.a0(), std::vector<Harmonic>(f.harmonics().begin(), f.harmonics().begin() + keep));
}

double partial_sum(const TrigPoly& f, std::int64_t k, double x) { return partial_sum(f, k)(x); }

TrigPoly vp_sum(const TrigPoly& f, std::int64_t n, std::int64_t p) {
  check_np(n, p);
  return scale_harmonics(f, f.a0(), [n, p](std::int64_t k) { return vp_multiplier(n, p, k); });
}

double vp_sum(const TrigPoly& f, std::int64_t n, std::int64_t p, double x) { return vp_sum(f, n, p)(x); }

TrigPoly psi_beta_derivative(const TrigPoly& f, const PsiSequence& seq, double beta) {
  const double theta = phase_angle(beta);
  std::vector<Harmonic> out(f.degree());
  for (std::size_t k = 1; k <= f.degree(); ++k) {
    const Harmonic h = shift_phase(f.harmonic(k), theta);
    const double inv = 1.0 / seq(static_cast<std::int64_t>(k));
    out[k - 1] = {inv * h.a, inv * h.b};
  }
  return TrigPoly(0.0, std::move(out));
}

TrigPoly convolve_with_kernel(const TrigPoly& phi, const PsiSequence& seq, double beta) {
  if (phi.a0() != 0.0) {
    throw DomainError(fmt::format("convolution needs a zero-mean density, got a0 = {}", phi.a0()));
  }
  const double theta = phase_angle(beta);
  std::vector<Harmonic> out(phi.degree());
  for (std::size_t k = 1; k <= phi.degree(); ++k) {
    const Harmonic h = shift_phase(phi.harmonic(k), -theta);
    const double w = seq(static_cast<std::int64_t>(k));
    out[k - 1] = {w * h.a, w * h.b};
  }
  return TrigPoly(0.0, std::move(out));
}

TrigPoly deviation(const TrigPoly& f, std::int64_t n, std::int64_t p) {
  check_np(n, p);
  return scale_harmonics(f, 0.0, [n, p](std::int64_t k) { return 1.0 - vp_multiplier(n, p, k); });
}

double deviation(const TrigPoly& f, std::int64_t n, std::int64_t p, double x) {
  return f(x) - vp_sum(f, n, p, x);
}

void write_csv(std::ostream& out, const TrigPoly& f) {
  out << "k,a_k,b_k\n";
  out << fmt::format("0,{:.17g},0\n", f.a0());
  for (std::size_t k = 1; k <= f.degree(); ++k) {
    out << fmt::format("{},{:.17g},{:.17g}\n", k, f.harmonic(k).a, f.harmonic(k).b);
  }
}

TrigPoly read_csv(std::istream& in) {
  std::map<std::int64_t, Harmonic> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (trimmed.front() == 'k') continue;  // header
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      auto comma = trimmed.find(',', start);
      cells.push_back(trimmed.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 3) throw UsageError(fmt::format("line {}: expected k,a_k,b_k", lineno));
    const auto where = fmt::format("line {}", lineno);
    const int k = detail::parse_int(cells[0], where);
    if (k < 0) throw UsageError(fmt::format("line {}: negative harmonic index", lineno));
    if (!rows.emplace(k, Harmonic{detail::parse_double(cells[1], where), detail::parse_double(cells[2], where)})
             .second) {
      throw UsageError(fmt::format("line {}: duplicate harmonic {}", lineno, k));
    }
  }
  double a0 = 0.0;
  std::size_t degree = 0;
  for (const auto& [k, h] : rows) {
    if (k == 0) a0 = h.a;
    degree = std::max(degree, static_cast<std::size_t>(k));
  }
  std::vector<Harmonic> h(degree);
  for (const auto& [k, v] : rows) {
    if (k > 0) h[static_cast<std::size_t>(k) - 1] = v;
  }
  return TrigPoly(a0, std::move(h));
}

}  // namespace dlvp
