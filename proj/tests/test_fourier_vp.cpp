#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dlvp/errors.hpp"
#include "dlvp/fourier_vp.hpp"
#include "dlvp/kernels.hpp"
#include "dlvp/quadrature.hpp"
#include "oracles.hpp"

using namespace dlvp;

namespace {

TrigPoly random_poly(std::mt19937_64& rng, std::size_t degree, double a0 = NAN) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Harmonic> h(degree);
  for (auto& c : h) c = {u(rng), u(rng)};
  return TrigPoly(std::isnan(a0) ? u(rng) : a0, std::move(h));
}

// Value of f at x straight from the coefficient definition.
double direct_value(const TrigPoly& f, double x) {
  double v = 0.5 * f.a0();
  for (std::size_t k = 1; k <= f.degree(); ++k) {
    v += f.harmonic(k).a * std::cos(k * x) + f.harmonic(k).b * std::sin(k * x);
  }
  return v;
}

}  // namespace

TEST_CASE("tau weights") {
  CHECK(tau_weight(10, 3, 8) == doctest::Approx(1.0 / 3.0));
  CHECK(tau_weight(10, 3, 10) == 1.0);
  CHECK(tau_weight(10, 1, 10) == 1.0);
  CHECK_THROWS_AS(tau_weight(10, 1, 9), DomainError);
  CHECK_THROWS_AS(tau_weight(10, 3, 7), DomainError);
  CHECK_THROWS_AS(tau_weight(3, 4, 5), DomainError);
}

TEST_CASE("evaluation agrees with the coefficient definition") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_poly(rng, 150);
    for (double x : {0.0, 0.37, 2.9, 6.1}) CHECK(f(x) == doctest::Approx(direct_value(f, x)).epsilon(1e-12));
  }
}

TEST_CASE("partial sums") {
  const auto c3 = TrigPoly::monomial(3, 1.0, 0.0);
  CHECK(partial_sum(c3, 2, 0.4) == 0.0);
  CHECK(partial_sum(c3, 3, 0.0) == doctest::Approx(1.0));
  std::mt19937_64 rng(2);
  const auto f = random_poly(rng, 12);
  for (double x : {0.1, 1.0, 4.0}) CHECK(partial_sum(f, 12, x) == doctest::Approx(f(x)).epsilon(1e-14));
  CHECK(partial_sum(f, 40, 1.0) == doctest::Approx(f(1.0)).epsilon(1e-14));
}

TEST_CASE("de la Vallee Poussin sums") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_poly(rng, 30);
    for (double x : {0.0, 1.1, 5.0}) {
      CHECK(vp_sum(f, 17, 1, x) == doctest::Approx(partial_sum(f, 16, x)).epsilon(1e-13));
    }
  }
  const auto low = random_poly(rng, 6);
  for (double x : {0.2, 3.3}) CHECK(vp_sum(low, 10, 4, x) == doctest::Approx(low(x)).epsilon(1e-13));

  // cos((n-1)x) with n=5, p=3: only S_4 of S_2, S_3, S_4 contains it.
  const auto f = TrigPoly::monomial(4, 1.0, 0.0);
  const double avg = (partial_sum(f, 2, 0.0) + partial_sum(f, 3, 0.0) + partial_sum(f, 4, 0.0)) / 3.0;
  CHECK(avg == doctest::Approx(1.0 / 3.0));
  CHECK(vp_sum(f, 5, 3, 0.0) == doctest::Approx(avg).epsilon(1e-15));

  // Averaged partial sums as the oracle for random data.
  for (int i = 0; i < 10; ++i) {
    const auto g = random_poly(rng, 40);
    const std::int64_t n = 25, p = 7;
    for (double x : {0.3, 2.0}) {
      double ref = 0.0;
      for (std::int64_t k = n - p; k <= n - 1; ++k) ref += partial_sum(g, k, x);
      CHECK(vp_sum(g, n, p, x) == doctest::Approx(ref / p).epsilon(1e-12));
    }
  }
}

TEST_CASE("linearity, projection band and deviation identity") {
  std::mt19937_64 rng(4);
  const std::int64_t n = 20, p = 6;
  for (int i = 0; i < 20; ++i) {
    const auto f = random_poly(rng, 35);
    const auto g = random_poly(rng, 28);
    const double alpha = 0.7 - 0.1 * i;
    for (double x : {0.5, 2.5}) {
      CHECK(vp_sum(alpha * f + g, n, p, x) ==
            doctest::Approx(alpha * vp_sum(f, n, p, x) + vp_sum(g, n, p, x)).epsilon(1e-12));
    }
    const auto v = vp_sum(f, n, p);
    const auto d = deviation(f, n, p);
    for (std::size_t k = 1; k <= f.degree(); ++k) {
      const auto kk = static_cast<std::int64_t>(k);
      const double w = kk >= n - p + 1 ? oracle::tau(n, p, kk) : 0.0;
      CHECK(std::abs(v.harmonic(k).a - (1 - w) * f.harmonic(k).a) <= 1e-15);
      CHECK(std::abs(d.harmonic(k).a - w * f.harmonic(k).a) <= 1e-14);
      CHECK(std::abs(d.harmonic(k).b - w * f.harmonic(k).b) <= 1e-14);
    }
    CHECK(d.a0() == 0.0);
  }
}

TEST_CASE("(psi, beta)-derivative") {
  const double q = 0.5;
  const auto geo = PsiSequence::geometric(q);
  const auto c4 = TrigPoly::monomial(4, 1.0, 0.0);
  const auto d0 = psi_beta_derivative(c4, geo, 0.0);
  CHECK(d0.harmonic(4).a == doctest::Approx(16.0));
  CHECK(d0.harmonic(4).b == doctest::Approx(0.0));
  const auto d1 = psi_beta_derivative(c4, geo, 1.0);
  CHECK(std::abs(d1.harmonic(4).a) <= 1e-14);
  CHECK(d1.harmonic(4).b == doctest::Approx(-16.0));

  // Value contract: sum (1/psi(k)) [a_k cos(kx + theta) + b_k sin(kx + theta)].
  std::mt19937_64 rng(5);
  const auto seq = PsiSequence::neumann(0.8);
  const auto f = random_poly(rng, 20);
  for (double beta : {0.3, -1.4}) {
    const double th = beta * oracle::kPi / 2;
    const auto d = psi_beta_derivative(f, seq, beta);
    CHECK(d.a0() == 0.0);
    for (double x : {0.0, 1.7}) {
      double ref = 0.0;
      for (std::size_t k = 1; k <= f.degree(); ++k) {
        ref += (f.harmonic(k).a * std::cos(k * x + th) + f.harmonic(k).b * std::sin(k * x + th)) / seq(k);
      }
      CHECK(d(x) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("convolution with the generating kernel") {
  const auto geo = PsiSequence::geometric(0.5);
  const auto out = convolve_with_kernel(TrigPoly::monomial(1, 1.0, 0.0), geo, 0.0);
  CHECK(out.harmonic(1).a == doctest::Approx(0.5));
  CHECK(out.harmonic(1).b == doctest::Approx(0.0));
  CHECK_THROWS_AS(convolve_with_kernel(TrigPoly(1.0, {{1.0, 0.0}}), geo, 0.0), DomainError);

  std::mt19937_64 rng(6);
  for (const auto& seq : {PsiSequence::geometric(0.8), PsiSequence::neumann(0.7), PsiSequence::polyharmonic(0.75, 3)}) {
    for (double beta : {0.0, 0.6, 3.1}) {
      const auto f = random_poly(rng, 50);
      const auto back = convolve_with_kernel(psi_beta_derivative(f, seq, beta), seq, beta);
      CHECK(back.a0() == 0.0);
      for (std::size_t k = 1; k <= 50; ++k) {
        CHECK(std::abs(back.harmonic(k).a - f.harmonic(k).a) <= 1e-12);
        CHECK(std::abs(back.harmonic(k).b - f.harmonic(k).b) <= 1e-12);
      }
      const auto phi = random_poly(rng, 50, 0.0);
      const auto again = psi_beta_derivative(convolve_with_kernel(phi, seq, beta), seq, beta);
      for (std::size_t k = 1; k <= 50; ++k) {
        CHECK(std::abs(again.harmonic(k).a - phi.harmonic(k).a) <= 1e-12);
        CHECK(std::abs(again.harmonic(k).b - phi.harmonic(k).b) <= 1e-12);
      }
    }
  }

  // Convolution against the kernel evaluated pointwise.
  const auto seq = PsiSequence::neumann(0.6);
  const auto phi = random_poly(rng, 8, 0.0);
  const auto f = convolve_with_kernel(phi, seq, 0.4);
  for (double x : {0.0, 2.0}) {
    const double ref = oracle::trapezoid([&](double t) { return phi(x - t) * kernel_eval({seq, 0.4}, t); }, 0.0,
                                         2 * oracle::kPi, 256) / oracle::kPi;
    CHECK(f(x) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("deviation of the extremal candidate") {
  const double q = 0.5;
  const auto geo = PsiSequence::geometric(q);
  for (std::int64_t p : {1, 3}) {
    const std::int64_t first = 9, n = first + p - 1;
    for (double beta : {0.0, 0.5}) {
      // s = inf: ||sin||_inf = 1.
      const double th = beta * oracle::kPi / 2;
      const TrigPoly phi = TrigPoly::monomial(first, std::sin(th), std::cos(th));
      const TrigPoly f = convolve_with_kernel(phi, geo, beta);
      const auto ext = periodic_extrema([&](double x) { return deviation(f, n, p, x); }, 512);
      const double sup = std::max(ext.max, -ext.min);
      CHECK(sup == doctest::Approx(std::pow(q, first) / p).epsilon(1e-12));
    }
  }
}

TEST_CASE("deviation equals the kernel convolution") {
  std::mt19937_64 rng(8);
  for (const auto& seq : {PsiSequence::geometric(0.7), PsiSequence::neumann(0.5)}) {
    const std::int64_t n = 12, p = 4;
    const double beta = 0.7;
    const auto f = random_poly(rng, 24);
    const auto phi = psi_beta_derivative(f, seq, beta);
    const TailKernelSpec spec{seq, n, p, beta};
    for (double x : {0.4, 3.0}) {
      const double ref = oracle::trapezoid([&](double t) { return phi(x - t) * vp_tail_kernel(spec, t); }, 0.0,
                                           2 * oracle::kPi, 4096) / oracle::kPi;
      CHECK(std::abs(deviation(f, n, p, x) - ref) <= 1e-10);
    }
  }
  const auto low = random_poly(rng, 5);
  CHECK(std::abs(deviation(low, 9, 4, 1.0)) <= 1e-15);
}

TEST_CASE("CSV round trip") {
  std::mt19937_64 rng(9);
  const auto f = random_poly(rng, 7);
  std::stringstream ss;
  write_csv(ss, f);
  const auto g = read_csv(ss);
  CHECK(g.a0() == f.a0());
  REQUIRE(g.degree() == f.degree());
  for (std::size_t k = 1; k <= f.degree(); ++k) {
    CHECK(g.harmonic(k).a == f.harmonic(k).a);
    CHECK(g.harmonic(k).b == f.harmonic(k).b);
  }
  std::stringstream bad("k,a_k,b_k\n1,abc,0\n");
  CHECK_THROWS(read_csv(bad));
}

TEST_CASE("configuration checks") {
  CHECK(conjugate_exponent(1.0) == INFINITY);
  CHECK(conjugate_exponent(INFINITY) == 1.0);
  CHECK(conjugate_exponent(2.0) == 2.0);
  CHECK(conjugate_exponent(3.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(conjugate_exponent(0.5), DomainError);
  CHECK_THROWS_AS((VPConfig{3, 5, 0.0, 2.0}.validate()), DomainError);
  CHECK_NOTHROW((VPConfig{5, 5, 0.0, 1.0}.validate()));
}
