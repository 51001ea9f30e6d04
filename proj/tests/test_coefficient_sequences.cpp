#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dlvp/coefficient_sequences.hpp"
#include "dlvp/errors.hpp"
#include "oracles.hpp"

using namespace dlvp;

TEST_CASE("psi values of the three families") {
  CHECK(psi_eval(PsiSequence::geometric(0.5), 3) == 0.125);
  CHECK(psi_eval(PsiSequence::neumann(0.5), 2) == 0.125);
  CHECK(psi_eval(PsiSequence::polyharmonic(0.5, 1), 4) == doctest::Approx(0.0625).epsilon(1e-15));
  // q (1 + (1-q^2)/2 * k) at k = 1
  CHECK(psi_eval(PsiSequence::polyharmonic(0.5, 2), 1) == doctest::Approx(0.6875).epsilon(1e-15));
}

TEST_CASE("polyharmonic values match the expanded product formula") {
  for (int m = 1; m <= 5; ++m) {
    for (double q : {0.2, 0.5, 0.9}) {
      const auto seq = PsiSequence::polyharmonic(q, m);
      for (std::int64_t k : {1, 2, 7, 30, 100}) {
        CHECK(seq(k) == doctest::Approx(oracle::polyharmonic(q, m, k)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("psi domain errors") {
  CHECK_THROWS_AS(psi_eval(PsiSequence::geometric(0.5), 0), DomainError);
  const auto tab = PsiSequence::table({0.5, 0.25, 0.125}, 0.5);
  CHECK(tab(3) == 0.125);
  CHECK_THROWS_AS(tab(4), DomainError);
  CHECK_THROWS_AS(PsiSequence::geometric(1.0), DomainError);
  CHECK_THROWS_AS(PsiSequence::polyharmonic(0.5, 0), DomainError);
  CHECK_THROWS_AS(PsiSequence::table({0.5, -1.0}, 0.5), DomainError);
}

TEST_CASE("log values stay finite after psi underflows") {
  const auto seq = PsiSequence::neumann(0.5);
  CHECK(seq.log_value(10) == doctest::Approx(std::log(seq(10))).epsilon(1e-14));
  const double lv = seq.log_value(5000);
  CHECK(std::isfinite(lv));
  CHECK(lv == doctest::Approx(5000 * std::log(0.5) - std::log(5000.0)).epsilon(1e-14));
}

TEST_CASE("ratios agree with quotients of values") {
  for (const auto& seq : {PsiSequence::geometric(0.3), PsiSequence::neumann(0.7), PsiSequence::polyharmonic(0.4, 3)}) {
    for (std::int64_t k : {1, 5, 40}) CHECK(seq.ratio(k) == doctest::Approx(seq(k + 1) / seq(k)).epsilon(1e-14));
  }
}

TEST_CASE("epsilon tail examples") {
  CHECK(epsilon_tail(PsiSequence::geometric(0.5), 10).value == 0.0);
  CHECK(epsilon_tail(PsiSequence::neumann(0.5), 9).value == doctest::Approx(0.05).epsilon(1e-15));

  const auto poly = PsiSequence::polyharmonic(0.5, 2);
  const auto tail = epsilon_tail(poly, 20);
  REQUIRE(tail.certified_bound);
  CHECK(*tail.certified_bound == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(tail.value <= 0.025);
  // Independent scan from quotients of psi values.
  double scan = 0.0;
  for (std::int64_t k = 20; k <= 200; ++k) {
    scan = std::max(scan, std::abs(oracle::polyharmonic(0.5, 2, k + 1) / oracle::polyharmonic(0.5, 2, k) - 0.5));
  }
  CHECK(tail.value == doctest::Approx(scan).epsilon(1e-12));

  CHECK_THROWS_AS(epsilon_tail(poly, 20, 19), DomainError);
  CHECK_THROWS_AS(epsilon_tail(poly, 0), DomainError);
}

TEST_CASE("epsilon tail is nonincreasing in the start index") {
  for (const auto& seq : {PsiSequence::geometric(0.5), PsiSequence::neumann(0.3), PsiSequence::polyharmonic(0.6, 2),
                          PsiSequence::polyharmonic(0.6, 4)}) {
    double prev = INFINITY;
    for (std::int64_t m = 1; m <= 60; ++m) {
      const double v = epsilon_tail(seq, m).value;
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("neumann ratio scan never exceeds the closed form") {
  for (double q : {0.1, 0.5, 0.95}) {
    const auto seq = PsiSequence::neumann(q);
    for (std::int64_t m : {1, 7, 300}) {
      const auto tail = epsilon_tail(seq, m, 20000);
      CHECK(tail.observed <= q / (m + 1.0) + 1e-15);
      CHECK(tail.observed == doctest::Approx(q / (m + 1.0)).epsilon(1e-13));
    }
  }
}

TEST_CASE("product ratio gap examples and bound") {
  CHECK(product_ratio_gap(PsiSequence::geometric(0.3), 5, 7) <= 1e-17);
  CHECK(product_ratio_gap(PsiSequence::neumann(0.5), 4, 1) == doctest::Approx(0.1).epsilon(1e-14));
  const double eps4 = epsilon_tail(PsiSequence::neumann(0.5), 4).value;
  CHECK(std::pow(0.5 + eps4, 1) - 0.5 == doctest::Approx(0.1).epsilon(1e-14));

  const auto poly = PsiSequence::polyharmonic(0.4, 3);
  const double eps10 = epsilon_tail(poly, 10).value;
  CHECK(product_ratio_gap(poly, 10, 5) <= std::pow(0.4 + eps10, 5) - std::pow(0.4, 5));

  for (const auto& seq : {PsiSequence::neumann(0.5), PsiSequence::polyharmonic(0.4, 3), PsiSequence::polyharmonic(0.7, 2)}) {
    for (std::int64_t m = 1; m <= 50; m += 7) {
      const double eps = epsilon_tail(seq, m).value;
      for (std::int64_t k = 1; k <= 50; k += 7) {
        const double gap = product_ratio_gap(seq, m, k);
        CHECK(gap <= std::pow(seq.q() + eps, k) - std::pow(seq.q(), k) + 1e-15);
        // Oracle: the telescoped product is psi(m+k)/psi(m).
        CHECK(gap == doctest::Approx(std::abs(std::exp(seq.log_value(m + k) - seq.log_value(m)) -
                                              std::pow(seq.q(), k)))
                         .epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("ratio gap decays monotonically for the non-geometric families") {
  for (const auto& seq : {PsiSequence::neumann(0.5), PsiSequence::polyharmonic(0.5, 3)}) {
    const double g10 = std::abs(seq.ratio(10) - seq.q());
    const double g100 = std::abs(seq.ratio(100) - seq.q());
    const double g1000 = std::abs(seq.ratio(1000) - seq.q());
    CHECK(g10 > g100);
    CHECK(g100 > g1000);
  }
}

TEST_CASE("sequence specs") {
  CHECK(parse_sequence_spec("geometric:q=0.5").family() == PsiFamily::Geometric);
  CHECK(parse_sequence_spec("poisson:q=0.25").q() == 0.25);
  const auto poly = parse_sequence_spec("polyharmonic:q=0.5,m=3");
  CHECK(poly.family() == PsiFamily::Polyharmonic);
  CHECK(poly.m() == 3);
  CHECK(parse_sequence_spec(PsiSequence::neumann(0.3).describe()).family() == PsiFamily::Neumann);
  CHECK_THROWS_AS(parse_sequence_spec("bogus:q=0.5"), UsageError);
  CHECK_THROWS_AS(parse_sequence_spec("neumann"), UsageError);
  CHECK_THROWS_AS(parse_sequence_spec("neumann:q=0.5,x=1"), UsageError);
  CHECK_THROWS_AS(parse_sequence_spec("polyharmonic:q=0.5"), UsageError);

  const auto path = std::filesystem::temp_directory_path() / "dlvp_table_test.txt";
  {
    std::ofstream f(path);
    f << "# geometric-like data\nq=0.5\n0.5\n0.25\n0.125\n0.0625\n";
  }
  const auto tab = parse_sequence_spec("table:@" + path.string());
  CHECK(tab.family() == PsiFamily::UserTable);
  CHECK(tab.length() == 4);
  CHECK(tab(4) == 0.0625);
  CHECK(epsilon_tail(tab, 1).value == 0.0);
  std::filesystem::remove(path);
}
