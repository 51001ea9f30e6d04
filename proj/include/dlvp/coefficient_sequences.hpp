#pragma once

// Coefficient families psi(k) with psi(k+1)/psi(k) -> q, and the tail
// quantity eps_m = sup_{k >= m} |psi(k+1)/psi(k) - q| that scales every
// remainder term downstream.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dlvp {

enum class PsiFamily { Geometric, Neumann, Polyharmonic, UserTable };

std::string_view to_string(PsiFamily family);

/// Immutable coefficient sequence. Copies are cheap (tables are shared).
class PsiSequence {
 public:
  static PsiSequence geometric(double q);
  static PsiSequence neumann(double q);
  /// psi_m(k) = q^k (1 + sum_{j=1}^{m-1} (1-q^2)^j / (j! 2^j) prod_{l<j} (k+2l)).
  static PsiSequence polyharmonic(double q, int m);
  /// values[k-1] = psi(k); q is the declared limit ratio.
  static PsiSequence table(std::vector<double> values, double q);

  PsiFamily family() const noexcept { return family_; }
  double q() const noexcept { return q_; }
  int m() const noexcept { return m_; }
  std::span<const double> values() const;
  /// Largest valid index for tables, nullopt for infinite families.
  std::optional<std::int64_t> length() const;

  /// psi(k); throws DomainError for k < 1 or beyond a table.
  double operator()(std::int64_t k) const;
  /// log psi(k), representable long after psi(k) underflows.
  double log_value(std::int64_t k) const;
  /// psi(k+1)/psi(k) evaluated without forming either factor.
  double ratio(std::int64_t k) const;
  /// Upper bound for eps_k valid for every k >= 1 (nullopt for tables).
  std::optional<double> certified_epsilon(std::int64_t k) const;

  /// Round-trips through parse_sequence_spec (tables render as inline data).
  std::string describe() const;

 private:
  PsiSequence(PsiFamily family, double q, int m, std::shared_ptr<const std::vector<double>> table)
      : family_(family), q_(q), m_(m), table_(std::move(table)) {}

  double polyharmonic_factor(std::int64_t k) const;
  void check_index(std::int64_t k) const;

  PsiFamily family_;
  double q_;
  int m_;
  std::shared_ptr<const std::vector<double>> table_;
};

struct EpsilonTail {
  std::int64_t m = 1;
  /// sup over k >= m of |psi(k+1)/psi(k) - q| (closed form where known,
  /// otherwise the scanned supremum).
  double value = 0.0;
  /// Largest gap seen by the ratio scan on [m, horizon].
  double observed = 0.0;
  std::int64_t horizon = 1;
  /// Published upper bound (polyharmonic, m >= 2 family).
  std::optional<double> certified_bound;
};

double psi_eval(const PsiSequence& seq, std::int64_t k);

/// Default horizon is 10*m.
EpsilonTail epsilon_tail(const PsiSequence& seq, std::int64_t m,
                         std::optional<std::int64_t> horizon = std::nullopt);

/// |prod_{l<k} psi(m+l+1)/psi(m+l) - q^k|, bounded by (q+eps_m)^k - q^k.
double product_ratio_gap(const PsiSequence& seq, std::int64_t m, std::int64_t k);

/// Parses `geometric:q=0.5`, `neumann:q=0.5`, `polyharmonic:q=0.5,m=3`,
/// `table:@path`. Table files carry a `q=<value>` header and one value per line.
PsiSequence parse_sequence_spec(std::string_view spec);
PsiSequence load_sequence_table(const std::filesystem::path& path);

}  // namespace dlvp
