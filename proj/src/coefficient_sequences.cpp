#include "dlvp/coefficient_sequences.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "dlvp/errors.hpp"
#include "spec_parsing.hpp"

namespace dlvp {

namespace {

void check_q(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError(fmt::format("q must lie in (0,1), got {}", q));
  }
}

}  // namespace

std::string_view to_string(PsiFamily family) {
  switch (family) {
    case PsiFamily::Geometric: return "geometric";
    case PsiFamily::Neumann: return "neumann";
    case PsiFamily::Polyharmonic: return "polyharmonic";
    case PsiFamily::UserTable: return "table";
  }
  return "unknown";
}

PsiSequence PsiSequence::geometric(double q) {
  check_q(q);
  return PsiSequence(PsiFamily::Geometric, q, 1, nullptr);
}

PsiSequence PsiSequence::neumann(double q) {
  check_q(q);
  return PsiSequence(PsiFamily::Neumann, q, 1, nullptr);
}

PsiSequence PsiSequence::polyharmonic(double q, int m) {
  check_q(q);
  if (m < 1) throw DomainError(fmt::format("polyharmonic order m must be >= 1, got {}", m));
  return PsiSequence(PsiFamily::Polyharmonic, q, m, nullptr);
}

PsiSequence PsiSequence::table(std::vector<double> values, double q) {
  check_q(q);
  if (values.empty()) throw DomainError("coefficient table is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw DomainError(fmt::format("table entry psi({}) = {} is not a positive real", i + 1, values[i]));
    }
  }
  return PsiSequence(PsiFamily::UserTable, q, 1,
                     std::make_shared<const std::vector<double>>(std::move(values)));
}

std::span<const double> PsiSequence::values() const {
  if (!table_) return {};
  return {table_->data(), table_->size()};
}

std::optional<std::int64_t> PsiSequence::length() const {
  if (!table_) return std::nullopt;
  return static_cast<std::int64_t>(table_->size());
}

void PsiSequence::check_index(std::int64_t k) const {
  if (k < 1) throw DomainError(fmt::format("psi index must be >= 1, got {}", k));
  if (table_ && k > static_cast<std::int64_t>(table_->size())) {
    throw DomainError(fmt::format("psi index {} is beyond the table length {}", k, table_->size()));
  }
}

// 1 + sum_{j=1}^{m-1} (1-q^2)^j/(j! 2^j) prod_{l=0}^{j-1} (k+2l)
double PsiSequence::polyharmonic_factor(std::int64_t k) const {
  const double a = 1.0 - q_ * q_;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < m_; ++j) {
    term *= a / (2.0 * j) * static_cast<double>(k + 2 * (j - 1));
    sum += term;
  }
  return sum;
}

double PsiSequence::operator()(std::int64_t k) const {
  check_index(k);
  switch (family_) {
    case PsiFamily::Geometric: return std::pow(q_, static_cast<double>(k));
    case PsiFamily::Neumann: return std::pow(q_, static_cast<double>(k)) / static_cast<double>(k);
    case PsiFamily::Polyharmonic:
      return std::pow(q_, static_cast<double>(k)) * polyharmonic_factor(k);
    case PsiFamily::UserTable: return (*table_)[static_cast<std::size_t>(k - 1)];
  }
  return 0.0;
}

double PsiSequence::log_value(std::int64_t k) const {
  check_index(k);
  const double kd = static_cast<double>(k);
  switch (family_) {
    case PsiFamily::Geometric: return kd * std::log(q_);
    case PsiFamily::Neumann: return kd * std::log(q_) - std::log(kd);
    case PsiFamily::Polyharmonic: return kd * std::log(q_) + std::log(polyharmonic_factor(k));
    case PsiFamily::UserTable: return std::log((*table_)[static_cast<std::size_t>(k - 1)]);
  }
  return 0.0;
}

double PsiSequence::ratio(std::int64_t k) const {
  check_index(k);
  switch (family_) {
    case PsiFamily::Geometric: return q_;
    case PsiFamily::Neumann: {
      const double kd = static_cast<double>(k);
      return q_ * kd / (kd + 1.0);
    }
    case PsiFamily::Polyharmonic: return q_ * polyharmonic_factor(k + 1) / polyharmonic_factor(k);
    case PsiFamily::UserTable:
      check_index(k + 1);
      return (*table_)[static_cast<std::size_t>(k)] / (*table_)[static_cast<std::size_t>(k - 1)];
  }
  return 0.0;
}

std::optional<double> PsiSequence::certified_epsilon(std::int64_t k) const {
  if (k < 1) throw DomainError(fmt::format("epsilon index must be >= 1, got {}", k));
  const double kd = static_cast<double>(k);
  switch (family_) {
    case PsiFamily::Geometric: return 0.0;
    case PsiFamily::Neumann: return q_ / (kd + 1.0);
    case PsiFamily::Polyharmonic:
      if (m_ == 1) return 0.0;
      return (2.0 * m_ - 3.0) * q_ / kd;
    case PsiFamily::UserTable: return std::nullopt;
  }
  return std::nullopt;
}

std::string PsiSequence::describe() const {
  switch (family_) {
    case PsiFamily::Geometric: return fmt::format("geometric:q={}", q_);
    case PsiFamily::Neumann: return fmt::format("neumann:q={}", q_);
    case PsiFamily::Polyharmonic: return fmt::format("polyharmonic:q={},m={}", q_, m_);
    case PsiFamily::UserTable: return fmt::format("table:q={},length={}", q_, table_->size());
  }
  return {};
}

double psi_eval(const PsiSequence& seq, std::int64_t k) { return seq(k); }

EpsilonTail epsilon_tail(const PsiSequence& seq, std::int64_t m, std::optional<std::int64_t> horizon) {
  if (m < 1) throw DomainError(fmt::format("epsilon start index must be >= 1, got {}", m));
  const std::int64_t h = horizon.value_or(10 * m);
  if (h < m) throw DomainError(fmt::format("scan horizon {} is below the start index {}", h, m));

  EpsilonTail tail;
  tail.m = m;
  tail.horizon = h;

  // Tables only define ratios up to length-1.
  std::int64_t last = h;
  if (auto len = seq.length()) {
    if (m > *len - 1) {
      throw DomainError(fmt::format("table of length {} has no ratio at index {}", *len, m));
    }
    last = std::min(h, *len - 1);
    tail.horizon = last;
  }
  const double q = seq.q();
  double observed = 0.0;
  for (std::int64_t k = m; k <= last; ++k) {
    observed = std::max(observed, std::abs(seq.ratio(k) - q));
  }
  tail.observed = observed;

  switch (seq.family()) {
    case PsiFamily::Geometric:
      tail.value = 0.0;
      break;
    case PsiFamily::Neumann:
      tail.value = q / (static_cast<double>(m) + 1.0);
      break;
    case PsiFamily::Polyharmonic:
      tail.value = observed;
      if (seq.m() >= 2) tail.certified_bound = seq.certified_epsilon(m);
      else tail.value = 0.0;
      break;
    case PsiFamily::UserTable:
      tail.value = observed;
      break;
  }
  return tail;
}

double product_ratio_gap(const PsiSequence& seq, std::int64_t m, std::int64_t k) {
  if (m < 1 || k < 1) throw DomainError(fmt::format("product_ratio_gap needs m, k >= 1 (m={}, k={})", m, k));
  double prod = 1.0;
  for (std::int64_t l = 0; l < k; ++l) prod *= seq.ratio(m + l);
  return std::abs(prod - std::pow(seq.q(), static_cast<double>(k)));
}

PsiSequence load_sequence_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open coefficient table '{}'", path.string()));
  std::optional<double> q;
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (!q) {
      auto kv = detail::split_key_value(trimmed);
      if (!kv || kv->first != "q") {
        throw UsageError(fmt::format("{}:{}: expected header 'q=<value>'", path.string(), lineno));
      }
      q = detail::parse_double(kv->second, "q");
      continue;
    }
    values.push_back(detail::parse_double(trimmed, fmt::format("{}:{}", path.string(), lineno)));
  }
  if (!q) throw UsageError(fmt::format("{}: missing 'q=<value>' header", path.string()));
  return PsiSequence::table(std::move(values), *q);
}

PsiSequence parse_sequence_spec(std::string_view spec) {
  auto [family, params] = detail::split_spec(spec);
  if (family == "table") {
    if (params.empty() || params.front() != '@') {
      throw UsageError(fmt::format("table sequence needs '@path', got '{}'", spec));
    }
    return load_sequence_table(std::filesystem::path(std::string(params.substr(1))));
  }
  auto kv = detail::parse_params(params);
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  auto q_str = take("q");
  if (!q_str) throw UsageError(fmt::format("sequence spec '{}' is missing q=", spec));
  const double q = detail::parse_double(*q_str, "q");
  std::optional<PsiSequence> out;
  if (family == "geometric" || family == "poisson") {
    out = PsiSequence::geometric(q);
  } else if (family == "neumann") {
    out = PsiSequence::neumann(q);
  } else if (family == "polyharmonic") {
    auto m_str = take("m");
    if (!m_str) throw UsageError(fmt::format("polyharmonic spec '{}' is missing m=", spec));
    out = PsiSequence::polyharmonic(q, detail::parse_int(*m_str, "m"));
  } else {
    throw UsageError(fmt::format("unknown sequence family '{}'", family));
  }
  if (!kv.empty()) {
    throw UsageError(fmt::format("unexpected parameter '{}' in sequence spec '{}'", kv.begin()->first, spec));
  }
  return *out;
}

}  // namespace dlvp
