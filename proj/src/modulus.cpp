#include "dlvp/modulus.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "dlvp/errors.hpp"
#include "spec_parsing.hpp"

namespace dlvp {

namespace {

void check_scale(double scale) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw DomainError(fmt::format("modulus scale must be a nonnegative real, got {}", scale));
  }
}

}  // namespace

ModulusOfContinuity ModulusOfContinuity::power(double alpha, double scale) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError(fmt::format("alpha must lie in (0,1], got {}", alpha));
  check_scale(scale);
  ModulusOfContinuity w;
  w.family_ = alpha == 1.0 ? ModulusFamily::Linear : ModulusFamily::PowerAlpha;
  w.parameter_ = alpha;
  w.scale_ = scale;
  return w;
}

ModulusOfContinuity ModulusOfContinuity::log_power(double beta, double scale) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError(fmt::format("beta must lie in (0,1), got {}", beta));
  check_scale(scale);
  ModulusOfContinuity w;
  w.family_ = ModulusFamily::LogBeta;
  w.parameter_ = beta;
  w.scale_ = scale;
  return w;
}

ModulusOfContinuity ModulusOfContinuity::linear(double scale) { return power(1.0, scale); }

ModulusOfContinuity ModulusOfContinuity::zero() { return linear(0.0); }

ModulusOfContinuity ModulusOfContinuity::user(std::function<double(double)> fn, bool convex, std::string label) {
  if (!fn) throw DomainError("user modulus needs a callable");
  ModulusOfContinuity w;
  w.family_ = ModulusFamily::UserFn;
  w.convex_ = convex;
  w.user_ = std::move(fn);
  w.label_ = std::move(label);
  return w;
}

double ModulusOfContinuity::operator()(double t) const {
  if (t < 0.0) throw DomainError(fmt::format("modulus argument must be >= 0, got {}", t));
  if (t == 0.0 || scale_ == 0.0) return 0.0;
  switch (family_) {
    case ModulusFamily::PowerAlpha: return scale_ * std::pow(t, parameter_);
    case ModulusFamily::LogBeta: return scale_ * std::pow(std::log1p(t), parameter_);
    case ModulusFamily::Linear: return scale_ * t;
    case ModulusFamily::UserFn: return scale_ * user_(t);
  }
  return 0.0;
}

ModulusOfContinuity ModulusOfContinuity::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError(fmt::format("scaling factor must be positive, got {}", c));
  ModulusOfContinuity w = *this;
  w.scale_ *= c;
  return w;
}

std::string ModulusOfContinuity::describe() const {
  std::string base;
  switch (family_) {
    case ModulusFamily::PowerAlpha: base = fmt::format("power:alpha={}", parameter_); break;
    case ModulusFamily::LogBeta: base = fmt::format("log:beta={}", parameter_); break;
    case ModulusFamily::Linear: base = scale_ == 0.0 ? "zero" : "linear"; break;
    case ModulusFamily::UserFn: base = fmt::format("user:{}", label_); break;
  }
  if (scale_ == 1.0 || scale_ == 0.0) return base;
  return fmt::format("{}{}scale={}", base, base.find(':') == std::string::npos ? ":" : ",", scale_);
}

ModulusDiagnostics diagnose(const ModulusOfContinuity& omega) {
  ModulusDiagnostics d;
  d.zero_at_origin = omega(0.0) == 0.0;

  std::vector<double> grid;
  for (int j = 0; j <= 256; ++j) grid.push_back(2.0 * std::numbers::pi * j / 256.0);
  const double slack = 1e-12 * (1.0 + omega(2.0 * std::numbers::pi));

  d.nondecreasing = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (omega(grid[i]) + slack < omega(grid[i - 1])) d.nondecreasing = false;
  }
  d.subadditive = true;
  d.midpoint_concave = true;
  for (std::size_t i = 0; i < grid.size(); i += 4) {
    for (std::size_t j = i; j < grid.size(); j += 4) {
      const double x = grid[i];
      const double y = grid[j];
      if (x + y <= grid.back() && omega(x + y) > omega(x) + omega(y) + slack) d.subadditive = false;
      if (omega(0.5 * (x + y)) + slack < 0.5 * (omega(x) + omega(y))) d.midpoint_concave = false;
    }
  }

  // omega(t)/t sampled at t = 2^-j: treat the ratio as divergent when it is
  // nondecreasing along the samples and grows by a visible factor overall.
  std::vector<double> ratios;
  for (int j = 1; j <= 40; ++j) {
    const double t = std::ldexp(1.0, -j);
    ratios.push_back(omega(t) / t);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    if (ratios[i] < ratios[i - 1] * (1.0 - 1e-12)) monotone = false;
  }
  d.ratio_diverges_at_zero = monotone && ratios.back() > ratios.front() * (1.0 + 1e-3);
  return d;
}

ModulusOfContinuity parse_modulus_spec(std::string_view spec) {
  auto [family, params] = detail::split_spec(spec);
  auto kv = detail::parse_params(params);
  double scale = 1.0;
  if (auto it = kv.find("scale"); it != kv.end()) {
    scale = detail::parse_double(it->second, "scale");
    kv.erase(it);
  }
  auto need = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw UsageError(fmt::format("modulus spec '{}' is missing {}=", spec, key));
    const double v = detail::parse_double(it->second, key);
    kv.erase(it);
    return v;
  };
  std::optional<ModulusOfContinuity> out;
  if (family == "power" || family == "holder") {
    out = ModulusOfContinuity::power(need("alpha"), scale);
  } else if (family == "log") {
    out = ModulusOfContinuity::log_power(need("beta"), scale);
  } else if (family == "linear") {
    out = ModulusOfContinuity::linear(scale);
  } else if (family == "zero") {
    out = ModulusOfContinuity::zero();
  } else {
    throw UsageError(fmt::format("unknown modulus family '{}'", family));
  }
  if (!kv.empty()) {
    throw UsageError(fmt::format("unexpected parameter '{}' in modulus spec '{}'", kv.begin()->first, spec));
  }
  return *out;
}

}  // namespace dlvp
