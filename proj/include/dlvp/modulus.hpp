#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace dlvp {

enum class ModulusFamily { PowerAlpha, LogBeta, Linear, UserFn };

/// A majorant omega(t) of modulus-of-continuity type, optionally scaled:
/// omega(t) = scale * base(t).
class ModulusOfContinuity {
 public:
  /// t^alpha, alpha in (0, 1].
  static ModulusOfContinuity power(double alpha, double scale = 1.0);
  /// ln^beta(t + 1), beta in (0, 1).
  static ModulusOfContinuity log_power(double beta, double scale = 1.0);
  static ModulusOfContinuity linear(double scale = 1.0);
  /// omega == 0; the degenerate majorant admitting only constants.
  static ModulusOfContinuity zero();
  static ModulusOfContinuity user(std::function<double(double)> fn, bool convex, std::string label = "user");

  ModulusFamily family() const noexcept { return family_; }
  double parameter() const noexcept { return parameter_; }
  double scale() const noexcept { return scale_; }
  /// Convex upwards (concave) majorant.
  bool convex() const noexcept { return convex_; }

  /// omega(t) for t >= 0; omega(0) = 0.
  double operator()(double t) const;

  /// Same majorant multiplied by c > 0.
  ModulusOfContinuity scaled(double c) const;

  std::string describe() const;

 private:
  ModulusOfContinuity() = default;

  ModulusFamily family_ = ModulusFamily::Linear;
  double parameter_ = 1.0;
  double scale_ = 1.0;
  bool convex_ = true;
  std::function<double(double)> user_;
  std::string label_;
};

/// Sampled checks of the modulus-of-continuity axioms.
struct ModulusDiagnostics {
  bool zero_at_origin = false;
  bool nondecreasing = false;
  bool subadditive = false;
  /// omega((x+y)/2) >= (omega(x)+omega(y))/2 on sampled pairs.
  bool midpoint_concave = false;
  /// omega(t)/t grows without bound as t -> 0, judged from t = 2^-j, j = 1..40.
  bool ratio_diverges_at_zero = false;
};

ModulusDiagnostics diagnose(const ModulusOfContinuity& omega);

/// Parses `power:alpha=0.5`, `log:beta=0.5`, `linear`, `zero`, each with an
/// optional `scale=c`.
ModulusOfContinuity parse_modulus_spec(std::string_view spec);

}  // namespace dlvp
