#pragma once

// Parameter sweeps, the verification batch, and serialisation of results.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlvp/asymptotics.hpp"
#include "dlvp/worst_case.hpp"

namespace dlvp {

nlohmann::ordered_json to_json(const WorstCaseResult& r);
nlohmann::ordered_json to_json(const AsymptoticReport& r);

/// %.17g, with inf/nan spelled out.
std::string format_real(double v);

struct SweepSpec {
  /// Family name: geometric, neumann or polyharmonic.
  std::string family = "geometric";
  /// Polyharmonic order.
  int m = 1;
  std::vector<double> qs;
  std::vector<std::int64_t> ps;
  /// Either the values of n-p+1 ...
  std::vector<std::int64_t> firsts;
  /// ... or of n directly (then instances with p > n are skipped).
  std::vector<std::int64_t> ns;
  std::vector<double> betas{0.0};
  ProblemClass cls = std::numeric_limits<double>::infinity();
  AsymptoticOptions options;
  unsigned jobs = 1;

  /// Throws UsageError for empty ranges or an unknown family.
  void validate() const;
};

struct SweepRow {
  std::string family;
  double q = 0.0;
  int m = 1;
  std::int64_t n = 0;
  std::int64_t p = 0;
  std::int64_t first = 0;
  double beta = 0.0;
  std::string class_label;
  /// "ok", "skipped: ..." or "error: ...".
  std::string status;
  std::optional<AsymptoticReport> report;
};

/// Rows in parameter order q, p, beta, n-p+1 (or n), independent of --jobs.
std::vector<SweepRow> run_convergence(const SweepSpec& sweep);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows);
/// Ratio exact/main against n-p+1 on a log axis, one polyline per (q, p, beta) series.
void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows);

struct VerifyOptions {
  /// Check names to run; empty runs all of elliptic, sigma, neumann, vp.
  std::set<std::string> only;
  /// Relative perturbation applied to K_{q,p}(1) inside the elliptic check.
  double perturb_kqp = 0.0;
};

struct VerifyLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyLine> lines;
  bool all_passed() const;
};

VerifyReport run_verify(const VerifyOptions& opts = {});

}  // namespace dlvp
