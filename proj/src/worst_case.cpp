#include "dlvp/worst_case.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "dlvp/errors.hpp"
#include "dlvp/kernels.hpp"
#include "dlvp/quadrature.hpp"
#include "dlvp/transport.hpp"

namespace dlvp {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t default_dual_grid(std::int64_t n) {
  return std::max<std::size_t>(8192, 16 * static_cast<std::size_t>(n));
}

std::size_t default_lp_grid(std::int64_t first) {
  return std::max<std::size_t>(512, 32 * static_cast<std::size_t>(first));
}

WorstCaseResult base_result(const PsiSequence& seq, const TailKernelSpec& spec, double s, WorstCaseMethod method) {
  WorstCaseResult r;
  r.method = method;
  r.config = VPConfig{spec.n, spec.p, spec.beta, s};
  r.sequence = seq.describe();
  r.scale = seq(spec.first_harmonic());
  return r;
}

// (1/pi) min_c ||K - c||_{s'}: the exact supremum over zero-mean unit-ball
// derivatives, since the dual of a quotient by constants is the annihilator.
double quotient_norm(const RealFunction& g, double sp, const PeriodicQuadratureOptions& qopts) {
  if (sp == 2.0) return lp_norm_periodic(g, sp, qopts).value / kPi;
  const PeriodicExtrema ext = periodic_extrema(g, qopts.grid);
  if (std::isinf(sp)) return 0.5 * (ext.max - ext.min) / kPi;
  auto shifted_norm = [&](double c) {
    return lp_norm_periodic([&](double t) { return g(t) - c; }, sp, qopts).value;
  };
  // ||K - c|| is convex in c and minimised inside [min K, max K].
  std::uintmax_t iters = 80;
  const auto [arg, val] = boost::math::tools::brent_find_minima(shifted_norm, ext.min, ext.max, 40, iters);
  (void)arg;
  return std::min(val, shifted_norm(0.0)) / kPi;
}

struct LpSolve {
  double primal = 0.0;   // transport cost, upper value of the discrete LP
  double witness = 0.0;  // objective of the reconstructed feasible phi
};

LpSolve solve_lp(const TailKernelSpec& spec, const ModulusOfContinuity& omega, std::size_t N, std::size_t rotate,
                 double kernel_tol) {
  const double h = 2.0 * kPi / static_cast<double>(N);
  std::vector<double> w(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double t = h * static_cast<double>((j + rotate) % N);
    w[j] = (h / kPi) * vp_tail_kernel_normalized(spec, t, kernel_tol);
  }
  // The discrete kernel has mean zero only up to quadrature error; centring
  // enforces phi-orthogonality to constants exactly on the grid.
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(N);
  double peak = 0.0;
  for (double& v : w) {
    v -= mean;
    peak = std::max(peak, std::abs(v));
  }
  if (peak == 0.0) return {};

  std::vector<double> om(N);
  for (std::size_t d = 0; d < N; ++d) om[d] = omega(h * static_cast<double>(std::min(d, N - d)));
  auto dist = [N](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };

  const double cutoff = 1e-15 * peak;
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  std::vector<double> supply;
  std::vector<double> demand;
  for (std::size_t j = 0; j < N; ++j) {
    if (w[j] > cutoff) {
      pos.push_back(j);
      supply.push_back(w[j]);
    } else if (w[j] < -cutoff) {
      neg.push_back(j);
      demand.push_back(-w[j]);
    }
  }
  if (pos.empty() || neg.empty()) return {};

  std::vector<double> cost(pos.size() * neg.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = 0; j < neg.size(); ++j) cost[i * neg.size() + j] = om[dist(pos[i], neg[j])];
  }
  const TransportSolution sol = solve_transport(supply, demand, cost);

  // phi(x) = min_j (v_j + omega(d(x, t_j))) satisfies every pairwise
  // constraint and dominates the dual potentials, so its objective is a
  // certified lower value.
  LpSolve out;
  out.primal = sol.cost;
  double obj = 0.0;
  for (std::size_t x = 0; x < N; ++x) {
    double phi = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < neg.size(); ++j) phi = std::min(phi, sol.demand_potential[j] + om[dist(x, neg[j])]);
    obj += w[x] * phi;
  }
  out.witness = obj;
  return out;
}

}  // namespace

std::string_view to_string(WorstCaseMethod method) {
  switch (method) {
    case WorstCaseMethod::DualNorm: return "DualNorm";
    case WorstCaseMethod::LP: return "LP";
    case WorstCaseMethod::LowerBoundCandidate: return "LowerBoundCandidate";
  }
  return "unknown";
}

WorstCaseResult worstcase_Us(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta, double s,
                             const DualNormOptions& opts) {
  const TailKernelSpec spec{seq, n, p, beta};
  spec.validate();
  check_exponent(s);
  const double sp = conjugate_exponent(s);

  PeriodicQuadratureOptions qopts;
  qopts.grid = opts.grid ? opts.grid : default_dual_grid(n);
  qopts.tol = opts.tol;
  const double kernel_tol = 1e-3 * opts.tol;
  const RealFunction g = [&](double t) { return vp_tail_kernel_normalized(spec, t, kernel_tol); };

  WorstCaseResult r = base_result(seq, spec, s, WorstCaseMethod::DualNorm);
  const QuadratureResult norm = lp_norm_periodic(g, sp, qopts);
  r.normalized = norm.value / kPi;
  r.error_estimate = norm.abs_error_estimate / kPi;
  r.value = r.scale * r.normalized;
  if (opts.certify) r.normalized_lower = quotient_norm(g, sp, qopts);
  return r;
}

WorstCaseResult candidate_Us(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta, double s) {
  const TailKernelSpec spec{seq, n, p, beta};
  spec.validate();
  check_exponent(s);
  WorstCaseResult r = base_result(seq, spec, s, WorstCaseMethod::LowerBoundCandidate);
  r.normalized = 1.0 / (static_cast<double>(p) * lp_norm_cos(s));
  r.normalized_lower = r.normalized;
  r.value = r.scale * r.normalized;
  return r;
}

WorstCaseResult worstcase_Homega_lp(const PsiSequence& seq, std::int64_t n, std::int64_t p, double beta,
                                    const ModulusOfContinuity& omega, const LpOptions& opts) {
  const TailKernelSpec spec{seq, n, p, beta};
  spec.validate();
  const std::size_t N = opts.grid ? opts.grid : default_lp_grid(spec.first_harmonic());
  if (N < 64) throw DomainError(fmt::format("LP grid must have at least 64 points, got {}", N));

  WorstCaseResult r = base_result(seq, spec, std::numeric_limits<double>::quiet_NaN(), WorstCaseMethod::LP);
  r.omega = omega.describe();
  r.lp_grid = N;

  const LpSolve fine = solve_lp(spec, omega, N, opts.rotate % N, opts.kernel_tol);
  r.normalized = fine.primal;
  r.normalized_lower = fine.witness;
  r.error_estimate = std::abs(fine.primal - fine.witness);
  if (opts.self_refine) {
    const LpSolve coarse = solve_lp(spec, omega, N / 2, (opts.rotate / 2) % (N / 2), opts.kernel_tol);
    r.error_estimate += std::abs(fine.primal - coarse.primal);
  }
  r.value = r.scale * r.normalized;
  return r;
}

BoundsReport normalized_bounds_check(double q, std::int64_t n, std::int64_t p, double beta, double s,
                                     const DualNormOptions& opts) {
  const WorstCaseResult r = worstcase_Us(PsiSequence::geometric(q), n, p, beta, s, opts);
  const double sp = conjugate_exponent(s);
  BoundsReport b;
  b.class_label = fmt::format("U_s, s={}", s);
  b.normalized = static_cast<double>(p) * r.normalized;
  b.candidate_lower = 1.0 / lp_norm_cos(s);
  b.upper = std::pow(2.0 * kPi, std::isinf(sp) ? 0.0 : 1.0 / sp) / (kPi * (1.0 - q) * (1.0 - q));
  b.fitted_c1 = b.normalized;
  b.fitted_c2 = b.normalized * (1.0 - q) * (1.0 - q);
  const double slack = 1e-8;
  b.within = b.candidate_lower <= b.normalized * (1.0 + slack) && b.normalized <= b.upper * (1.0 + slack);
  return b;
}

BoundsReport normalized_bounds_check(double q, std::int64_t n, std::int64_t p, double beta,
                                     const ModulusOfContinuity& omega, const LpOptions& opts) {
  const PsiSequence seq = PsiSequence::geometric(q);
  const WorstCaseResult r = worstcase_Homega_lp(seq, n, p, beta, omega, opts);
  const TailKernelSpec spec{seq, n, p, beta};
  const double first = static_cast<double>(spec.first_harmonic());

  BoundsReport b;
  b.class_label = fmt::format("H_omega, omega={}", omega.describe());
  b.normalized = static_cast<double>(p) * r.normalized;
  b.candidate_lower = 0.5 * omega(2.0 / first);
  // phi may be shifted by phi(0) for free, and |phi(t) - phi(0)| <= omega(|t|).
  // Over [0, 2pi] with the circular distance; split at the kinks of |K| and
  // at pi so each piece is smooth apart from the omega cusp at 0.
  auto K = [&](double t) { return vp_tail_kernel_normalized(spec, t); };
  std::vector<double> cuts = periodic_sign_changes(K, std::max<std::size_t>(1024, 16 * spec.first_harmonic()));
  cuts.push_back(0.0);
  cuts.push_back(kPi);
  cuts.push_back(2.0 * kPi);
  std::sort(cuts.begin(), cuts.end());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0.0) continue;
    integral += integrate([&](double t) { return omega(std::min(t, 2.0 * kPi - t)) * std::abs(K(t)); }, cuts[i],
                          cuts[i + 1], 1e-12)
                    .value;
  }
  b.upper = static_cast<double>(p) * integral / kPi;
  const double ref = omega(1.0 / first);
  b.fitted_c1 = ref > 0.0 ? b.normalized / ref : 0.0;
  b.fitted_c2 = ref > 0.0 ? b.normalized * (1.0 - q) * (1.0 - q) / ref : 0.0;
  const double slack = 1e-6 + static_cast<double>(p) * r.error_estimate / std::max(b.normalized, 1e-300);
  b.within = b.candidate_lower <= b.normalized * (1.0 + slack) && b.normalized <= b.upper * (1.0 + slack);
  return b;
}

}  // namespace dlvp
