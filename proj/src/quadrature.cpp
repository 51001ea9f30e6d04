#include "dlvp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "dlvp/errors.hpp"

namespace dlvp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Level {
  double value = 0.0;   // integral of |g|^s, or max |g|
  double error = 0.0;   // sum of piece error estimates
  std::size_t evaluations = 0;
};

std::vector<double> sample(const RealFunction& g, std::size_t m) {
  std::vector<double> y(m);
  const double h = kTwoPi / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) y[j] = g(h * static_cast<double>(j));
  return y;
}

double refine_root(const RealFunction& g, double a, double b, double ga, double gb, std::size_t& evals) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 100;
  auto f = [&](double t) {
    ++evals;
    return g(t);
  };
  auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, ga, gb, tol, iters);
  return 0.5 * (lo + hi);
}

std::vector<double> roots_from_samples(const RealFunction& g, const std::vector<double>& y, std::size_t& evals) {
  const std::size_t m = y.size();
  const double h = kTwoPi / static_cast<double>(m);
  std::vector<double> roots;
  for (std::size_t j = 0; j < m; ++j) {
    const double a = h * static_cast<double>(j);
    const double ya = y[j];
    const double yb = y[(j + 1) % m];
    if (ya == 0.0) {
      roots.push_back(a);
    } else if ((ya < 0.0) != (yb < 0.0) && yb != 0.0) {
      roots.push_back(refine_root(g, a, a + h, ya, yb, evals));
    }
  }
  for (auto& r : roots) {
    if (r >= kTwoPi) r -= kTwoPi;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Level lp_level(const RealFunction& g, double s, std::size_t m, double tol) {
  Level level;
  auto y = sample(g, m);
  level.evaluations = m;
  auto roots = roots_from_samples(g, y, level.evaluations);

  auto power = [s](double v) { return s == 1.0 ? std::abs(v) : std::pow(std::abs(v), s); };

  if (roots.empty()) {
    // Periodic trapezoid; the half-grid sum gives a conservative error.
    const double h = kTwoPi / static_cast<double>(m);
    double full = 0.0;
    double half = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double v = power(y[j]);
      full += v;
      if (j % 2 == 0) half += v;
    }
    level.value = h * full;
    level.error = std::abs(level.value - 2.0 * h * half);
    return level;
  }

  auto integrand = [&](double t) {
    ++level.evaluations;
    return power(g(t));
  };
  // |g|^s behaves like |t - r|^s at each zero r, which stalls Gauss-Kronrod
  // for non-integer s, so there the chunks touching a zero go to tanh-sinh. Long
  // pieces are cut into chunks of a few grid cells because either rule
  // stalls on a piece spanning many oscillations.
  thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const bool smooth_pieces = s == std::floor(s);
  const double chunk = 8.0 * kTwoPi / static_cast<double>(m);
  const std::size_t count = roots.size();
  double total = 0.0;
  double err_total = 0.0;
  double scale = 0.0;
  for (double v : y) scale += power(v);
  scale *= kTwoPi / static_cast<double>(m);
  std::vector<double> cuts;
  for (std::size_t i = 0; i < count; ++i) {
    const double a = roots[i];
    const double b = i + 1 < count ? roots[i + 1] : roots[0] + kTwoPi;
    if (b <= a) continue;
    cuts.assign(1, a);
    for (double x = (std::floor(a / chunk) + 1.0) * chunk; x < b - 1e-3 * chunk; x += chunk) {
      if (x - cuts.back() > 1e-3 * chunk) cuts.push_back(x);
    }
    cuts.push_back(b);
    const std::size_t last = cuts.size() - 2;
    for (std::size_t c = 0; c <= last; ++c) {
      const double lo = cuts[c];
      const double hi = cuts[c + 1];
      // Absolute target shared out by length (the integral may carry s times
      // the norm tolerance); a relative target per chunk would chase
      // evaluation noise in chunks where |g|^s is tiny.
      const double target = 0.1 * s * tol * scale * (hi - lo) / kTwoPi;
      double err = 0.0;
      double l1 = 0.0;
      double piece = GK::integrate(integrand, lo, hi, 0, 0.0, &err, &l1);
      if (err > target) {
        const double rel = std::max(target / l1, 1e-13);
        if (!smooth_pieces && (c == 0 || c == last)) {
          std::size_t levels = 0;
          piece = ts.integrate(integrand, lo, hi, rel, &err, &l1, &levels);
        } else {
          piece = GK::integrate(integrand, lo, hi, 5, rel, &err, &l1);
        }
      }
      total += piece;
      err_total += err;
    }
  }
  level.value = total;
  level.error = err_total;
  return level;
}

Level sup_level(const RealFunction& g, std::size_t m) {
  Level level;
  auto ext = periodic_extrema(g, m);
  level.value = std::max(std::abs(ext.max), std::abs(ext.min));
  level.evaluations = 2 * m;
  return level;
}

}  // namespace

std::vector<double> periodic_sign_changes(const RealFunction& g, std::size_t grid, std::vector<double>* samples) {
  if (grid < 4) throw DomainError(fmt::format("grid must have at least 4 points, got {}", grid));
  auto y = sample(g, grid);
  std::size_t evals = 0;
  auto roots = roots_from_samples(g, y, evals);
  if (samples) *samples = std::move(y);
  return roots;
}

PeriodicExtrema periodic_extrema(const RealFunction& g, std::size_t grid) {
  if (grid < 4) throw DomainError(fmt::format("grid must have at least 4 points, got {}", grid));
  auto y = sample(g, grid);
  const double h = kTwoPi / static_cast<double>(grid);
  const std::size_t m = grid;

  // Local extrema of the samples, best first.
  auto polish = [&](bool maximise) {
    std::vector<std::size_t> cand;
    for (std::size_t j = 0; j < m; ++j) {
      const double prev = y[(j + m - 1) % m];
      const double next = y[(j + 1) % m];
      const bool is_ext = maximise ? (y[j] >= prev && y[j] >= next) : (y[j] <= prev && y[j] <= next);
      if (is_ext) cand.push_back(j);
    }
    if (cand.empty()) cand.push_back(0);
    const std::size_t keep = std::min<std::size_t>(cand.size(), 8);
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(),
                      [&](std::size_t a, std::size_t b) {
                        return maximise ? y[a] > y[b] : y[a] < y[b];
                      });
    double best_val = y[cand[0]];
    double best_arg = h * static_cast<double>(cand[0]);
    for (std::size_t c = 0; c < keep; ++c) {
      const double center = h * static_cast<double>(cand[c]);
      auto obj = [&](double t) { return maximise ? -g(t) : g(t); };
      auto [arg, val] = boost::math::tools::brent_find_minima(obj, center - h, center + h, 52);
      const double v = maximise ? -val : val;
      if (maximise ? v > best_val : v < best_val) {
        best_val = v;
        best_arg = arg;
      }
    }
    best_arg = std::fmod(best_arg, kTwoPi);
    if (best_arg < 0.0) best_arg += kTwoPi;
    return std::make_pair(best_val, best_arg);
  };
  PeriodicExtrema out;
  std::tie(out.max, out.argmax) = polish(true);
  std::tie(out.min, out.argmin) = polish(false);
  return out;
}

QuadratureResult lp_norm_periodic(const RealFunction& g, double s, const PeriodicQuadratureOptions& opts) {
  if (!(s >= 1.0)) throw DomainError(fmt::format("norm exponent must lie in [1, inf], got {}", s));
  if (!(opts.tol > 0.0)) throw DomainError(fmt::format("tolerance must be positive, got {}", opts.tol));
  if (opts.grid < 4) throw DomainError(fmt::format("grid must have at least 4 points, got {}", opts.grid));

  const bool sup = std::isinf(s);
  auto level_at = [&](std::size_t m) { return sup ? sup_level(g, m) : lp_level(g, s, m, opts.tol); };
  auto to_norm = [&](double v) { return sup || s == 1.0 ? v : std::pow(v, 1.0 / s); };

  std::size_t m = opts.grid;
  Level prev = level_at(m);
  std::size_t evals = prev.evaluations;
  for (int r = 0; r < opts.max_refinements; ++r) {
    m *= 2;
    Level cur = level_at(m);
    evals += cur.evaluations;
    const double diff = std::abs(cur.value - prev.value);
    const double rel_err = cur.value > 0.0 ? (diff + cur.error) / cur.value : 0.0;
    // |g|^s integral error translates to (1/s) relative error on the norm.
    const double norm_rel = sup ? rel_err : rel_err / s;
    if (norm_rel <= opts.tol || (cur.value == 0.0 && prev.value == 0.0)) {
      const double norm = to_norm(cur.value);
      return {norm, norm * norm_rel, evals};
    }
    prev = cur;
  }
  const double norm = to_norm(prev.value);
  throw AccuracyError(fmt::format("L_{} norm did not stabilise within {} refinements", s, opts.max_refinements),
                      norm, norm * (prev.value > 0.0 ? prev.error / prev.value : 0.0));
}

QuadratureResult integrate(const RealFunction& g, double a, double b, double tol) {
  if (!(a < b)) throw DomainError(fmt::format("integration needs a < b, got [{}, {}]", a, b));
  if (!(tol > 0.0)) throw DomainError(fmt::format("tolerance must be positive, got {}", tol));
  std::size_t evals = 0;
  auto f = [&](double t) {
    ++evals;
    return g(t);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  double l1 = 0.0;
  GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  if (l1 == 0.0) return {0.0, 0.0, evals};
  // Boost terminates on a relative criterion; convert the absolute target.
  const double rel = std::max(tol / l1, 4.0 * std::numeric_limits<double>::epsilon());
  double value = GK::integrate(f, a, b, 25, rel, &err, &l1);
  if (!(err <= tol)) {
    // Endpoint singularities such as omega(t) = t^alpha near 0 defeat the
    // bisection; tanh-sinh clusters nodes at the ends.
    thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    double ts_err = 0.0;
    double ts_l1 = 0.0;
    std::size_t levels = 0;
    const double ts_value = ts.integrate(f, a, b, rel, &ts_err, &ts_l1, &levels);
    if (ts_err < err) {
      value = ts_value;
      err = ts_err;
    }
  }
  if (!(err <= tol)) {
    throw AccuracyError(fmt::format("integral on [{}, {}] reached error {} > {}", a, b, err, tol), value, err);
  }
  return {value, err, evals};
}

double omega_sine_integral(const ModulusOfContinuity& omega, std::int64_t N, double tol) {
  if (N < 1) throw DomainError(fmt::format("omega_sine_integral needs N >= 1, got {}", N));
  const double scale = 2.0 / static_cast<double>(N);
  return integrate([&](double t) { return omega(scale * t) * std::sin(t); }, 0.0, 0.5 * std::numbers::pi, tol)
      .value;
}

double lp_norm_cos(double s) {
  if (!(s >= 1.0)) throw DomainError(fmt::format("norm exponent must lie in [1, inf], got {}", s));
  if (std::isinf(s)) return 1.0;
  if (s == 1.0) return 4.0;
  if (s == 2.0) return std::sqrt(std::numbers::pi);
  const double log_pow = std::log(2.0) + 0.5 * std::log(std::numbers::pi) + std::lgamma(0.5 * (s + 1.0)) -
                         std::lgamma(0.5 * s + 1.0);
  return std::exp(log_pow / s);
}

}  // namespace dlvp
