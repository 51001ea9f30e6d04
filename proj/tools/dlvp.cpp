// dlvp: worst-case deviations of de la Vallee Poussin sums from the command line.
//
// Exit codes: 0 success, 1 usage, 2 numeric accuracy failure, 3 verification failure.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dlvp/asymptotics.hpp"
#include "dlvp/errors.hpp"
#include "dlvp/kernels.hpp"
#include "dlvp/report.hpp"
#include "dlvp/worst_case.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitAccuracy = 2;
constexpr int kExitVerify = 3;

struct Common {
  std::string seq = "geometric:q=0.5";
  std::int64_t n = 0;
  std::int64_t p = 1;
  double beta = 0.0;
  std::optional<double> s;
  std::optional<std::string> omega;
  double tol = 1e-10;
  std::size_t grid = 0;
  std::size_t lp_grid = 0;
  std::string out;
  std::string format;
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw dlvp::UsageError(fmt::format("cannot open '{}' for writing", path));
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw dlvp::UsageError(fmt::format("cannot parse exponent '{}'", text));
  return v;
}

dlvp::ProblemClass problem_class(const Common& c) {
  if (c.s && c.omega) throw dlvp::UsageError("pass either --s or --omega, not both");
  if (c.omega) return dlvp::parse_modulus_spec(*c.omega);
  return c.s.value_or(INFINITY);
}

void add_instance(CLI::App* cmd, Common& c, std::string& s_text) {
  cmd->add_option("--seq", c.seq, "coefficient family, e.g. neumann:q=0.5")->capture_default_str();
  cmd->add_option("--n", c.n, "index n of V_{n,p}")->required();
  cmd->add_option("--p", c.p, "averaging length p <= n")->capture_default_str();
  cmd->add_option("--beta", c.beta, "phase parameter")->capture_default_str();
  cmd->add_option("--s", s_text, "class exponent in [1, inf]");
  cmd->add_option("--omega", c.omega, "modulus, e.g. power:alpha=0.5");
}

void add_numerics(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol", c.tol, "relative quadrature tolerance")->capture_default_str();
  cmd->add_option("--grid", c.grid, "quadrature grid (0 = automatic)");
  cmd->add_option("--lp-grid", c.lp_grid, "LP discretisation size (0 = automatic)");
  cmd->add_option("--out", c.out, "output path (default stdout)");
}

void finalize_s(Common& c, const std::string& s_text) {
  if (!s_text.empty()) c.s = parse_exponent(s_text);
}

dlvp::AsymptoticOptions numerics(const Common& c) {
  dlvp::AsymptoticOptions o;
  o.dual.tol = c.tol;
  o.dual.grid = c.grid;
  o.lp.grid = c.lp_grid;
  return o;
}

int run_kernel(const Common& c, bool residual, bool normalized, std::size_t points) {
  const dlvp::PsiSequence seq = dlvp::parse_sequence_spec(c.seq);
  if (points < 1) throw dlvp::UsageError("--grid must be positive");
  Sink sink(c.out);
  auto& os = sink.stream();
  os << "t,value\n";
  const double kernel_tol = 1e-3 * c.tol;
  for (std::size_t j = 0; j < points; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
    double v = 0.0;
    if (c.n == 0) {
      v = dlvp::kernel_eval({seq, c.beta}, t, kernel_tol);
    } else {
      const dlvp::TailKernelSpec spec{seq, c.n, c.p, c.beta};
      if (residual) {
        v = dlvp::residual_kernel(spec, t, kernel_tol);
      } else if (normalized) {
        v = dlvp::vp_tail_kernel_normalized(spec, t, kernel_tol);
      } else {
        v = dlvp::vp_tail_kernel(spec, t, kernel_tol);
      }
    }
    os << dlvp::format_real(t) << ',' << dlvp::format_real(v) << '\n';
  }
  return 0;
}

int run_worstcase(const Common& c, bool certify, bool candidate) {
  const dlvp::PsiSequence seq = dlvp::parse_sequence_spec(c.seq);
  const dlvp::ProblemClass cls = problem_class(c);
  dlvp::WorstCaseResult r;
  if (const auto* s = std::get_if<double>(&cls)) {
    dlvp::DualNormOptions o;
    o.tol = c.tol;
    o.grid = c.grid;
    o.certify = certify;
    r = candidate ? dlvp::candidate_Us(seq, c.n, c.p, c.beta, *s) : dlvp::worstcase_Us(seq, c.n, c.p, c.beta, *s, o);
  } else {
    dlvp::LpOptions o;
    o.grid = c.lp_grid;
    r = dlvp::worstcase_Homega_lp(seq, c.n, c.p, c.beta, std::get<dlvp::ModulusOfContinuity>(cls), o);
  }
  Sink sink(c.out);
  sink.stream() << dlvp::to_json(r).dump(2) << '\n';
  return 0;
}

int run_asymptotic(const Common& c, const std::string& theorem, bool no_exact, bool large_p) {
  const dlvp::PsiSequence seq = dlvp::parse_sequence_spec(c.seq);
  dlvp::AsymptoticOptions o = numerics(c);
  o.with_exact = !no_exact;
  o.large_p_form = large_p;
  const auto rep = dlvp::asymptotic_report(dlvp::parse_theorem(theorem), seq, c.n, c.p, c.beta, problem_class(c), o);
  Sink sink(c.out);
  sink.stream() << dlvp::to_json(rep).dump(2) << '\n';
  return 0;
}

struct SweepArgs {
  std::vector<double> qs;
  std::vector<std::int64_t> ps{1};
  std::vector<std::int64_t> firsts;
  std::vector<std::int64_t> ns;
  std::vector<double> betas{0.0};
  unsigned jobs = 1;
};

int run_convergence(const Common& c, const SweepArgs& a) {
  const dlvp::PsiSequence base = dlvp::parse_sequence_spec(c.seq);
  dlvp::SweepSpec sw;
  switch (base.family()) {
    case dlvp::PsiFamily::Geometric: sw.family = "geometric"; break;
    case dlvp::PsiFamily::Neumann: sw.family = "neumann"; break;
    case dlvp::PsiFamily::Polyharmonic: sw.family = "polyharmonic"; break;
    case dlvp::PsiFamily::UserTable: throw dlvp::UsageError("convergence sweeps need a parametric family");
  }
  sw.m = base.m();
  sw.qs = a.qs.empty() ? std::vector<double>{base.q()} : a.qs;
  sw.ps = a.ps;
  sw.firsts = a.firsts;
  sw.ns = a.ns;
  sw.betas = a.betas;
  sw.cls = problem_class(c);
  sw.options = numerics(c);
  sw.jobs = a.jobs;
  const auto rows = dlvp::run_convergence(sw);

  Sink sink(c.out);
  const std::string fmt_name = c.format.empty() ? "csv" : c.format;
  if (fmt_name == "csv") {
    dlvp::write_sweep_csv(sink.stream(), rows);
  } else if (fmt_name == "json") {
    sink.stream() << dlvp::sweep_json(rows).dump(2) << '\n';
  } else if (fmt_name == "svg") {
    dlvp::write_sweep_svg(sink.stream(), rows);
  } else {
    throw dlvp::UsageError(fmt::format("unknown --format '{}'", fmt_name));
  }
  return 0;
}

int run_verify_cmd(const std::vector<std::string>& only, double perturb, const std::string& out) {
  dlvp::VerifyOptions o;
  o.only.insert(only.begin(), only.end());
  o.perturb_kqp = perturb;
  const auto rep = dlvp::run_verify(o);
  Sink sink(out);
  for (const auto& line : rep.lines) {
    sink.stream() << fmt::format("[{}] {}: {}\n", line.passed ? "PASS" : "FAIL", line.name, line.detail);
  }
  return rep.all_passed() ? 0 : kExitVerify;
}

// A `--config FILE` after the subcommand name holds flat key=value lines for
// that subcommand. Keys already given on the command line are skipped, so
// flags win. A `--config` before the subcommand goes to CLI11 ([section] form).
std::vector<std::string> expand_flat_config(const std::vector<std::string>& args,
                                            const std::vector<std::pair<std::string, CLI::App*>>& subs) {
  std::size_t at = args.size();
  CLI::App* sub = nullptr;
  for (std::size_t i = 0; i < args.size() && !sub; ++i) {
    for (const auto& [name, app] : subs) {
      if (args[i] == name) {
        at = i;
        sub = app;
      }
    }
  }
  if (!sub) return args;

  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = at + 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw dlvp::UsageError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw dlvp::UsageError("cannot read config file " + path);
  auto given = [&](const std::string& flag) {
    for (const auto& a : rest) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  auto trim = [](std::string x) {
    const auto b = x.find_first_not_of(" \t\r");
    const auto e = x.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : x.substr(b, e - b + 1);
  };

  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(at) + 1);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw dlvp::UsageError(fmt::format("{}:{}: expected key=value", path, lineno));
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt) throw dlvp::UsageError(fmt::format("{}:{}: unknown key '{}'", path, lineno, key));
    if (given(flag)) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "on") out.push_back(flag);
      continue;
    }
    out.push_back(flag);
    out.push_back(value);
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case deviations of de la Vallee Poussin sums on (psi, beta)-differentiable classes"};
  app.set_config("--config", "", "[subcommand] sections; a flat key=value file goes after the subcommand");
  app.require_subcommand(1);

  Common c;
  std::string s_text;

  auto* kernel = app.add_subcommand("kernel", "kernel evaluation");
  auto* kernel_eval = kernel->add_subcommand("eval", "sample a kernel on a uniform grid, CSV t,value");
  kernel->require_subcommand(1);
  std::size_t kernel_points = 256;
  bool residual = false;
  bool normalized = false;
  kernel_eval->add_option("--seq", c.seq, "coefficient family")->capture_default_str();
  kernel_eval->add_option("--beta", c.beta, "phase parameter")->capture_default_str();
  kernel_eval->add_option("--n", c.n, "tail kernel of V_{n,p}; omit for the generating kernel");
  kernel_eval->add_option("--p", c.p, "averaging length")->capture_default_str();
  kernel_eval->add_option("--grid", kernel_points, "number of points on [0, 2 pi)")->capture_default_str();
  kernel_eval->add_option("--tol", c.tol, "absolute tolerance")->capture_default_str();
  kernel_eval->add_option("--out", c.out, "output path");
  kernel_eval->add_flag("--residual", residual, "residual kernel r_{n,p}");
  kernel_eval->add_flag("--normalized", normalized, "divide the tail kernel by psi(n-p+1)");

  auto* worstcase = app.add_subcommand("worstcase", "exact worst-case deviation, JSON");
  bool certify = false;
  bool candidate = false;
  add_instance(worstcase, c, s_text);
  add_numerics(worstcase, c);
  worstcase->add_flag("--certify", certify, "also compute the quotient-norm lower value");
  worstcase->add_flag("--candidate", candidate, "deviation of the extremal candidate instead");

  auto* asymptotic = app.add_subcommand("asymptotic", "main term, envelope and ratio, JSON");
  std::string theorem = "2";
  bool no_exact = false;
  bool large_p = false;
  add_instance(asymptotic, c, s_text);
  add_numerics(asymptotic, c);
  asymptotic->add_option("--theorem", theorem, "1, 2, 3, cor1 or cor2")->capture_default_str();
  asymptotic->add_flag("--no-exact", no_exact, "skip the exact worst case");
  asymptotic->add_flag("--large-p", large_p, "large-p form of the s = inf main term");

  auto* convergence = app.add_subcommand("convergence", "ratio sweep over n-p+1, CSV/JSON/SVG");
  SweepArgs sweep;
  convergence->add_option("--seq", c.seq, "family (its q is used unless --q is given)")->capture_default_str();
  convergence->add_option("--q", sweep.qs, "q values")->delimiter(',');
  convergence->add_option("--p", sweep.ps, "p values")->delimiter(',');
  convergence->add_option("--first", sweep.firsts, "n-p+1 values")->delimiter(',');
  convergence->add_option("--n", sweep.ns, "n values (instances with p > n are skipped)")->delimiter(',');
  convergence->add_option("--beta", sweep.betas, "beta values")->delimiter(',');
  convergence->add_option("--s", s_text, "class exponent in [1, inf]");
  convergence->add_option("--omega", c.omega, "modulus, e.g. power:alpha=0.5");
  convergence->add_option("--jobs", sweep.jobs, "concurrent instances")->capture_default_str();
  convergence->add_option("--format", c.format, "csv, json or svg");
  add_numerics(convergence, c);

  auto* verify = app.add_subcommand("verify", "identity and invariant checks");
  std::vector<std::string> only;
  double perturb = 0.0;
  std::string verify_out;
  verify->add_option("--only", only, "elliptic, sigma, neumann, vp")->delimiter(',');
  verify->add_option("--perturb-kqp", perturb, "test mode: relative perturbation of K_{q,p}(1)");
  verify->add_option("--out", verify_out, "output path");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_flat_config(args, {{"eval", kernel_eval},
                                     {"worstcase", worstcase},
                                     {"asymptotic", asymptotic},
                                     {"convergence", convergence},
                                     {"verify", verify}});
  } catch (const dlvp::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    finalize_s(c, s_text);
    if (kernel_eval->parsed()) return run_kernel(c, residual, normalized, kernel_points);
    if (worstcase->parsed()) return run_worstcase(c, certify, candidate);
    if (asymptotic->parsed()) return run_asymptotic(c, theorem, no_exact, large_p);
    if (convergence->parsed()) return run_convergence(c, sweep);
    if (verify->parsed()) return run_verify_cmd(only, perturb, verify_out);
  } catch (const dlvp::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const dlvp::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const dlvp::AccuracyError& e) {
    std::cerr << fmt::format("accuracy failure: {} (best estimate {}, error {})\n", e.what(), e.best_estimate(),
                             e.error_estimate());
    return kExitAccuracy;
  } catch (const dlvp::ConvergenceError& e) {
    std::cerr << "accuracy failure: " << e.what() << '\n';
    return kExitAccuracy;
  }
  return kExitUsage;
}
