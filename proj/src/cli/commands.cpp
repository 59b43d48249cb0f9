#include "yamabe/cli/commands.hpp"

#include "yamabe/linear_solvers.hpp"
#include "yamabe/special_functions.hpp"
#include "yamabe/test_functions.hpp"
#include "yamabe/variational_solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace yamabe::cli {

namespace {

struct Resolved {
  RadialManifold manifold;
  CoefficientField coeffs;
  DiscreteProblem problem;
  BoundaryExtension extension;
  double gamma;
  double q;
};

Resolved resolve(const RunConfig& cfg) {
  const RadialManifold m = cfg.manifold();
  const CoefficientField c = cfg.coefficients();
  DiscreteProblem p = assemble(m, c, RadialMesh::uniform(m.r_min(), m.r_max(), cfg.mesh_n));
  // Without coercivity there is no extension; check still reports, solve stops at the gate.
  BoundaryExtension ext{Vector::Zero(p.node_count()), "boundary extension skipped: operator is not coercive"};
  if (coercivity_check(p).coercive) ext = extend_boundary_data(p, cfg.boundary_values());
  const double gamma = cfg.gamma ? *cfg.gamma : default_gamma(p, ext.h);
  const double q = cfg.q ? *cfg.q : critical_exponent(m.dimension());
  return {m, c, std::move(p), std::move(ext), gamma, q};
}

std::vector<double> schedule_of(const RunConfig& cfg) {
  return cfg.q_schedule ? *cfg.q_schedule : default_q_schedule(cfg.n);
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

/// The configuration with every keyword replaced by its value, as comment lines.
std::string resolved_header(const RunConfig& cfg, const Resolved& r, std::uint64_t seed) {
  RunConfig full = cfg;
  full.gamma = r.gamma;
  full.q = r.q;
  full.q_schedule = schedule_of(cfg);
  full.phi = cfg.boundary_values();
  full.seed = seed;
  if (r.manifold.is_ball()) {
    full.delta = cfg.delta ? *cfg.delta : r.manifold.r_max() / 4.0;
    full.epsilons = cfg.epsilons ? *cfg.epsilons : default_epsilons(*full.delta);
  }
  std::istringstream in(serialize(full));
  std::string out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("bubble.", 0) == 0 && !r.manifold.is_ball()) continue;
    out += "# " + line + '\n';
  }
  return out;
}

struct Hypotheses {
  CoercivityReport coercivity;
  std::optional<HCondition> h;
  std::string h_note;
  double h_crit;  // ∫ f|h|^{2♯}
  double h_q;     // ∫ f|h|^q
  bool gamma_ok;

  bool hold() const { return coercivity.coercive && (!h || h->satisfied) && gamma_ok; }
};

Hypotheses hypotheses(const Resolved& r) {
  Hypotheses out{};
  out.coercivity = coercivity_check(r.problem);
  const int n = r.manifold.dimension();
  if (!r.manifold.is_ball()) {
    out.h_note = "not applicable (the center is outside an annulus)";
  } else if (n < 4) {
    out.h_note = "not applicable (n = 3)";
  } else {
    out.h = H_condition(r.manifold, r.coeffs);
  }
  const Vector zero = Vector::Zero(r.problem.node_count());
  out.h_crit = constraint_value(r.problem, zero, r.extension.h, critical_exponent(n));
  out.h_q = constraint_value(r.problem, zero, r.extension.h, r.q);
  out.gamma_ok = r.gamma > out.h_crit && r.gamma > out.h_q;
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error("cannot write '" + path.string() + "'");
}

void prepare_out(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

ConstraintSpec checked_spec(const Resolved& r, double q) {
  ConstraintSpec spec{r.gamma, q, r.extension.h};
  try {
    validate_constraint(r.problem, spec);
  } catch (const ValidationError& e) {
    throw ConfigError(0, "solver.gamma", e.what());
  }
  return spec;
}

SolveOptions solve_options(const RunConfig& cfg, const CommandOptions& opts) {
  SolveOptions so;
  so.tol = cfg.tol;
  so.max_iter = cfg.max_iter;
  so.restarts = cfg.restarts;
  so.seed = opts.seed ? *opts.seed : cfg.seed;
  so.jobs = opts.jobs;
  return so;
}

/// Returns true when the command may proceed.
bool gate(const Resolved& r, const CommandOptions& opts, std::ostream& out) {
  const Hypotheses h = hypotheses(r);
  if (h.hold()) return true;
  if (opts.force) {
    out << "warning: hypotheses not satisfied; continuing because of --force\n";
    return true;
  }
  out << "hypotheses not satisfied (see `check`); rerun with --force to solve anyway\n";
  return false;
}

std::string crossings_text(const std::vector<SignCrossing>& xs) {
  if (xs.empty()) return "none";
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k > 0) s += "; ";
    s += "[" + format_double(xs[k].r_left) + ", " + format_double(xs[k].r_right) + "]";
  }
  return s;
}

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const Resolved r = resolve(cfg);
  const Hypotheses h = hypotheses(r);
  const EigenPair psi1 = first_eigenpair(r.problem);
  out << "coercive = " << yes_no(h.coercivity.coercive) << '\n'
      << "lambda_min = " << format_double(h.coercivity.lambda_min) << '\n'
      << "lambda_1 = " << format_double(psi1.eigenvalue) << '\n';
  if (h.h) {
    out << "H = " << format_double(h.h->H) << '\n' << "H_negative = " << yes_no(h.h->satisfied) << '\n';
  } else {
    out << "H = " << h.h_note << '\n';
  }
  out << "gamma = " << format_double(r.gamma) << (cfg.gamma ? "" : " (auto)") << '\n'
      << "int_f_h_crit = " << format_double(h.h_crit) << '\n'
      << "int_f_h_q = " << format_double(h.h_q) << '\n'
      << "gamma_admissible = " << yes_no(h.gamma_ok) << '\n';
  if (r.extension.note) out << "note = " << *r.extension.note << '\n';
  out << "verdict = " << (h.hold() ? "all hypotheses hold" : "hypotheses not satisfied") << '\n';
  return h.hold() ? exit_ok : exit_hypothesis;
}

int cmd_solve(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const Resolved r = resolve(cfg);
  const ConstraintSpec spec = checked_spec(r, r.q);
  if (!gate(r, opts, out)) return exit_hypothesis;
  const SolveOptions so = solve_options(cfg, opts);
  const SolveResult res = solve_constrained(r.problem, spec, so);
  const NontrivialityReport nt = nontriviality_condition(r.problem, spec, res.mu);
  const Vector u = res.w + spec.h;

  prepare_out(opts.out);
  std::string trace = "iter,energy,constraint_gap,step,residual\n";
  for (const IterationRecord& it : res.trace) {
    trace += std::to_string(it.iter) + ',' + format_double(it.energy) + ',' + format_double(it.constraint_gap) + ',' +
             format_double(it.step) + ',' + format_double(it.residual) + '\n';
  }
  std::string solution = "r,w,h,u\n";
  for (int i = 0; i < r.problem.node_count(); ++i) {
    solution += format_double(r.problem.mesh[i]) + ',' + format_double(res.w(i)) + ',' + format_double(spec.h(i)) + ',' +
                format_double(u(i)) + '\n';
  }
  std::ostringstream summary;
  summary << resolved_header(cfg, r, so.seed) << "q = " << format_double(res.q) << '\n'
          << "mu = " << format_double(res.mu) << '\n'
          << "lambda = " << format_double(res.lambda) << '\n'
          << "residual = " << format_double(res.residual) << '\n'
          << "iterations = " << res.iterations << '\n'
          << "constraint_gap = " << format_double(res.constraint_gap) << '\n'
          << "feasible_energy = " << format_double(res.feasible_energy) << '\n'
          << "holder_lhs = " << format_double(res.holder_lhs) << '\n'
          << "sign_changes = " << yes_no(!res.sign_changes.empty()) << '\n'
          << "sign_change_intervals = " << crossings_text(res.sign_changes) << '\n'
          << "nontriviality_value = " << format_double(nt.value) << '\n'
          << "nontriviality_satisfied = " << yes_no(nt.satisfied) << '\n';
  if (r.extension.note) summary << "note = " << *r.extension.note << '\n';
  write_file(opts.out / "trace.csv", trace);
  write_file(opts.out / "solution.csv", solution);
  write_file(opts.out / "summary.txt", summary.str());
  out << summary.str();
  return exit_ok;
}

int cmd_continue(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const Resolved r = resolve(cfg);
  const std::vector<double> schedule = schedule_of(cfg);
  for (double q : schedule) checked_spec(r, q);
  if (!gate(r, opts, out)) return exit_hypothesis;
  SolveOptions so = solve_options(cfg, opts);
  so.record_trace = false;
  const std::vector<SolveResult> steps =
      continuation_to_critical(r.problem, ConstraintSpec{r.gamma, schedule.back(), r.extension.h}, schedule, so);

  prepare_out(opts.out);
  std::string csv = "q,mu,lambda,residual,iterations,constraint_gap\n";
  for (const SolveResult& s : steps) {
    csv += format_double(s.q) + ',' + format_double(s.mu) + ',' + format_double(s.lambda) + ',' +
           format_double(s.residual) + ',' + std::to_string(s.iterations) + ',' + format_double(s.constraint_gap) + '\n';
  }
  const SolveResult& last = steps.back();
  std::ostringstream summary;
  summary << resolved_header(cfg, r, so.seed) << "steps = " << steps.size() << '\n'
          << "mu_critical = " << format_double(last.mu) << '\n'
          << "lambda_critical = " << format_double(last.lambda) << '\n'
          << "residual_critical = " << format_double(last.residual) << '\n'
          << "sign_changes = " << yes_no(!last.sign_changes.empty()) << '\n';
  write_file(opts.out / "continuation.csv", csv);
  write_file(opts.out / "continuation_summary.txt", summary.str());
  out << csv;
  return exit_ok;
}

int cmd_bubble_scan(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const RadialManifold m = cfg.manifold();
  if (!m.is_ball()) throw ConfigError(0, "manifold.r_min", "bubble scans need a ball (r_min = 0)");
  if (m.dimension() < 4) throw ConfigError(0, "manifold.n", "bubble scans need n >= 4");
  BubbleFamily fam = make_bubble_family(m, cfg.coefficients());
  if (cfg.delta) {
    fam.delta = *cfg.delta;
    fam.epsilons = default_epsilons(fam.delta);
  }
  if (cfg.epsilons) fam.epsilons = *cfg.epsilons;
  try {
    validate_bubble_family(fam);
  } catch (const ValidationError& e) {
    throw ConfigError(0, "bubble", e.what());
  }
  const ExpansionReport rep = fit_expansion(fam, opts.jobs);
  const double threshold = opts.gap_threshold ? *opts.gap_threshold : cfg.gap_threshold;

  std::string csv = "eps,mu,gamma,Q\n";
  for (const EpsilonRow& row : rep.per_epsilon_table) {
    csv += format_double(row.eps) + ',' + format_double(row.mu) + ',' + format_double(row.gamma) + ',' +
           format_double(row.Q) + '\n';
  }
  RunConfig shown = cfg;
  shown.delta = fam.delta;
  shown.epsilons = fam.epsilons;
  shown.gap_threshold = threshold;
  std::ostringstream report;
  std::istringstream header(serialize(shown));
  for (std::string line; std::getline(header, line);) {
    if (line.rfind("solver.", 0) != 0 && line.rfind("boundary.", 0) != 0) report << "# " << line << '\n';
  }
  report << "branch = " << to_string(rep.branch) << '\n'
         << "H = " << format_double(rep.H_value) << '\n'
         << "H_negative = " << yes_no(rep.condition_satisfied) << '\n'
         << "fitted_coefficient = " << format_double(rep.fitted_coefficient) << '\n'
         << "fitted_next = " << format_double(rep.fitted_next) << '\n'
         << "fitted_constant = " << format_double(rep.fitted_constant) << '\n'
         << "fit_condition_number = " << format_double(rep.fit_condition_number) << '\n'
         << "predicted_coefficient = " << format_double(rep.predicted_coefficient) << '\n'
         << "alternate_coefficient = " << format_double(rep.alternate_coefficient) << '\n'
         << "supported_reading = " << rep.supported_reading << '\n';
  if (rep.branch == ExpansionBranch::log) {
    const char* sign = rep.supported_reading == "predicted"   ? "-R (unsimplified bracket)"
                       : rep.supported_reading == "alternate" ? "+R (simplified display)"
                                                              : "indistinguishable (R = 0)";
    report << "curvature_sign_supported = " << sign << '\n';
  }
  bool pass = true;
  if (rep.degenerate) {
    report << "relative_gap = degenerate: coefficient below noise floor\n";
  } else {
    pass = rep.relative_gap <= threshold;
    report << "relative_gap = " << format_double(rep.relative_gap) << '\n';
  }
  report << "verdict = " << (pass ? "pass" : "gap exceeds threshold") << '\n';

  prepare_out(opts.out);
  write_file(opts.out / "bubble_scan.csv", csv);
  write_file(opts.out / "bubble_report.txt", report.str());
  out << report.str();
  return pass ? exit_ok : exit_gap;
}

int cmd_oracle(const std::vector<std::string>& args, const std::optional<RunConfig>& cfg, std::ostream& out) {
  if (args.empty()) throw ConfigError(0, "oracle", "expected one of: aubin P Q, k0 N, omega N, critical N, lambda1");
  const std::string& what = args[0];
  auto number = [&](std::size_t k) {
    if (k >= args.size()) throw ConfigError(0, "oracle " + what, "missing argument");
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(args[k], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != args[k].size()) throw ConfigError(0, "oracle " + what, "not a number: '" + args[k] + "'");
    return x;
  };
  auto integer = [&](std::size_t k) {
    const double x = number(k);
    if (x != std::floor(x) || std::abs(x) > 1e6) throw ConfigError(0, "oracle " + what, "expected an integer");
    return static_cast<int>(x);
  };
  auto arity = [&](std::size_t n) {
    if (args.size() != n + 1) throw ConfigError(0, "oracle " + what, "expected " + std::to_string(n) + " argument(s)");
  };
  if (what == "aubin") {
    arity(2);
    out << format_double(aubin_integral({number(1), number(2)})) << '\n';
  } else if (what == "k0") {
    arity(1);
    out << format_double(best_sobolev_constant(integer(1))) << '\n';
  } else if (what == "omega") {
    arity(1);
    const int n = integer(1);
    if (n < 0) throw DomainError("sphere dimension must be non-negative");
    out << format_double(sphere_volume(n)) << '\n';
  } else if (what == "critical") {
    arity(1);
    out << format_double(critical_exponent(integer(1))) << '\n';
  } else if (what == "lambda1") {
    arity(0);
    if (!cfg) throw ConfigError(0, "oracle lambda1", "needs --config");
    const RadialManifold m = cfg->manifold();
    const DiscreteProblem p = assemble(m, cfg->coefficients(), RadialMesh::uniform(m.r_min(), m.r_max(), cfg->mesh_n));
    out << format_double(first_eigenpair(p).eigenvalue) << '\n';
  } else {
    throw ConfigError(0, "oracle", "unknown quantity '" + what + "'");
  }
  return exit_ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial solver for -div(a grad u) + b u = lambda f |u|^{q-2} u on model manifolds"};
  app.require_subcommand(1);

  std::string config_path;
  CommandOptions opts;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  double gap = 0.0;
  std::vector<std::string> oracle_args;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "Run configuration file");
    if (needs_config) c->required();
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Override solver.seed");
    sub->add_option("--jobs", opts.jobs, "Concurrent tasks")->check(CLI::Range(1, 256));
  };

  CLI::App* check = app.add_subcommand("check", "Report coercivity, H(x0) and gamma admissibility");
  add_common(check, true);
  CLI::App* solve = app.add_subcommand("solve", "Minimize the energy on the constraint at one exponent");
  add_common(solve, true);
  add_output(solve);
  solve->add_flag("--force", opts.force, "Solve even when a hypothesis check fails");
  CLI::App* cont = app.add_subcommand("continue", "Continuation in q up to the critical exponent");
  add_common(cont, true);
  add_output(cont);
  cont->add_flag("--force", opts.force, "Solve even when a hypothesis check fails");
  CLI::App* scan = app.add_subcommand("bubble-scan", "Test-function quotient and expansion fit");
  add_common(scan, true);
  add_output(scan);
  scan->add_option("--gap-threshold", gap, "Override bubble.gap_threshold")->check(CLI::PositiveNumber);
  CLI::App* oracle = app.add_subcommand("oracle", "Reference constants");
  add_common(oracle, false);
  oracle->add_option("args", oracle_args, "aubin P Q | k0 N | omega N | critical N | lambda1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    opts.out = out_dir;
    for (CLI::App* sub : {solve, cont, scan}) {
      if (sub->parsed() && sub->count("--seed") > 0) opts.seed = seed;
    }
    if (scan->count("--gap-threshold") > 0) opts.gap_threshold = gap;
    std::optional<RunConfig> cfg;
    if (!config_path.empty()) cfg = load_config(config_path);

    if (check->parsed()) return cmd_check(*cfg, out);
    if (solve->parsed()) return cmd_solve(*cfg, opts, out);
    if (cont->parsed()) return cmd_continue(*cfg, opts, out);
    if (scan->parsed()) return cmd_bubble_scan(*cfg, opts, out);
    return cmd_oracle(oracle_args, cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace yamabe::cli
