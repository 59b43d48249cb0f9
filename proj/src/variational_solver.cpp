#include "yamabe/variational_solver.hpp"

#include "yamabe/errors.hpp"
#include "yamabe/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

namespace yamabe {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// Nodal derivative of F: N_i = f_i m_i |u_i|^{q-2} u_i.
Vector nonlinear_term(const DiscreteProblem& p, const Vector& u, double q) {
  return (p.weight_f.array() * u.array().abs().pow(q - 2.0) * u.array()).matrix();
}

double constraint_raw(const DiscreteProblem& p, const Vector& u, double q) {
  return (p.weight_f.array() * u.array().abs().pow(q)).sum();
}

/// Operators restricted to the interior unknowns, shared by the solver loop.
struct InteriorSystem {
  Tridiagonal a;
  Tridiagonal h1;
  TridiagonalLDLT<double> h1_ldlt;

  explicit InteriorSystem(const DiscreteProblem& p)
      : a(p.operator_form().block(p.first_interior, p.interior_count)),
        h1(p.h1_form().block(p.first_interior, p.interior_count)),
        h1_ldlt(h1) {}

  double energy(const Vector& wi) const { return bilinear(a, wi, wi); }
  double h1_dot(const Vector& x, const Vector& y) const { return bilinear(h1, x, y); }
};

struct Gradients {
  Vector d_energy;      // P^{-1} ∇I
  Vector d_constraint;  // P^{-1} ∇F
  Vector direction;     // tangent projection of d_energy in the P inner product
  double lambda;
  double holder_lhs;
  double residual;
};

Gradients gradients(const DiscreteProblem& p, const InteriorSystem& sys, const ConstraintSpec& spec,
                    const Vector& wi) {
  const Vector u = p.embed(wi) + spec.h;
  const Vector nfull = nonlinear_term(p, u, spec.q);
  const Vector n = p.interior(nfull);
  const Vector aw = apply(sys.a, wi);
  const Vector grad_i = 2.0 * aw;
  const Vector grad_f = spec.q * n;

  Gradients g;
  g.d_energy = sys.h1_ldlt.solve(grad_i);
  g.d_constraint = sys.h1_ldlt.solve(grad_f);
  const double c = grad_f.dot(g.d_energy) / grad_f.dot(g.d_constraint);
  g.direction = g.d_energy - c * g.d_constraint;

  g.holder_lhs = nfull.dot(spec.h);
  const double denom = spec.gamma - g.holder_lhs;
  if (!(denom > 0.0)) {
    throw Error("multiplier denominator gamma - ∫f|u|^{q-2}u h = " + fmt_double(denom) +
                " is not positive; the Hölder bound (strict inequality) is violated");
  }
  g.lambda = aw.dot(wi) / denom;

  // ‖Aw - λN‖ in the dual norm of P, relative to ‖Aw‖.
  const Vector r = aw - g.lambda * n;
  const Vector pr = 0.5 * g.d_energy - (g.lambda / spec.q) * g.d_constraint;
  const double scale = aw.dot(0.5 * g.d_energy);
  g.residual = scale > 0.0 ? std::sqrt(std::max(0.0, r.dot(pr)) / scale) : std::sqrt(std::max(0.0, r.dot(pr)));
  return g;
}

Vector random_perturbation(const DiscreteProblem& p, std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const RadialManifold& m = p.manifold;
  const double length = m.r_max() - m.r_min();
  Vector out = Vector::Zero(p.node_count());
  for (int k = 1; k <= 6; ++k) {
    const double c = amplitude * normal(rng) / k;
    for (int i = 0; i < p.node_count(); ++i) {
      const double x = (p.mesh[i] - m.r_min()) / length;
      out(i) += c * (m.is_ball() ? std::cos((k - 0.5) * std::numbers::pi * x) : std::sin(k * std::numbers::pi * x));
    }
  }
  for (int i : p.boundary_dofs) out(i) = 0.0;
  return out;
}

}  // namespace

void validate_constraint(const DiscreteProblem& p, const ConstraintSpec& spec) {
  try {
    check_exponent(p.manifold, spec.q);
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  if (spec.h.size() != p.node_count()) throw ValidationError("boundary extension h has the wrong length");
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) throw ValidationError("gamma must be positive");
  const double crit = critical_exponent(p.manifold.dimension());
  const double f_crit = constraint_raw(p, spec.h, crit);
  if (!(spec.gamma > f_crit)) {
    throw ValidationError("gamma = " + fmt_double(spec.gamma) + " must exceed ∫ f|h|^{2#} = " + fmt_double(f_crit));
  }
  const double f_q = constraint_raw(p, spec.h, spec.q);
  if (!(spec.gamma > f_q)) {
    throw ValidationError("gamma = " + fmt_double(spec.gamma) + " must exceed ∫ f|h|^q = " + fmt_double(f_q));
  }
}

double default_gamma(const DiscreteProblem& p, const Vector& h) {
  if (h.isZero(0.0)) return 1.0;
  return 2.0 * constraint_raw(p, h, critical_exponent(p.manifold.dimension()));
}

std::vector<double> default_q_schedule(int n) {
  const double crit = critical_exponent(n);
  return {crit - 0.5, crit - 0.25, crit - 0.1, crit - 0.05, crit - 0.01, crit};
}

double constraint_scale(const DiscreteProblem& p, const ConstraintSpec& spec, const Vector& w) {
  if (w.cwiseAbs().maxCoeff() == 0.0) throw DomainError("cannot scale the zero vector onto the constraint");
  const double q = spec.q;
  auto value = [&](double t) { return constraint_raw(p, t * w + spec.h, q); };
  auto slope = [&](double t) {
    const Vector u = t * w + spec.h;
    return q * (p.weight_f.array() * u.array().abs().pow(q - 2.0) * u.array() * w.array()).sum();
  };

  // F(t) is convex with F(0) < γ, so there is exactly one positive root.
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (value(hi) < spec.gamma) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 2000) throw Error("constraint_scale: no bracket found");
  }
  while (value(lo) >= spec.gamma && lo > 0.0) lo *= 0.5;
  for (int it = 0; it < 40 && hi - lo > 1e-3 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) < spec.gamma ? lo : hi) = mid;
  }
  // Newton from the right converges monotonically on a convex increasing branch.
  double t = hi;
  for (int it = 0; it < 100; ++it) {
    const double f = value(t) - spec.gamma;
    if (std::abs(f) <= 1e-15 * spec.gamma) break;
    const double s = slope(t);
    double next = s > 0.0 ? t - f / s : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    (value(next) < spec.gamma ? lo : hi) = next;
    if (next == t) break;
    t = next;
  }
  // Pick whichever neighbour of the root is closest.
  double best = t;
  double best_err = std::abs(value(t) - spec.gamma);
  for (double c : {std::nextafter(t, 0.0), std::nextafter(t, 2.0 * t + 1.0)}) {
    const double e = std::abs(value(c) - spec.gamma);
    if (e < best_err) {
      best = c;
      best_err = e;
    }
  }
  return best;
}

Vector project_to_constraint(const DiscreteProblem& p, const ConstraintSpec& spec, const Vector& w) {
  return constraint_scale(p, spec, w) * w;
}

FeasiblePoint feasible_point(const DiscreteProblem& p, const ConstraintSpec& spec, const EigenPair& psi1) {
  validate_constraint(p, spec);
  const double t = constraint_scale(p, spec, psi1.eigenvector);
  return {t, t * psi1.eigenvector};
}

Stationarity stationarity(const DiscreteProblem& p, const ConstraintSpec& spec, const Vector& w) {
  const InteriorSystem sys(p);
  const Gradients g = gradients(p, sys, spec, p.interior(w));
  return {g.lambda, g.residual, g.holder_lhs};
}

SolveResult minimize_subcritical(const DiscreteProblem& p, const ConstraintSpec& spec, const Vector& w_init,
                                 const SolveOptions& opts) {
  validate_constraint(p, spec);
  if (w_init.size() != p.node_count() || !p.zero_on_boundary(w_init)) {
    throw DomainError("initial iterate must be a nodal vector vanishing on the boundary");
  }
  const InteriorSystem sys(p);

  auto gap_of = [&](const Vector& wi) { return std::abs(constraint_raw(p, p.embed(wi) + spec.h, spec.q) - spec.gamma) / spec.gamma; };

  Vector w = p.interior(w_init);
  if (gap_of(w) > 1e-13) w = constraint_scale(p, spec, p.embed(w)) * w;

  SolveResult result;
  result.q = spec.q;
  result.feasible_energy = sys.energy(w);

  double energy = sys.energy(w);
  Gradients g = gradients(p, sys, spec, w);
  Vector prev_w, prev_dir;
  double alpha = 0.5 / std::max(1.0, p.coeffs.a.max_on(p.manifold.r_min(), p.manifold.r_max()));
  int iter = 0;

  auto record = [&](double step) {
    if (opts.record_trace) result.trace.push_back({iter, energy, gap_of(w), step, g.residual});
  };
  record(0.0);

  while (g.residual > opts.tol) {
    if (iter >= opts.max_iter) {
      throw ConvergenceError("projected gradient hit the iteration cap (" + std::to_string(opts.max_iter) +
                             ") at residual " + fmt_double(g.residual) + ", q = " + fmt_double(spec.q));
    }
    const Vector& d = g.direction;
    const double d_norm2 = sys.h1_dot(d, d);

    if (prev_w.size() > 0) {
      const Vector s = w - prev_w;
      const Vector y = d - prev_dir;
      const double sy = sys.h1_dot(s, y);
      if (sy > 0.0) alpha = sys.h1_dot(s, s) / sy;
      alpha = std::clamp(alpha, 1e-10, 1e10);
    }

    bool accepted = false;
    Vector trial_w;
    Gradients trial_g;
    double step = alpha;
    for (int bt = 0; bt < 80; ++bt, step *= 0.5) {
      const Vector v = w - step * d;
      const double t = constraint_scale(p, spec, p.embed(v));
      trial_w = t * v;
      const Vector s = trial_w - w;
      // Exact quadratic difference avoids cancellation in I(w_new) - I(w).
      const double delta = (2.0 * w + s).dot(apply(sys.a, s));
      if (delta <= -1e-4 * step * d_norm2) {
        trial_g = gradients(p, sys, spec, trial_w);
        accepted = true;
      } else if (std::abs(delta) <= 1e-14 * std::abs(energy)) {
        // Decrease is below round-off: fall back to residual decrease.
        trial_g = gradients(p, sys, spec, trial_w);
        accepted = trial_g.residual < g.residual;
      }
      if (accepted) break;
    }
    if (!accepted) {
      throw LineSearchError("Armijo backtracking failed at iteration " + std::to_string(iter) + " (residual " +
                            fmt_double(g.residual) + ", |d|_P = " + fmt_double(std::sqrt(d_norm2)) +
                            ", q = " + fmt_double(spec.q) + ")");
    }
    prev_w = std::move(w);
    prev_dir = g.direction;
    w = std::move(trial_w);
    g = std::move(trial_g);
    energy = sys.energy(w);
    ++iter;
    record(step);
  }

  result.w = p.embed(w);
  result.mu = sys.energy(w);
  result.lambda = g.lambda;
  result.residual = g.residual;
  result.holder_lhs = g.holder_lhs;
  result.iterations = iter;
  result.constraint_gap = gap_of(w);
  result.sign_changes = detect_sign_change(p, result.w + spec.h).crossings;
  return result;
}

SolveResult solve_constrained(const DiscreteProblem& p, const ConstraintSpec& spec, const SolveOptions& opts) {
  const CoercivityReport coercivity = coercivity_check(p);
  if (!coercivity.coercive) {
    throw CoercivityError("-div(a grad) + b is not coercive (lambda_min = " + fmt_double(coercivity.lambda_min) + ")");
  }
  const EigenPair psi1 = first_eigenpair(p);
  const FeasiblePoint start = feasible_point(p, spec, psi1);
  const double start_energy = energy(p, start.w0);

  std::vector<Vector> starts{start.w0};
  const double amplitude = 0.5 * start.w0.cwiseAbs().maxCoeff();
  for (int r = 1; r <= opts.restarts; ++r) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(r));
    starts.push_back(project_to_constraint(p, spec, start.w0 + random_perturbation(p, rng, amplitude)));
  }

  std::vector<SolveResult> runs;
  runs.reserve(starts.size());
  if (opts.jobs > 1 && starts.size() > 1) {
    // Results are gathered in start order, so the outcome does not depend on scheduling.
    std::vector<std::future<SolveResult>> pending;
    std::size_t next = 0;
    while (next < starts.size() || !pending.empty()) {
      while (next < starts.size() && pending.size() < static_cast<std::size_t>(opts.jobs)) {
        pending.push_back(std::async(std::launch::async, [&, k = next] { return minimize_subcritical(p, spec, starts[k], opts); }));
        ++next;
      }
      runs.push_back(pending.front().get());
      pending.erase(pending.begin());
    }
  } else {
    for (const Vector& s : starts) runs.push_back(minimize_subcritical(p, spec, s, opts));
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].mu < runs[best].mu) best = k;
  }
  SolveResult out = std::move(runs[best]);
  out.feasible_energy = start_energy;
  return out;
}

std::vector<SolveResult> continuation_to_critical(const DiscreteProblem& p, const ConstraintSpec& spec_base,
                                                  const std::vector<double>& schedule, const SolveOptions& opts) {
  if (schedule.empty()) throw ValidationError("q schedule is empty");
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    if (!(schedule[k] > schedule[k - 1])) throw ValidationError("q schedule must be strictly increasing");
  }
  const double crit = critical_exponent(p.manifold.dimension());
  if (std::abs(schedule.back() - crit) > 1e-12 * crit) {
    throw ValidationError("q schedule must end at the critical exponent " + fmt_double(crit));
  }

  const CoercivityReport coercivity = coercivity_check(p);
  if (!coercivity.coercive) {
    throw CoercivityError("-div(a grad) + b is not coercive (lambda_min = " + fmt_double(coercivity.lambda_min) + ")");
  }
  const EigenPair psi1 = first_eigenpair(p);

  std::vector<SolveResult> out;
  Vector warm;
  for (double q : schedule) {
    ConstraintSpec spec{spec_base.gamma, q, spec_base.h};
    try {
      const FeasiblePoint start = feasible_point(p, spec, psi1);
      const Vector init = warm.size() > 0 ? project_to_constraint(p, spec, warm) : start.w0;
      SolveResult r = minimize_subcritical(p, spec, init, opts);
      r.feasible_energy = energy(p, start.w0);
      warm = r.w;
      out.push_back(std::move(r));
    } catch (const Error& e) {
      throw Error("continuation failed at q = " + fmt_double(q) + ": " + e.what());
    }
  }
  return out;
}

SignChangeReport detect_sign_change(const DiscreteProblem& p, const Vector& u) {
  SignChangeReport report{false, {}};
  int last = -1;
  for (int i = 0; i < u.size(); ++i) {
    if (u(i) == 0.0) continue;
    if (last >= 0 && (u(last) > 0.0) != (u(i) > 0.0)) {
      report.crossings.push_back({last, p.mesh[last], p.mesh[i]});
    }
    last = i;
  }
  report.changes = !report.crossings.empty();
  return report;
}

NontrivialityReport nontriviality_condition(const DiscreteProblem& p, const ConstraintSpec& spec, double mu) {
  const RadialManifold& m = p.manifold;
  const int n = m.dimension();
  const double ratio = (n - 2.0) / n;  // 2/2♯
  const double a_min = p.coeffs.a.min_on(m.r_min(), m.r_max());
  const double f_max = p.coeffs.f.max_on(m.r_min(), m.r_max());
  const double value =
      best_sobolev_constant(n) / a_min * std::pow(f_max, ratio) * std::pow(spec.gamma, -ratio) * mu;
  return {value, value < 1.0};
}

}  // namespace yamabe
