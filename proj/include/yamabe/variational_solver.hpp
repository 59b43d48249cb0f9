#pragma once

#include "yamabe/discretization.hpp"
#include "yamabe/linear_solvers.hpp"

#include <cstdint>
#include <vector>

namespace yamabe {

/// Constraint set H_{γ,q} = { w : ∫ f |w + h|^q dv_g = γ }.
struct ConstraintSpec {
  double gamma;
  double q;
  Vector h;
};

/// Throws ValidationError unless 2 < q <= 2♯, γ > ∫ f|h|^{2♯} and γ > ∫ f|h|^q.
void validate_constraint(const DiscreteProblem& p, const ConstraintSpec& spec);

/// 2·∫ f|h|^{2♯} when h ≠ 0, otherwise 1.
double default_gamma(const DiscreteProblem& p, const Vector& h);

/// 2♯ - {0.5, 0.25, 0.1, 0.05, 0.01, 0}.
std::vector<double> default_q_schedule(int n);

struct FeasiblePoint {
  double t;
  Vector w0;
};

/// Smallest t > 0 with ∫ f |t ψ1 + h|^q = γ (bracket + bisection).
FeasiblePoint feasible_point(const DiscreteProblem& p, const ConstraintSpec& spec, const EigenPair& psi1);

/// The unique positive t with ∫ f |t w + h|^q = γ.
double constraint_scale(const DiscreteProblem& p, const ConstraintSpec& spec, const Vector& w);

/// t·w on the constraint.
Vector project_to_constraint(const DiscreteProblem& p, const ConstraintSpec& spec, const Vector& w);

struct SolveOptions {
  double tol = 1e-9;
  int max_iter = 20000;
  int restarts = 0;
  std::uint64_t seed = 0;
  /// Keep the per-iteration trace in the result.
  bool record_trace = true;
  /// Restarts run concurrently when > 1.
  int jobs = 1;
};

struct IterationRecord {
  int iter;
  double energy;
  double constraint_gap;  // |F(w) - γ| / γ
  double step;
  double residual;
};

struct SignCrossing {
  int left_node;  // the crossing lies in [r_left, r_right]
  double r_left;
  double r_right;
};

struct SolveResult {
  double q;
  Vector w;
  double mu;        // I(w)
  double lambda;    // I(w) / (γ - ∫ f|w+h|^{q-2}(w+h) h)
  double residual;  // relative H¹₀-dual norm of Aw - λ N(w)
  int iterations;
  double constraint_gap;
  double feasible_energy;  // I(t_{γ,q} ψ1)
  double holder_lhs;       // ∫ f|w+h|^{q-2}(w+h)h
  std::vector<SignCrossing> sign_changes;
  std::vector<IterationRecord> trace;
};

/// Projected gradient descent of I over H_{γ,q} in the H¹₀ inner product
/// with Armijo backtracking and retraction by scaling.
SolveResult minimize_subcritical(const DiscreteProblem& p, const ConstraintSpec& spec, const Vector& w_init,
                                 const SolveOptions& opts = {});

/// Convenience wrapper: checks coercivity, builds the eigenfunction-based feasible
/// start from ψ1 and minimizes (with optional seeded restarts).
SolveResult solve_constrained(const DiscreteProblem& p, const ConstraintSpec& spec, const SolveOptions& opts = {});

/// Sequential solves along an increasing q schedule ending at 2♯, each warm
/// started from the previous minimizer projected onto the next constraint.
std::vector<SolveResult> continuation_to_critical(const DiscreteProblem& p, const ConstraintSpec& spec_base,
                                                  const std::vector<double>& schedule,
                                                  const SolveOptions& opts = {});

/// Euler-Lagrange residual pieces for an arbitrary feasible w.
struct Stationarity {
  double lambda;
  double residual;
  double holder_lhs;
};
Stationarity stationarity(const DiscreteProblem& p, const ConstraintSpec& spec, const Vector& w);

struct SignChangeReport {
  bool changes;
  std::vector<SignCrossing> crossings;
};

/// Mesh intervals where consecutive nodal values have strictly opposite signs.
SignChangeReport detect_sign_change(const DiscreteProblem& p, const Vector& u);

struct NontrivialityReport {
  double value;
  bool satisfied;
};

/// K0 (min a)^{-1} (max f)^{2/2♯} γ^{-2/2♯} μ < 1.
NontrivialityReport nontriviality_condition(const DiscreteProblem& p, const ConstraintSpec& spec, double mu);

}  // namespace yamabe
