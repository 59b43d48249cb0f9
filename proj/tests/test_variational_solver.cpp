#include "oracles.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/special_functions.hpp"
#include "yamabe/test_functions.hpp"
#include "yamabe/variational_solver.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace yamabe;

namespace {

DiscreteProblem flat_ball(int n, int elements, CoefficientField c = {{1.0}, {0.0}, {1.0}}) {
  return assemble(RadialManifold(n, 0, 0, 1), c, RadialMesh::uniform(0, 1, elements));
}

struct AnnulusCase {
  DiscreteProblem p;
  Vector h;
};

AnnulusCase annulus(int elements = 200) {
  DiscreteProblem p = assemble(RadialManifold(4, 0, 1, 2), {{1.0}, {0.0}, {1.0}}, RadialMesh::uniform(1, 2, elements));
  Vector h = extend_boundary_data(p, {1.0, -1.0}).h;
  return {std::move(p), std::move(h)};
}

Vector zeros(const DiscreteProblem& p) { return Vector::Zero(p.node_count()); }

/// ‖r‖ in the dual of the H¹ form, restricted to interior dofs.
double dual_norm(const DiscreteProblem& p, const Vector& r_full) {
  const Tridiagonal h1 = p.h1_form().block(p.first_interior, p.interior_count);
  const Vector r = p.interior(r_full);
  return std::sqrt(r.dot(oracle::thomas(h1, r)));
}

}  // namespace

TEST(ConstraintSpec, Validation) {
  const DiscreteProblem p = flat_ball(5, 40);
  EXPECT_THROW(validate_constraint(p, {1.0, 2.0, zeros(p)}), ValidationError);
  EXPECT_THROW(validate_constraint(p, {1.0, 10.0 / 3.0 + 1e-6, zeros(p)}), ValidationError);
  EXPECT_THROW(validate_constraint(p, {0.0, 3.0, zeros(p)}), ValidationError);
  EXPECT_THROW(validate_constraint(p, {1.0, 3.0, Vector::Zero(3)}), ValidationError);
  EXPECT_NO_THROW(validate_constraint(p, {1.0, 3.0, zeros(p)}));
  const AnnulusCase a = annulus();
  const double crit = constraint_value(a.p, zeros(a.p), a.h, 4.0);
  EXPECT_THROW(validate_constraint(a.p, {0.99 * crit, 3.0, a.h}), ValidationError);
  EXPECT_NEAR(default_gamma(a.p, a.h), 2.0 * crit, 1e-12 * crit);
  EXPECT_EQ(default_gamma(p, zeros(p)), 1.0);
}

TEST(ConstraintSpec, DefaultSchedule) {
  const std::vector<double> s = default_q_schedule(5);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_DOUBLE_EQ(s.back(), 10.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.front(), 10.0 / 3.0 - 0.5);
}

TEST(FeasiblePoint, HomogeneousClosedForm) {
  const DiscreteProblem p = flat_ball(5, 200);
  const EigenPair psi = first_eigenpair(p);
  for (double q : {2.5, 3.0, 10.0 / 3.0}) {
    const ConstraintSpec spec{1.0, q, zeros(p)};
    const FeasiblePoint fp = feasible_point(p, spec, psi);
    const double closed = std::pow(1.0 / lq_integral(p, psi.eigenvector, q), 1.0 / q);
    EXPECT_NEAR(fp.t, closed, 1e-10 * closed);
    EXPECT_NEAR(constraint_value(p, fp.w0, zeros(p), q), 1.0, 1e-12);
  }
}

TEST(FeasiblePoint, Annulus) {
  const AnnulusCase a = annulus();
  const ConstraintSpec spec{default_gamma(a.p, a.h), 4.0, a.h};
  const FeasiblePoint fp = feasible_point(a.p, spec, first_eigenpair(a.p));
  EXPECT_GT(fp.t, 0.0);
  EXPECT_NEAR(constraint_value(a.p, fp.w0, a.h, 4.0) / spec.gamma, 1.0, 1e-10);
}

TEST(ProjectToConstraint, FixedPointAndHomogeneity) {
  const DiscreteProblem p = flat_ball(3, 100);
  const ConstraintSpec spec{2.0, 4.0, zeros(p)};
  Vector w = Vector::LinSpaced(p.node_count(), 1.0, 0.0);
  const double f1 = constraint_value(p, w, zeros(p), 4.0);
  EXPECT_NEAR(constraint_scale(p, spec, w), std::pow(2.0 / f1, 0.25), 1e-12);
  const Vector on = project_to_constraint(p, spec, w);
  EXPECT_NEAR(constraint_scale(p, spec, on), 1.0, 1e-10);
  EXPECT_THROW(project_to_constraint(p, spec, zeros(p)), DomainError);
}

TEST(ProjectToConstraint, RandomAnnulusVectors) {
  const AnnulusCase a = annulus();
  const ConstraintSpec spec{default_gamma(a.p, a.h), 3.5, a.h};
  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    Vector w = Vector::NullaryExpr(a.p.node_count(), [&] { return g(rng); });
    for (int d : a.p.boundary_dofs) w(d) = 0.0;
    const Vector pw = project_to_constraint(a.p, spec, w);
    EXPECT_NEAR(constraint_value(a.p, pw, a.h, 3.5) / spec.gamma, 1.0, 1e-10);
    EXPECT_GT(pw.dot(w), 0.0);
  }
}

TEST(MinimizeSubcritical, HomogeneousBallMinimizerAndScaling) {
  const DiscreteProblem p = flat_ball(3, 120);
  const double q = 4.0;
  const SolveResult r1 = solve_constrained(p, {1.0, q, zeros(p)});
  EXPECT_GT(r1.lambda, 0.0);
  EXPECT_GT(r1.mu, 0.0);
  EXPECT_LT(r1.residual, 1e-8);
  EXPECT_GE(r1.w.head(p.interior_count).minCoeff(), 0.0);
  for (int i = 1; i < p.interior_count; ++i) EXPECT_LE(r1.w(i), r1.w(i - 1) + 1e-12);  // radially decreasing
  EXPECT_LE(r1.mu, r1.feasible_energy);

  const SolveResult r3 = solve_constrained(p, {3.0, q, zeros(p)});
  EXPECT_NEAR(r3.mu / r1.mu, std::pow(3.0, 2.0 / q), 1e-8);
  EXPECT_LT((r3.w - std::pow(3.0, 1.0 / q) * r1.w).norm(), 1e-6 * r3.w.norm());
}

TEST(MinimizeSubcritical, IndependentResidualAndMultiplierIdentity) {
  const AnnulusCase a = annulus();
  const ConstraintSpec spec{default_gamma(a.p, a.h), 4.0, a.h};
  const SolveResult r = solve_constrained(a.p, spec);
  const Vector u = r.w + a.h;
  Vector nonlinear(u.size());
  for (int i = 0; i < u.size(); ++i) nonlinear(i) = a.p.weight_f(i) * std::pow(std::abs(u(i)), 2.0) * u(i);
  const Vector aw = apply(a.p.operator_form(), r.w);
  const double rel = dual_norm(a.p, aw - r.lambda * nonlinear) / dual_norm(a.p, aw);
  EXPECT_LT(rel, 1e-8);
  const double holder = nonlinear.dot(a.h);
  EXPECT_NEAR(r.holder_lhs, holder, 1e-10 * std::abs(holder));
  EXPECT_NEAR(r.mu, r.lambda * (spec.gamma - holder), 1e-8 * r.mu);
  // Hölder chain: ∫ f|u|^{q-2}u h <= γ^{1-1/q} (∫ f|h|^q)^{1/q} < γ.
  const double fh = constraint_value(a.p, zeros(a.p), a.h, 4.0);
  EXPECT_LE(holder, std::pow(spec.gamma, 0.75) * std::pow(fh, 0.25) * (1 + 1e-12));
  EXPECT_LT(std::pow(spec.gamma, 0.75) * std::pow(fh, 0.25), spec.gamma);
  EXPECT_GT(r.lambda, 0.0);
  EXPECT_LT(r.constraint_gap, 1e-10);
  EXPECT_TRUE(!r.sign_changes.empty());
}

TEST(MinimizeSubcritical, TraceIsFeasibleAndMonotone) {
  const DiscreteProblem p = flat_ball(5, 100, {{1.0, 0.5}, {-1.0}, {1.0, -0.2}});
  const SolveResult r = solve_constrained(p, {1.0, 3.0, zeros(p)});
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    EXPECT_LT(r.trace[k].constraint_gap, 1e-10);
    if (k > 0) EXPECT_LE(r.trace[k].energy, r.trace[k - 1].energy * (1 + 1e-14));
  }
  // Bound on ∫|w|^q at the solution.
  const double minf = 0.8;
  EXPECT_LE(lq_integral(p, r.w, 3.0), std::pow(2.0, 2.0) / minf * 1.0);
}

TEST(MinimizeSubcritical, RejectsInfeasibleStartAndNonCoerciveOperators) {
  const DiscreteProblem p = flat_ball(3, 60);
  const ConstraintSpec spec{1.0, 4.0, zeros(p)};
  EXPECT_THROW(minimize_subcritical(p, spec, Vector::Ones(p.node_count())), DomainError);
  const DiscreteProblem bad = flat_ball(3, 60, {{1.0}, {-40.0}, {1.0}});
  EXPECT_THROW(solve_constrained(bad, {1.0, 4.0, zeros(bad)}), CoercivityError);
}

TEST(MinimizeSubcritical, RestartsAreDeterministicAndIndependentOfJobs) {
  const AnnulusCase a = annulus(120);
  const ConstraintSpec spec{default_gamma(a.p, a.h), 3.5, a.h};
  SolveOptions o;
  o.restarts = 3;
  o.seed = 17;
  const SolveResult s1 = solve_constrained(a.p, spec, o);
  const SolveResult s2 = solve_constrained(a.p, spec, o);
  o.jobs = 3;
  const SolveResult s3 = solve_constrained(a.p, spec, o);
  EXPECT_EQ(s1.mu, s2.mu);
  EXPECT_EQ(s1.w, s2.w);
  EXPECT_EQ(s1.w, s3.w);
  const SolveResult plain = solve_constrained(a.p, spec);
  EXPECT_LE(s1.mu, plain.mu * (1 + 1e-9));
}

TEST(MinimizeSubcritical, MatchesBruteForceOnSmallMesh) {
  const DiscreteProblem p = flat_ball(3, 40);
  const double q = 4.0, gamma = 1.0;
  const SolveResult r = solve_constrained(p, {gamma, q, zeros(p)});
  const auto bf = oracle::brute_force_quotient(p.stiffness.block(0, p.interior_count), p.lumped.head(p.interior_count), q,
                                               4, 123);
  const double mu_bf = std::pow(gamma, 2.0 / q) * bf.quotient;
  EXPECT_LT(std::abs(mu_bf - r.mu) / r.mu, 1e-4);
}

TEST(Continuation, SingleStepEqualsDirectSolve) {
  const DiscreteProblem p = flat_ball(5, 120, {{1.0}, {-1.0}, {1.0}});
  const ConstraintSpec spec{1.0, 10.0 / 3.0, zeros(p)};
  const auto steps = continuation_to_critical(p, spec, {10.0 / 3.0});
  ASSERT_EQ(steps.size(), 1u);
  const SolveResult direct = solve_constrained(p, spec);
  EXPECT_NEAR(steps[0].mu, direct.mu, 1e-10 * direct.mu);
}

TEST(Continuation, DefaultScheduleStaysPositive) {
  const DiscreteProblem p = flat_ball(5, 200, {{1.0}, {-1.0}, {1.0}});
  const auto steps = continuation_to_critical(p, {1.0, 10.0 / 3.0, zeros(p)}, default_q_schedule(5));
  ASSERT_EQ(steps.size(), 6u);
  for (const SolveResult& s : steps) {
    EXPECT_GT(s.lambda, 0.0);
    EXPECT_LT(s.residual, 1e-8);
  }
  EXPECT_DOUBLE_EQ(steps.back().q, 10.0 / 3.0);
}

TEST(Continuation, ScheduleValidationAndErrorContext) {
  const DiscreteProblem p = flat_ball(5, 60);
  const ConstraintSpec spec{1.0, 10.0 / 3.0, zeros(p)};
  EXPECT_THROW(continuation_to_critical(p, spec, {}), ValidationError);
  EXPECT_THROW(continuation_to_critical(p, spec, {3.0, 2.9, 10.0 / 3.0}), ValidationError);
  EXPECT_THROW(continuation_to_critical(p, spec, {2.5, 3.0}), ValidationError);
  SolveOptions tight;
  tight.max_iter = 1;
  try {
    continuation_to_critical(p, spec, {2.5, 10.0 / 3.0}, tight);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("q = 2.5"), std::string::npos) << e.what();
  }
}

TEST(SignChange, Detection) {
  const DiscreteProblem p = flat_ball(3, 10);
  EXPECT_FALSE(detect_sign_change(p, Vector::Ones(p.node_count())).changes);
  Vector u = Vector::Ones(p.node_count());
  u(3) = 0.0;
  u(4) = -1.0;
  u(5) = 0.0;
  u(6) = 0.0;
  u(7) = 2.0;
  const SignChangeReport s = detect_sign_change(p, u);
  ASSERT_EQ(s.crossings.size(), 2u);
  EXPECT_EQ(s.crossings[0].left_node, 2);
  EXPECT_DOUBLE_EQ(s.crossings[0].r_right, p.mesh[4]);
  EXPECT_EQ(s.crossings[1].left_node, 4);
  EXPECT_DOUBLE_EQ(s.crossings[1].r_right, p.mesh[7]);
}

TEST(Nontriviality, ValuesAndBubbleConsistency) {
  const DiscreteProblem p = flat_ball(5, 40);
  const ConstraintSpec spec{1.0, 10.0 / 3.0, zeros(p)};
  EXPECT_EQ(nontriviality_condition(p, spec, 0.0).value, 0.0);
  EXPECT_TRUE(nontriviality_condition(p, spec, 0.0).satisfied);
  EXPECT_NEAR(nontriviality_condition(p, spec, 7.0).value, best_sobolev_constant(5) * 7.0, 1e-14);

  const RadialManifold m(5, 0, 0, 1);
  const CoefficientField c{{1.0}, {-1.0}, {1.0, -0.3}};
  const DiscreteProblem pc = assemble(m, c, RadialMesh::uniform(0, 1, 40));
  const BubbleFamily fam = make_bubble_family(m, c);
  const double eps = fam.epsilons[2];
  const double mu = mu_eps(fam, eps), gamma = gamma_eps(fam, eps);
  const NontrivialityReport nt = nontriviality_condition(pc, {gamma, 10.0 / 3.0, zeros(pc)}, mu);
  EXPECT_NEAR(nt.value, quotient_eps(fam, eps), 1e-13);
}
