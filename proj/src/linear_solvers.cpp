#include "yamabe/linear_solvers.hpp"

#include "yamabe/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <string>

namespace yamabe {

Tridiagonal form_matrix(const DiscreteProblem& p, Form form) {
  switch (form) {
    case Form::stiffness:
      return p.stiffness;
    case Form::operator_:
      return p.operator_form();
    case Form::h1:
      return p.h1_form();
    case Form::l2_mass:
      return p.mass;
  }
  return p.stiffness;
}

namespace {

Tridiagonal interior_block(const DiscreteProblem& p, const Tridiagonal& t) {
  return t.block(p.first_interior, p.interior_count);
}

}  // namespace

Vector solve_spd(const DiscreteProblem& p, Form form, const Vector& rhs, double tol, SpdMethod method) {
  if (rhs.size() != p.node_count()) throw DomainError("right-hand side has the wrong length");
  const Tridiagonal block = interior_block(p, form_matrix(p, form));
  const TridiagonalLDLT<double> ldlt(block);
  if (!ldlt.positive_definite()) {
    throw IndefiniteFormError("form is not positive definite on interior dofs (" +
                              std::to_string(ldlt.negative_count()) + " negative pivots)");
  }
  const Vector b = p.interior(rhs);
  if (method == SpdMethod::direct) return p.embed(ldlt.solve(b));

  const Eigen::SparseMatrix<double> a = block.to_sparse();
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * block.size()));
  cg.compute(a);
  Vector x = cg.solve(b);
  if (cg.info() != Eigen::Success) {
    throw ConvergenceError("CG stopped after " + std::to_string(cg.iterations()) +
                           " iterations with relative residual " + std::to_string(cg.error()));
  }
  return p.embed(x);
}

BoundaryExtension extend_boundary_data(const DiscreteProblem& p, const std::vector<double>& phi) {
  const int expected = p.manifold.boundary_count();
  if (static_cast<int>(phi.size()) != expected) {
    throw ValidationError("boundary data needs " + std::to_string(expected) + " value(s), got " +
                          std::to_string(phi.size()));
  }
  const CoercivityReport coercivity = coercivity_check(p);
  if (!coercivity.coercive) {
    throw CoercivityError("-div(a grad) + b is not coercive (lambda_min = " + std::to_string(coercivity.lambda_min) +
                          ")");
  }

  BoundaryExtension out;
  Vector g = Vector::Zero(p.node_count());
  for (std::size_t k = 0; k < p.boundary_dofs.size(); ++k) g(p.boundary_dofs[k]) = phi[k];
  if (p.manifold.is_ball() && phi[0] != 0.0) {
    out.note = "a ball has one boundary sphere; constant boundary data cannot change sign";
  }
  if (g.isZero(0.0)) {
    out.h = g;
    return out;
  }
  const Tridiagonal a = p.operator_form();
  const Vector rhs = -p.interior(apply(a, g));
  const TridiagonalLDLT<double> ldlt(interior_block(p, a));
  out.h = g + p.embed(ldlt.solve(rhs));
  return out;
}

EigenPair first_eigenpair(const DiscreteProblem& p, double tol, int max_iter) {
  const Tridiagonal k = interior_block(p, p.stiffness);
  const Tridiagonal m = interior_block(p, p.mass);
  const TridiagonalLDLT<double> ldlt(k);
  if (!ldlt.positive_definite()) throw IndefiniteFormError("stiffness is not positive definite on interior dofs");

  auto m_norm = [&](const Vector& v) { return std::sqrt(bilinear(m, v, v)); };
  Vector x = Vector::Ones(k.size());
  x /= m_norm(x);
  double lambda = bilinear(k, x, x);
  double last_change = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 0; it < max_iter; ++it) {
    Vector y = ldlt.solve(apply(m, x));
    y /= m_norm(y);
    const double next = bilinear(k, y, y);
    const double change = m_norm(y - x);
    const bool value_converged = std::abs(next - lambda) <= tol * next;
    x = std::move(y);
    lambda = next;
    if (value_converged && change <= std::sqrt(tol) * 1e-3) break;
    stalled = change >= last_change ? stalled + 1 : 0;
    if (value_converged && stalled >= 3) break;  // vector change at round-off floor
    last_change = change;
    if (it + 1 == max_iter) throw ConvergenceError("inverse iteration did not converge");
  }
  if (x.sum() < 0.0) x = -x;
  // Perron vector: any negative entries are round-off.
  x = x.cwiseMax(0.0);
  x /= m_norm(x);
  return {bilinear(k, x, x), p.embed(x)};
}

CoercivityReport coercivity_check(const DiscreteProblem& p, double tol) {
  const Tridiagonal a = interior_block(p, p.operator_form());
  const Tridiagonal h = interior_block(p, p.h1_form());
  const RadialManifold& m = p.manifold;

  // A >= min(a) G + min(b) M >= min(min a, min b) (G + M)
  const double a_min = p.coeffs.a.min_on(m.r_min(), m.r_max());
  const double b_min = p.coeffs.b.min_on(m.r_min(), m.r_max());
  double lo = std::min(a_min, b_min);
  lo -= 1e-6 * std::abs(lo) + 1e-12;
  const Vector ones = Vector::Ones(a.size());
  double hi = bilinear(a, ones, ones) / bilinear(h, ones, ones);
  hi += 1e-6 * std::abs(hi) + 1e-12;
  while (count_below(a, h, lo) > 0) lo -= std::max(1.0, std::abs(lo));

  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(a, h, mid) > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double lambda_min = 0.5 * (lo + hi);
  return {lambda_min > tol, lambda_min};
}

}  // namespace yamabe
