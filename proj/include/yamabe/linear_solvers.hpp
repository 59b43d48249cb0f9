#pragma once

#include "yamabe/discretization.hpp"

#include <optional>
#include <string>

namespace yamabe {

enum class Form {
  stiffness,  // ∫ a u'v'
  operator_,  // ∫ a u'v' + b u v
  h1,         // ∫ u'v' + u v
  l2_mass,    // ∫ u v
};

Tridiagonal form_matrix(const DiscreteProblem& p, Form form);

enum class SpdMethod { conjugate_gradient, direct };

/// Solves the Dirichlet problem form(x, v) = rhs(v) for all interior v, with
/// x = 0 on the boundary. The form is checked for definiteness on the
/// interior first (IndefiniteFormError). CG failures raise ConvergenceError.
Vector solve_spd(const DiscreteProblem& p, Form form, const Vector& rhs, double tol,
                 SpdMethod method = SpdMethod::conjugate_gradient);

struct BoundaryExtension {
  Vector h;
  /// Set when the request cannot do what the caller might expect, e.g.
  /// sign-changing data on a ball with a single boundary sphere.
  std::optional<std::string> note;
};

/// h with -div(a∇h) + bh = 0 inside and h = φ on the boundary spheres
/// (one value for a ball, inner then outer for an annulus).
BoundaryExtension extend_boundary_data(const DiscreteProblem& p, const std::vector<double>& phi);

struct EigenPair {
  double eigenvalue;
  Vector eigenvector;  // zero on the boundary, ∫ψ² dv_g = 1, nonnegative
};

/// Smallest eigenpair of (stiffness, L² mass) on interior dofs.
EigenPair first_eigenpair(const DiscreteProblem& p, double tol = 1e-12, int max_iter = 10000);

struct CoercivityReport {
  bool coercive;
  double lambda_min;
};

/// Smallest generalized eigenvalue of (stiffness + mass_b, h1_form) on interior dofs.
CoercivityReport coercivity_check(const DiscreteProblem& p, double tol = 1e-8);

}  // namespace yamabe
