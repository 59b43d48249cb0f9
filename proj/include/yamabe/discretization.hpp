#pragma once

#include "yamabe/even_polynomial.hpp"
#include "yamabe/model_geometry.hpp"
#include "yamabe/tridiagonal.hpp"

#include <Eigen/Core>

#include <vector>

namespace yamabe {

using Vector = Eigen::VectorXd;
using Tridiagonal = SymTridiagonal<double>;

/// The coefficient functions a, b, f of -div(a∇u) + bu = λ f |u|^{q-2} u.
struct CoefficientField {
  EvenPolynomial a;
  EvenPolynomial b;
  EvenPolynomial f;

  friend bool operator==(const CoefficientField&, const CoefficientField&) = default;
};

/// Throws ValidationError unless a > 0 and f > 0 on [r_min, r_max].
void validate_coefficients(const RadialManifold& m, const CoefficientField& c);

/// Throws ValidationError unless the ball has r_min = 0 and f attains its
/// maximum over the domain at the center.
void validate_center_maximum(const RadialManifold& m, const CoefficientField& c);

class RadialMesh {
 public:
  /// Strictly increasing nodes with at least 8 elements.
  explicit RadialMesh(std::vector<double> nodes);

  static RadialMesh uniform(double r_min, double r_max, int elements);
  /// Elements shrink geometrically toward r_min by `ratio` = h_last / h_first.
  static RadialMesh graded(double r_min, double r_max, int elements, double ratio);

  int elements() const { return static_cast<int>(nodes_.size()) - 1; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  double operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
};

/// Piecewise-linear Galerkin forms on a radial mesh with measure dv_g.
///
/// All element integrals use the same 5-point Gauss rule. Nonlinear terms
/// (the constraint and its gradient) are nodal: ∫ F(u) dv_g ≈ Σ m_i F(u_i)
/// with lumped weights m_i = ∫ φ_i dv_g.
struct DiscreteProblem {
  RadialManifold manifold;
  CoefficientField coeffs;
  RadialMesh mesh;

  Tridiagonal stiffness;  // ∫ a u'v' dv_g
  Tridiagonal mass_b;     // ∫ b u v dv_g
  Tridiagonal gradient;   // ∫ u'v' dv_g     (H¹₀ seminorm)
  Tridiagonal mass;       // ∫ u v dv_g      (L²)
  Vector lumped;          // m_i = ∫ φ_i dv_g
  Vector weight_f;        // f(r_i) m_i
  std::vector<int> boundary_dofs;

  /// Interior unknowns form the contiguous range [first_interior, first_interior + interior_count).
  int first_interior = 0;
  int interior_count = 0;

  int node_count() const { return mesh.node_count(); }
  Tridiagonal operator_form() const { return stiffness + mass_b; }
  /// ‖∇u‖² + ‖u‖² form.
  Tridiagonal h1_form() const { return gradient + mass; }

  Vector interior(const Vector& full) const { return full.segment(first_interior, interior_count); }
  /// Embeds interior values into a full nodal vector with zero boundary values.
  Vector embed(const Vector& interior_values) const;
  bool zero_on_boundary(const Vector& w) const;
};

DiscreteProblem assemble(const RadialManifold& m, const CoefficientField& c, const RadialMesh& mesh);

/// u^T (stiffness + mass_b) u with no boundary requirement.
double quadratic_form(const DiscreteProblem& p, const Vector& u);

/// I(w) = ∫ a|∇w|² + b w². Throws DomainError when w is nonzero on the boundary.
double energy(const DiscreteProblem& p, const Vector& w);

/// ∫ f |w + h|^q dv_g by nodal quadrature; requires 2 < q <= 2♯.
double constraint_value(const DiscreteProblem& p, const Vector& w, const Vector& h, double q);

/// ∫ |u|^q dv_g by the same nodal quadrature (unweighted by f).
double lq_integral(const DiscreteProblem& p, const Vector& u, double q);

/// Throws DomainError unless 2 < q <= 2n/(n-2).
void check_exponent(const RadialManifold& m, double q);

}  // namespace yamabe
