#pragma once

#include "yamabe/even_polynomial.hpp"

namespace yamabe {

/// Constant-curvature model manifold restricted to a geodesic ball
/// (r_min = 0) or annulus (r_min > 0) about a center point.
///
/// Sign convention used everywhere in this library: the Laplace-Beltrami
/// operator is the positive one, Δ_g = -div_g(∇). Under it Δ_g r^2 = -2n at
/// the center, which is what the curvature condition H(x0) is written against.
class RadialManifold {
 public:
  /// Throws ValidationError on n < 3, r_max <= r_min, r_min < 0, or, for
  /// kappa > 0, r_max >= π/√kappa.
  RadialManifold(int n, double kappa, double r_min, double r_max);

  int dimension() const { return n_; }
  double kappa() const { return kappa_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  bool is_ball() const { return r_min_ == 0.0; }
  /// 1 for a ball, 2 for an annulus.
  int boundary_count() const { return is_ball() ? 1 : 2; }

  friend bool operator==(const RadialManifold&, const RadialManifold&) = default;

 private:
  int n_;
  double kappa_;
  double r_min_;
  double r_max_;
};

/// sn_κ(r): sin(√κ r)/√κ, r, or sinh(√|κ| r)/√|κ|.
double metric_profile(const RadialManifold& m, double r);

/// Same as metric_profile without the range check; usable past r_max for
/// quadrature on auxiliary domains.
double sn_kappa(double kappa, double r);
/// d/dr sn_κ(r).
double sn_kappa_derivative(double kappa, double r);

/// Normalized sphere average G(r) = (sn_κ(r)/r)^{n-1}; G(0) = 1.
double sphere_average(const RadialManifold& m, double r);

/// R_g = n(n-1)κ.
double scalar_curvature(const RadialManifold& m);

/// Δ_g φ at the center, = -2n·c2. Throws DomainError on an annulus.
double laplace_radial_at_center(const RadialManifold& m, const EvenPolynomial& phi);

/// ω_{n-1} sn_κ(r)^{n-1}: the radial density of dv_g.
double volume_weight(const RadialManifold& m, double r);

/// Riemannian volume of the domain.
double volume(const RadialManifold& m);

}  // namespace yamabe
