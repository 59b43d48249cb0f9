#include "yamabe/model_geometry.hpp"

#include "yamabe/errors.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace yamabe {

RadialManifold::RadialManifold(int n, double kappa, double r_min, double r_max)
    : n_(n), kappa_(kappa), r_min_(r_min), r_max_(r_max) {
  if (n < 3) throw ValidationError("manifold dimension must be >= 3, got " + std::to_string(n));
  if (!std::isfinite(kappa) || !std::isfinite(r_min) || !std::isfinite(r_max)) {
    throw ValidationError("manifold parameters must be finite");
  }
  if (r_min < 0.0) throw ValidationError("r_min must be >= 0");
  if (!(r_max > r_min)) throw ValidationError("r_max must exceed r_min");
  if (kappa > 0.0 && !(r_max < std::numbers::pi / std::sqrt(kappa))) {
    throw ValidationError("r_max must stay below the injectivity radius π/√κ");
  }
}

double sn_kappa(double kappa, double r) {
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    return std::sin(s * r) / s;
  }
  if (kappa < 0.0) {
    const double s = std::sqrt(-kappa);
    return std::sinh(s * r) / s;
  }
  return r;
}

double sn_kappa_derivative(double kappa, double r) {
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * r);
  if (kappa < 0.0) return std::cosh(std::sqrt(-kappa) * r);
  return 1.0;
}

namespace {

void check_range(const RadialManifold& m, double r) {
  if (!(r >= m.r_min() && r <= m.r_max())) {
    throw DomainError("radius " + std::to_string(r) + " outside [" + std::to_string(m.r_min()) + ", " +
                      std::to_string(m.r_max()) + "]");
  }
}

// sn_κ(r)/r without cancellation near r = 0.
double sinc_kappa(double kappa, double r) {
  const double x = kappa * r * r;
  if (std::abs(x) < 1e-4) {
    // sin(z)/z = 1 - z²/6 + z⁴/120 - z⁶/5040, z² = κ r²
    return 1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0;
  }
  return sn_kappa(kappa, r) / r;
}

}  // namespace

double metric_profile(const RadialManifold& m, double r) {
  check_range(m, r);
  return sn_kappa(m.kappa(), r);
}

double sphere_average(const RadialManifold& m, double r) {
  check_range(m, r);
  return std::pow(sinc_kappa(m.kappa(), r), m.dimension() - 1);
}

double scalar_curvature(const RadialManifold& m) {
  const double n = m.dimension();
  return n * (n - 1.0) * m.kappa();
}

double laplace_radial_at_center(const RadialManifold& m, const EvenPolynomial& phi) {
  if (!m.is_ball()) throw DomainError("center not in domain: annulus has r_min > 0");
  return -2.0 * m.dimension() * phi.coeff(1);
}

double volume_weight(const RadialManifold& m, double r) {
  check_range(m, r);
  return sphere_volume(m.dimension() - 1) * std::pow(sn_kappa(m.kappa(), r), m.dimension() - 1);
}

double volume(const RadialManifold& m) {
  constexpr int panels = 64;
  const double h = (m.r_max() - m.r_min()) / panels;
  const double omega = sphere_volume(m.dimension() - 1);
  double v = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = m.r_min() + k * h;
    v += quadrature::gauss<10>(lo, lo + h, [&](double r) { return std::pow(sn_kappa(m.kappa(), r), m.dimension() - 1); });
  }
  return omega * v;
}

}  // namespace yamabe
