#pragma once

// Independent reference computations used by the unit and acceptance suites.
// None of these reuse the library code path they are checking.

#include "yamabe/discretization.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// ∫_0^∞ t^q (1+t)^{-p} dt as ∫_0^1 t^q (1+t)^{-p} dt + ∫_0^1 s^{p-q-2} (1+s)^{-p} ds
/// (t = 1/s on the second half). tanh-sinh absorbs the algebraic endpoint
/// singularities when q < 0 or p - q < 2.
inline double aubin_quadrature(double p, double q) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto near = [=](double t) { return std::pow(t, q) * std::pow(1.0 + t, -p); };
  auto far = [=](double s) { return std::pow(s, p - q - 2.0) * std::pow(1.0 + s, -p); };
  return ts.integrate(near, 0.0, 1.0, 1e-15) + ts.integrate(far, 0.0, 1.0, 1e-15);
}

/// ∫ ω_{n-1} sn_κ(r)^{n-1} dr over [lo, hi] by adaptive Gauss-Kronrod, with
/// sn_κ written out independently of the library.
inline double volume(int n, double kappa, double lo, double hi) {
  const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  auto sn = [=](double r) {
    if (kappa > 0) return std::sin(std::sqrt(kappa) * r) / std::sqrt(kappa);
    if (kappa < 0) return std::sinh(std::sqrt(-kappa) * r) / std::sqrt(-kappa);
    return r;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double r) { return area * std::pow(sn(r), n - 1); }, lo, hi, 20, 1e-14);
}

/// Δ_g φ at the center for radial φ = c0 + c2 r² + c4 r⁴, from centered finite
/// differences of -(φ'' + (n-1)(sn'/sn) φ') at r and r/2, Richardson
/// extrapolated to r = 0.
inline double fd_laplacian_at_center(int n, double kappa, double c0, double c2, double c4, double r = 1e-2) {
  auto phi = [=](double x) { return c0 + c2 * x * x + c4 * x * x * x * x; };
  auto cot = [=](double x) {
    if (kappa > 0) return std::sqrt(kappa) / std::tan(std::sqrt(kappa) * x);
    if (kappa < 0) return std::sqrt(-kappa) / std::tanh(std::sqrt(-kappa) * x);
    return 1.0 / x;
  };
  auto lap = [&](double x) {
    const double h = 0.1 * x;  // h ∝ x keeps the difference error inside the extrapolated series
    const double d1 = (phi(x + h) - phi(x - h)) / (2 * h);
    const double d2 = (phi(x + h) - 2 * phi(x) + phi(x - h)) / (h * h);
    return -(d2 + (n - 1) * cot(x) * d1);
  };
  return (4.0 * lap(0.5 * r) - lap(r)) / 3.0;
}

/// Dense representation of a symmetric tridiagonal matrix.
inline Eigen::MatrixXd dense(const yamabe::Tridiagonal& t) {
  const Eigen::Index n = t.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = t.diag(i);
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = t.off(i);
  }
  return m;
}

/// Textbook Thomas elimination, kept separate from the library's LDLᵀ.
inline Eigen::VectorXd thomas(const yamabe::Tridiagonal& t, Eigen::VectorXd rhs) {
  const Eigen::Index n = t.size();
  Eigen::VectorXd c(n), d = t.diag;
  for (Eigen::Index i = 0; i + 1 < n; ++i) c(i) = t.off(i);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double w = c(i - 1) / d(i - 1);
    d(i) -= w * c(i - 1);
    rhs(i) -= w * rhs(i - 1);
  }
  Eigen::VectorXd x(n);
  x(n - 1) = rhs(n - 1) / d(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) = (rhs(i) - c(i) * x(i + 1)) / d(i);
  return x;
}

/// Smallest eigenvalue of the dense pencil (A, B) by Eigen's generalized
/// self-adjoint solver.
inline double smallest_generalized_eigenvalue(const yamabe::Tridiagonal& a, const yamabe::Tridiagonal& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a), dense(b), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Brute-force minimum of the scale-invariant quotient
///   R(w) = wᵀ K w / (Σ m_i |w_i|^q)^{2/q}
/// over interior nodal vectors: random starts followed by cyclic coordinate
/// descent with golden-section line searches. Returns min R; the constrained
/// minimum at level γ is γ^{2/q} min R when h = 0 and f = 1.
struct BruteForceResult {
  double quotient;
  int sweeps;
};

inline BruteForceResult brute_force_quotient(const yamabe::Tridiagonal& k, const Eigen::VectorXd& m, double q,
                                             int starts, unsigned seed, int max_sweeps = 20000) {
  const Eigen::Index n = k.size();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BruteForceResult best{std::numeric_limits<double>::infinity(), 0};
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = 0.1 + unit(rng);
    Eigen::VectorXd kw = dense(k) * w;
    double num = w.dot(kw);
    double den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) den += m(i) * std::pow(std::abs(w(i)), q);
    auto quotient = [&](double nm, double dn) { return nm / std::pow(dn, 2.0 / q); };
    double current = quotient(num, den);
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
      const double before = current;
      for (Eigen::Index i = 0; i < n; ++i) {
        // Along w + t e_i: num(t) = num + 2t (Kw)_i + t² K_ii, den(t) changes in one term.
        const double wi = w(i);
        const double base_den = den - m(i) * std::pow(std::abs(wi), q);
        auto along = [&](double x) {
          const double t = x - wi;
          const double nm = num + 2 * t * kw(i) + t * t * k.diag(i);
          return quotient(nm, base_den + m(i) * std::pow(std::abs(x), q));
        };
        const double span = 0.5 * std::abs(wi) + 1e-3 * w.cwiseAbs().maxCoeff();
        double lo = wi - span, hi = wi + span;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = along(x1), f2 = along(x2);
        for (int it = 0; it < 80; ++it) {
          if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = along(x1);
          } else {
            lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = along(x2);
          }
        }
        const double x = 0.5 * (lo + hi);
        if (along(x) < along(wi)) {
          const double t = x - wi;
          num += 2 * t * kw(i) + t * t * k.diag(i);
          kw(i) += t * k.diag(i);
          if (i > 0) kw(i - 1) += t * k.off(i - 1);
          if (i + 1 < n) kw(i + 1) += t * k.off(i);
          den = base_den + m(i) * std::pow(std::abs(x), q);
          w(i) = x;
        }
      }
      current = quotient(num, den);
      if (before - current <= 1e-15 * current) break;
    }
    if (current < best.quotient) best = {current, sweep};
  }
  return best;
}

}  // namespace oracle
