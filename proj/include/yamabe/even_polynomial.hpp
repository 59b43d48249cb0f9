#pragma once

#include <initializer_list>
#include <vector>

namespace yamabe {

/// Radial function c0 + c2 r^2 + c4 r^4. Represents the coefficients a, b, f
/// restricted to radial data.
class EvenPolynomial {
 public:
  EvenPolynomial() = default;
  EvenPolynomial(std::initializer_list<double> coeffs);
  explicit EvenPolynomial(std::vector<double> coeffs);

  static EvenPolynomial constant(double c) { return EvenPolynomial{c}; }

  double operator()(double r) const;
  /// d/dr.
  double derivative(double r) const;

  /// Coefficient of r^{2k}; zero past the stored degree.
  double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }

  /// Exact extrema on [lo, hi] (endpoints plus the interior critical point of
  /// the quadratic in s = r^2).
  double min_on(double lo, double hi) const;
  double max_on(double lo, double hi) const;

  EvenPolynomial scaled(double s) const;

  friend bool operator==(const EvenPolynomial&, const EvenPolynomial&) = default;

 private:
  std::vector<double> c_{0.0};
};

}  // namespace yamabe
