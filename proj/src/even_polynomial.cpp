#include "yamabe/even_polynomial.hpp"

#include "yamabe/errors.hpp"

#include <algorithm>
#include <cmath>

namespace yamabe {

namespace {

void check(const std::vector<double>& c) {
  if (c.empty() || c.size() > 3) {
    throw ValidationError("even polynomial needs 1 to 3 coefficients (c0, c2, c4)");
  }
  for (double v : c) {
    if (!std::isfinite(v)) throw ValidationError("even polynomial coefficient is not finite");
  }
}

}  // namespace

EvenPolynomial::EvenPolynomial(std::initializer_list<double> coeffs) : c_(coeffs) { check(c_); }

EvenPolynomial::EvenPolynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { check(c_); }

double EvenPolynomial::operator()(double r) const {
  const double s = r * r;
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * s + *it;
  return v;
}

double EvenPolynomial::derivative(double r) const {
  // d/dr Σ c_k r^{2k} = Σ 2k c_k r^{2k-1}
  const double s = r * r;
  double v = 0.0;
  for (std::size_t k = c_.size() - 1; k >= 1; --k) {
    v = v * s + 2.0 * static_cast<double>(k) * c_[k];
  }
  return v * r;
}

double EvenPolynomial::min_on(double lo, double hi) const {
  double best = std::min((*this)(lo), (*this)(hi));
  // p(s) = c0 + c2 s + c4 s^2, critical point s* = -c2 / (2 c4).
  if (coeff(2) != 0.0) {
    const double s = -coeff(1) / (2.0 * coeff(2));
    if (s > lo * lo && s < hi * hi) best = std::min(best, (*this)(std::sqrt(s)));
  }
  return best;
}

double EvenPolynomial::max_on(double lo, double hi) const { return -scaled(-1.0).min_on(lo, hi); }

EvenPolynomial EvenPolynomial::scaled(double s) const {
  std::vector<double> c = c_;
  for (double& v : c) v *= s;
  return EvenPolynomial(std::move(c));
}

}  // namespace yamabe
