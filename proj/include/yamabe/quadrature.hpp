#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cstddef>

namespace yamabe::quadrature {

/// Gauss-Legendre rule with Points nodes mapped to [lo, hi]; calls
/// f(x, w) for each node/weight pair.
template <std::size_t Points, typename F>
void for_each_gauss_node(double lo, double hi, F&& f) {
  using rule = boost::math::quadrature::gauss<double, Points>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  // Boost stores the non-negative half of the symmetric rule.
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      f(mid, w[i] * half);
    } else {
      f(mid - half * x[i], w[i] * half);
      f(mid + half * x[i], w[i] * half);
    }
  }
}

template <std::size_t Points, typename F>
double gauss(double lo, double hi, F&& f) {
  double sum = 0.0;
  for_each_gauss_node<Points>(lo, hi, [&](double x, double w) { sum += w * f(x); });
  return sum;
}

}  // namespace yamabe::quadrature
