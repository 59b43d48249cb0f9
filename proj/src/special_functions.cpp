#include "yamabe/special_functions.hpp"

#include "yamabe/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace yamabe {

double beta_function(double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("Beta function needs positive arguments");
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double aubin_integral(AubinIndex idx) {
  if (!(idx.q > -1.0) || !(idx.p - idx.q - 1.0 > 0.0)) {
    throw DivergentIntegralError("I_p^q diverges for p=" + std::to_string(idx.p) + ", q=" + std::to_string(idx.q) +
                                 " (needs q > -1 and p - q - 1 > 0)");
  }
  // ∫ t^q (1+t)^{-p} dt = B(q+1, p-q-1)
  return beta_function(idx.q + 1.0, idx.p - idx.q - 1.0);
}

double sphere_volume(int n) {
  if (n < 1) throw DomainError("sphere_volume needs n >= 1");
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double best_sobolev_constant(int n) {
  if (n < 3) throw DomainError("best Sobolev constant needs n >= 3");
  const double nd = n;
  return 4.0 / (nd * (nd - 2.0) * std::pow(sphere_volume(n), 2.0 / nd));
}

double critical_exponent(int n) {
  if (n < 3) throw DomainError("critical exponent needs n >= 3");
  return 2.0 * n / (n - 2.0);
}

RecurrenceReport check_aubin_recurrences(double p, double q) {
  const double ip = aubin_integral({p, q});
  const double ip1 = aubin_integral({p + 1.0, q});
  const double ip1q1 = aubin_integral({p + 1.0, q + 1.0});
  return {
      std::abs(ip1 - (p - q - 1.0) / p * ip) / ip1,
      std::abs(ip1q1 - (q + 1.0) / (p - q - 1.0) * ip1) / ip1q1,
  };
}

}  // namespace yamabe
