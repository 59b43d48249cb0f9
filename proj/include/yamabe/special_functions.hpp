#pragma once

namespace yamabe {

/// Parameters of I_p^q = ∫_0^∞ t^q (1+t)^{-p} dt; finite iff q > -1 and p - q - 1 > 0.
struct AubinIndex {
  double p;
  double q;
};

/// Beta(x, y) through log-Gamma.
double beta_function(double x, double y);

/// Γ(q+1)Γ(p-q-1)/Γ(p). Throws DivergentIntegralError outside the convergent regime.
double aubin_integral(AubinIndex idx);

/// Volume of the unit n-sphere S^n ⊂ R^{n+1}: 2π^{(n+1)/2}/Γ((n+1)/2).
double sphere_volume(int n);

/// K0 = 4 / (n(n-2) ω_n^{2/n}), the sharp constant in ‖u‖²_{2♯} ≤ K0 ‖∇u‖²₂ on R^n.
double best_sobolev_constant(int n);

/// 2n/(n-2).
double critical_exponent(int n);

struct RecurrenceReport {
  /// |I_{p+1}^q - (p-q-1)/p · I_p^q| / I_{p+1}^q
  double shift_p;
  /// |I_{p+1}^{q+1} - (q+1)/(p-q-1) · I_{p+1}^q| / I_{p+1}^{q+1}
  double shift_pq;
};

/// Evaluates both Aubin recurrences with independently computed sides.
RecurrenceReport check_aubin_recurrences(double p, double q);

}  // namespace yamabe
