#pragma once

// Closed-form a priori bounds on the rotation of the inner spectral subspace
// under an off-diagonal perturbation, with their auxiliary functions.
//
// Notation used throughout:
//   D  gap length, d  distance between the two spectral components,
//   v  norm of the perturbation, a = D/2 - d  half-width of the inner hull
//   once the gap is centred at the origin.

namespace spl {

struct BoundInputs {
  double D = 0.0;
  double d = 0.0;
  double v = 0.0;

  double a() const { return 0.5 * D - d; }
};

/// Which hypotheses hold for (D, d, v).
struct RegimeFlags {
  bool domain = false;  ///< D > 0, 0 < d <= D/2, v >= 0
  bool r12 = false;     ///< v < sqrt(2) d
  bool r29 = false;     ///< v < sqrt(d D)
  bool r31 = false;     ///< v < sqrt(d (D - d))
};

RegimeFlags regimes(double D, double d, double v);

/// A value evaluated outside the hard-checked regime carries in_regime = false.
struct Flagged {
  double value = 0.0;
  bool in_regime = true;
};

/// Gap-erosion radius v tan(arctan(2v / (D - d)) / 2). Requires v < sqrt(d D).
double r_v(double v, double d, double D);
Flagged r_v_unchecked(double v, double d, double D);

struct Enclosure {
  double lower = 0.0;
  double upper = 0.0;
};

/// Interval that must contain the perturbed inner spectrum.
Enclosure enclosure(double gap_left, double gap_right, double d, double v);

enum class KappaBranch { Linear, Full };

const char* to_string(KappaBranch branch);

struct Kappa {
  double value = 0.0;
  KappaBranch branch = KappaBranch::Linear;
  bool in_regime = true;
};

/// Branch formulas without any domain checks; used for continuity tests.
double kappa_linear_formula(double d, double v);
double kappa_full_formula(double D, double d, double v);
/// Branch point 0.5 sqrt(d (D - 2d)).
double kappa_branch_point(double D, double d);

Kappa kappa(double D, double d, double v);
/// Past v = sqrt(d (D - d)) the value is +inf (the bound saturates at sqrt(2)/2).
Kappa kappa_unchecked(double D, double d, double v);

/// sin(arctan t), tan(arctan(t) / 2) and sin(arctan(t) / 2) in forms that stay
/// accurate for both small and large t.
double sin_arctan(double t);
double tan_half_arctan(double t);
double sin_half_arctan(double t);

/// sin(arctan(v / d)), valid for v < sqrt(2) d.
double bound_apriori(double v, double d);
Flagged bound_apriori_unchecked(double v, double d);

/// sin(arctan(kappa(D, d, v)) / 2), valid for v < sqrt(d (D - d)).
double bound_detailed(double D, double d, double v);
Flagged bound_detailed_unchecked(double D, double d, double v);

/// tan of the same half angle: the matching bound on the angular operator norm.
double angular_norm_bound(double D, double d, double v);

/// (v x + a y) / (x^2 + y^2 - a^2 - v^2).
double phi(double x, double y, double a, double v);

struct PhiSup {
  double sup = 0.0;
  double x = 0.0;
  double y = 0.0;
  KappaBranch branch = KappaBranch::Linear;
};

/// Supremum of phi over [a + d, inf) x [0, v]. The maximizer sits on x = a + d;
/// in the full branch y is the stationary point of phi(a + d, .).
PhiSup phi_sup_analytic(double a, double d, double v);

struct PhiGrid {
  double x_max_factor = 4.0;
  int n_x = 2000;
  int n_y = 2000;
};

/// Brute-force grid maximum followed by a shrinking pattern search.
PhiSup phi_sup_oracle(double a, double d, double v, const PhiGrid& grid = {});

/// max over D >= 2d of kappa(D, d, v) = 2 v d / (d^2 - v^2), for v < d.
double kappa_max_over_D(double d, double v);

}  // namespace spl
