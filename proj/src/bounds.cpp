#include "spl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spl/error.hpp"

namespace spl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) { return std::to_string(x); }

void require_kappa_domain(double D, double d, double v) {
  if (!(D > 0.0)) throw Error(ErrorCode::DomainViolation, "need D > 0, got D = " + fmt(D));
  if (!(d > 0.0)) throw Error(ErrorCode::DomainViolation, "need d > 0, got d = " + fmt(d));
  if (!(d <= 0.5 * D)) {
    throw Error(ErrorCode::DomainViolation, "need d <= D/2, got d = " + fmt(d) + ", D = " + fmt(D));
  }
  if (!(v >= 0.0)) throw Error(ErrorCode::DomainViolation, "need v >= 0, got v = " + fmt(v));
  if (!(v * v < d * (D - d))) {
    throw Error(ErrorCode::DomainViolation,
                "need v < sqrt(d(D-d)) = " + fmt(std::sqrt(d * (D - d))) + ", got v = " + fmt(v));
  }
}

void require_phi_domain(double a, double d, double v) {
  if (!(a >= 0.0)) throw Error(ErrorCode::DomainViolation, "need a >= 0, got a = " + fmt(a));
  if (!(d > 0.0)) throw Error(ErrorCode::DomainViolation, "need d > 0, got d = " + fmt(d));
  if (!(v >= 0.0) || !(v * v < d * (2.0 * a + d))) {
    throw Error(ErrorCode::DomainViolation,
                "need 0 <= v < sqrt(d(2a+d)) = " + fmt(std::sqrt(d * (2.0 * a + d))) +
                    ", got v = " + fmt(v));
  }
}

}  // namespace

RegimeFlags regimes(double D, double d, double v) {
  RegimeFlags f;
  f.domain = D > 0.0 && d > 0.0 && d <= 0.5 * D && v >= 0.0;
  if (!f.domain) return f;
  f.r12 = v < std::sqrt(2.0) * d;
  f.r29 = v * v < d * D;
  f.r31 = v * v < d * (D - d);
  return f;
}

Flagged r_v_unchecked(double v, double d, double D) {
  const double t = 2.0 * v / (D - d);
  return {v * tan_half_arctan(t), regimes(D, d, v).r29};
}

double r_v(double v, double d, double D) {
  if (!(d > 0.0) || !(d <= 0.5 * D) || !(v >= 0.0)) {
    throw Error(ErrorCode::DomainViolation, "need 0 < d <= D/2 and v >= 0");
  }
  if (!(v * v < d * D)) {
    throw Error(ErrorCode::RegimeViolation,
                "need v < sqrt(d D) = " + fmt(std::sqrt(d * D)) + ", got v = " + fmt(v));
  }
  const double r = r_v_unchecked(v, d, D).value;
  if (!(r < d)) {
    throw Error(ErrorCode::RegimeViolation, "gap-erosion radius " + fmt(r) + " reached d");
  }
  return r;
}

Enclosure enclosure(double gap_left, double gap_right, double d, double v) {
  const double r = r_v(v, d, gap_right - gap_left);
  return {gap_left + (d - r), gap_right - (d - r)};
}

const char* to_string(KappaBranch branch) {
  return branch == KappaBranch::Linear ? "linear" : "full";
}

double kappa_linear_formula(double d, double v) { return 2.0 * v / d; }

double kappa_full_formula(double D, double d, double v) {
  const double num = v * D + std::sqrt(d * (D - d)) * std::sqrt((D - 2.0 * d) * (D - 2.0 * d) + 4.0 * v * v);
  return num / (2.0 * (d * (D - d) - v * v));
}

double kappa_branch_point(double D, double d) { return 0.5 * std::sqrt(std::max(0.0, d * (D - 2.0 * d))); }

Kappa kappa_unchecked(double D, double d, double v) {
  Kappa k;
  k.in_regime = regimes(D, d, v).r31;
  if (v <= kappa_branch_point(D, d)) {
    k.branch = KappaBranch::Linear;
    k.value = kappa_linear_formula(d, v);
  } else {
    k.branch = KappaBranch::Full;
    k.value = d * (D - d) - v * v > 0.0 ? kappa_full_formula(D, d, v) : kInf;
  }
  return k;
}

Kappa kappa(double D, double d, double v) {
  require_kappa_domain(D, d, v);
  return kappa_unchecked(D, d, v);
}

double sin_arctan(double t) {
  if (std::isinf(t)) return 1.0;
  return t / std::sqrt(1.0 + t * t);
}

double tan_half_arctan(double t) {
  // tan(theta/2) = tan(theta) / (1 + sec(theta))
  if (std::isinf(t)) return 1.0;
  return t / (1.0 + std::sqrt(1.0 + t * t));
}

double sin_half_arctan(double t) {
  // sin^2(theta/2) = (1 - cos(theta))/2 = t^2 / (2 s (s + 1)) with s = sqrt(1 + t^2)
  if (std::isinf(t)) return std::sqrt(0.5);
  const double s = std::sqrt(1.0 + t * t);
  return t / std::sqrt(2.0 * s * (s + 1.0));
}

Flagged bound_apriori_unchecked(double v, double d) {
  return {sin_arctan(v / d), d > 0.0 && v >= 0.0 && v < std::sqrt(2.0) * d};
}

double bound_apriori(double v, double d) {
  if (!(d > 0.0) || !(v >= 0.0)) throw Error(ErrorCode::DomainViolation, "need d > 0, v >= 0");
  if (!(v < std::sqrt(2.0) * d)) {
    throw Error(ErrorCode::RegimeViolation,
                "need v < sqrt(2) d = " + fmt(std::sqrt(2.0) * d) + ", got v = " + fmt(v));
  }
  return sin_arctan(v / d);
}

Flagged bound_detailed_unchecked(double D, double d, double v) {
  const Kappa k = kappa_unchecked(D, d, v);
  return {sin_half_arctan(k.value), k.in_regime};
}

double bound_detailed(double D, double d, double v) {
  return sin_half_arctan(kappa(D, d, v).value);
}

double angular_norm_bound(double D, double d, double v) {
  return tan_half_arctan(kappa(D, d, v).value);
}

double phi(double x, double y, double a, double v) {
  const double den = x * x + y * y - a * a - v * v;
  if (!(den > 0.0)) {
    throw Error(ErrorCode::SingularDenominator, "x^2 + y^2 - a^2 - v^2 = " + fmt(den));
  }
  return (v * x + a * y) / den;
}

PhiSup phi_sup_analytic(double a, double d, double v) {
  require_phi_domain(a, d, v);
  const double x = a + d;
  const double c = d * (2.0 * a + d) - v * v;  // x^2 - a^2 - v^2 on the edge x = a + d
  if (v * v <= 0.5 * d * a) {
    return {v / d, x, v, KappaBranch::Linear};
  }
  const double root = std::sqrt(d * (2.0 * a + d)) * std::sqrt(a * a + v * v);
  const double sup = 0.5 * (v * x + root) / c;
  // Positive root of a y^2 + 2 v x y - a c = 0, written without cancellation.
  const double y = a * c / (v * x + root);
  return {sup, x, y, KappaBranch::Full};
}

PhiSup phi_sup_oracle(double a, double d, double v, const PhiGrid& grid) {
  require_phi_domain(a, d, v);
  const double x_lo = a + d;
  const double x_hi = x_lo * grid.x_max_factor + 10.0 * (a + v + d);
  const int nx = std::max(grid.n_x, 2);
  const int ny = v > 0.0 ? std::max(grid.n_y, 2) : 1;
  const double hx = (x_hi - x_lo) / (nx - 1);
  const double hy = ny > 1 ? v / (ny - 1) : 0.0;

  auto value = [&](double x, double y) {
    return (v * x + a * y) / (x * x + y * y - a * a - v * v);
  };

  PhiSup best{value(x_lo, 0.0), x_lo, 0.0, KappaBranch::Full};
  for (int i = 0; i < nx; ++i) {
    const double x = x_lo + i * hx;
    for (int j = 0; j < ny; ++j) {
      const double y = j * hy;
      const double f = value(x, y);
      if (f > best.sup) best = {f, x, y, KappaBranch::Full};
    }
  }

  // Pattern search on a shrinking stencil, clamped to the domain.
  double sx = hx;
  double sy = hy;
  for (int iter = 0; iter < 200 && (sx > 1e-15 * x_lo || sy > 1e-15 * std::max(v, 1e-300)); ++iter) {
    bool moved = false;
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const double x = std::max(x_lo, best.x + 0.5 * i * sx);
        const double y = std::clamp(best.y + 0.5 * j * sy, 0.0, v);
        const double f = value(x, y);
        if (f > best.sup) {
          best = {f, x, y, KappaBranch::Full};
          moved = true;
        }
      }
    }
    if (!moved) {
      sx *= 0.5;
      sy *= 0.5;
    }
  }
  if (best.y >= v) best.branch = KappaBranch::Linear;
  return best;
}

double kappa_max_over_D(double d, double v) {
  if (!(d > 0.0) || !(v >= 0.0) || !(v < d)) {
    throw Error(ErrorCode::DomainViolation, "need 0 <= v < d, got v = " + fmt(v) + ", d = " + fmt(d));
  }
  return 2.0 * v * d / (d * d - v * v);
}

}  // namespace spl
