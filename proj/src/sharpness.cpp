#include <algorithm>
#include <cmath>
#include <random>

#include "spl/harness.hpp"

namespace spl {

namespace {

struct SearchPoint {
  bool pin_left = true;
  std::vector<double> inner;  ///< positions in [0, 1] across the admissible hull
  std::vector<double> outer;  ///< signed offsets in [-1, 1]: side and distance
  MatrixC direction;          ///< coupling direction, rescaled to norm v
};

PerturbationInstance build(const SharpnessConfig& cfg, const SearchPoint& p) {
  const Gap gap{-0.5 * cfg.D, 0.5 * cfg.D};
  const double lo = gap.left + cfg.d;
  const double hi = gap.right - cfg.d;
  std::vector<double> sigma0{p.pin_left ? lo : hi};
  for (double t : p.inner) sigma0.push_back(lo + t * (hi - lo));
  std::vector<double> sigma1{gap.left, gap.right};
  for (double s : p.outer) {
    sigma1.push_back(s < 0.0 ? gap.left + s * cfg.outer_radius : gap.right + s * cfg.outer_radius);
  }
  const double norm = op_norm(p.direction);
  const MatrixC b = norm > 0.0 ? MatrixC(p.direction * cplx(cfg.v / norm))
                               : MatrixC::Zero(cfg.n0, cfg.n1);
  return assemble_instance(sigma0, sigma1, gap, b);
}

/// Rotation norm, or -1 when the inner spectrum has lost an eigenvalue.
double measure(const PerturbationInstance& inst) {
  const PerturbedSplit ps = perturbed_split(inst);
  if (ps.gap_closed) return -1.0;
  return subspace_angle(inst.split.E0, ps.EL0).norm_diff;
}

SearchPoint start_point(const SharpnessConfig& cfg) {
  SearchPoint p;
  p.inner.assign(static_cast<std::size_t>(cfg.n0 - 1), 0.0);
  p.outer.assign(static_cast<std::size_t>(cfg.n1 - 2), -1.0);
  p.direction = MatrixC::Zero(cfg.n0, cfg.n1);
  p.direction(0, 0) = 1.0;
  return p;
}

template <typename Rng>
SearchPoint random_point(const SharpnessConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SearchPoint p;
  p.pin_left = unit(rng) < 0.5;
  for (Index k = 1; k < cfg.n0; ++k) p.inner.push_back(unit(rng));
  for (Index k = 2; k < cfg.n1; ++k) p.outer.push_back(2.0 * unit(rng) - 1.0);
  p.direction = complex_gaussian(cfg.n0, cfg.n1, rng);
  return p;
}

template <typename Rng>
SearchPoint perturb(const SearchPoint& p, double step, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SearchPoint q = p;
  if (unit(rng) < 0.05) q.pin_left = !q.pin_left;
  for (double& t : q.inner) t = std::clamp(t + step * normal(rng), 0.0, 1.0);
  for (double& s : q.outer) s = std::clamp(s + step * normal(rng), -1.0, 1.0);
  const double scale = step * op_norm(q.direction) / std::sqrt(double(q.direction.size()));
  q.direction += cplx(scale) * complex_gaussian(q.direction.rows(), q.direction.cols(), rng);
  return q;
}

}  // namespace

SharpnessResult sharpness_search(const SharpnessConfig& cfg) {
  if (cfg.n0 < 1 || cfg.n1 < 2 || cfg.restarts < 1 || cfg.iters < 0) {
    throw Error(ErrorCode::InfeasibleParams, "need n0 >= 1, n1 >= 2, restarts >= 1, iters >= 0");
  }
  const RegimeFlags flags = regimes(cfg.D, cfg.d, cfg.v);
  if (!flags.domain || !flags.r31) {
    throw Error(ErrorCode::InfeasibleParams, "need 0 < d <= D/2 and 0 <= v < sqrt(d(D-d))");
  }
  if (cfg.n1 > 2 && !(cfg.outer_radius > 0.0)) {
    throw Error(ErrorCode::InfeasibleParams, "outer_radius must be positive when n1 > 2");
  }

  SharpnessResult result;
  result.bound32 = bound_detailed(cfg.D, cfg.d, cfg.v);
  const SearchPoint first = start_point(cfg);
  PerturbationInstance first_inst = build(cfg, first);
  // Both sides vanish at v = 0; the ratio is reported as 0 by convention.
  if (cfg.v == 0.0) {
    result.best = std::move(first_inst);
    result.evaluations = 1;
    return result;
  }

  auto ratio_of = [&](const PerturbationInstance& inst, double& measured) {
    ++result.evaluations;
    measured = measure(inst);
    return measured < 0.0 ? -1.0 : measured / result.bound32;
  };

  std::mt19937_64 rng(cfg.seed);
  double measured = 0.0;
  result.initial_ratio = ratio_of(first_inst, measured);
  result.best_ratio = result.initial_ratio;
  result.best_measured = measured;
  result.best = first_inst;

  for (int r = 0; r < cfg.restarts; ++r) {
    SearchPoint point = r == 0 ? first : random_point(cfg, rng);
    double local = r == 0 ? result.initial_ratio : ratio_of(build(cfg, point), measured);
    for (int it = 0; it < cfg.iters; ++it) {
      const double step = 0.3 * std::pow(1e-3, double(it) / std::max(1, cfg.iters));
      SearchPoint cand = perturb(point, step, rng);
      PerturbationInstance inst = build(cfg, cand);
      const double rc = ratio_of(inst, measured);
      if (rc > local) {
        local = rc;
        point = std::move(cand);
        if (rc > result.best_ratio) {
          result.best_ratio = rc;
          result.best_measured = measured;
          result.best = std::move(inst);
        }
      }
    }
  }
  return result;
}

json to_json(const SharpnessResult& r, const SharpnessConfig& cfg) {
  json j;
  j["config"] = {{"n0", cfg.n0},           {"n1", cfg.n1},     {"D", cfg.D},
                 {"d", cfg.d},             {"v", cfg.v},       {"restarts", cfg.restarts},
                 {"iters", cfg.iters},     {"seed", cfg.seed}, {"outer_radius", cfg.outer_radius}};
  j["bound32"] = r.bound32;
  j["initial_ratio"] = r.initial_ratio;
  j["best_ratio"] = r.best_ratio;
  j["best_measured"] = r.best_measured;
  j["evaluations"] = r.evaluations;
  j["within_bound"] = r.best_ratio <= 1.0 + 1e-9;
  j["best_instance"] = r.best ? instance_to_json(*r.best) : json(nullptr);
  return j;
}

}  // namespace spl
