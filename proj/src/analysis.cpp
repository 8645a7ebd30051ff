#include <algorithm>
#include <cmath>
#include <limits>

#include "spl/harness.hpp"

namespace spl {

namespace {

double ratio(double measured, double bound) {
  if (bound > 0.0) return measured / bound;
  return measured == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

BoundReport assemble_bounds(double measured, const Gap& gap, double d, double v,
                            const std::vector<double>& omega0, const Tolerances& tol) {
  BoundReport r;
  r.D = gap.length();
  r.d = d;
  r.v = v;
  r.measured = measured;
  r.flags = regimes(r.D, d, v);
  if (r.flags.r12) {
    r.bound13 = bound_apriori(v, d);
    r.ratio13 = ratio(measured, *r.bound13);
    r.bound13_ok = measured <= *r.bound13 + tol.bound;
  }
  if (r.flags.r31) {
    r.kappa = kappa(r.D, d, v);
    r.bound32 = sin_half_arctan(r.kappa->value);
    r.ratio32 = ratio(measured, *r.bound32);
    r.bound32_ok = measured <= *r.bound32 + tol.bound;
  }
  if (r.flags.r29) {
    r.r_V = r_v(v, d, r.D);
    r.enclosure = enclosure(gap.left, gap.right, d, v);
    const double slack = tol.enclosure * std::max({1.0, std::abs(gap.left), std::abs(gap.right)});
    for (double w : omega0) {
      if (w < r.enclosure->lower - slack || w > r.enclosure->upper + slack) r.enclosure_ok = false;
    }
  }
  return r;
}

AnalysisReport analyze_instance(const PerturbationInstance& inst, const Tolerances& tol) {
  AnalysisReport rep;
  rep.n0 = inst.n0();
  rep.n1 = inst.n1();
  rep.sigma0 = inst.split.sigma0;
  rep.sigma1 = inst.split.sigma1;
  rep.gap = inst.split.gap;
  const double norm_sum = inst.A.norm() + inst.v;
  rep.scale = norm_sum * norm_sum;

  const PerturbedSplit ps = perturbed_split(inst);
  rep.omega0 = ps.omega0;
  rep.omega1 = ps.omega1;
  rep.gap_closed = ps.gap_closed;

  const RegimeFlags flags = regimes(inst.split.gap_len, inst.split.d, inst.v);
  if (ps.gap_closed) {
    if (!flags.r29) {
      throw Error(ErrorCode::RankMismatch, "inner eigenvalue count " +
                                               std::to_string(ps.omega0.size()) + " differs from n0 = " +
                                               std::to_string(inst.n0()));
    }
    const double measured = subspace_angle(inst.split.E0, ps.EL0).norm_diff;
    rep.bounds = assemble_bounds(measured, rep.gap, inst.split.d, inst.v, ps.omega0, tol);
    rep.bound_violations.push_back("gap closed although v < sqrt(d |gap|)");
    return rep;
  }

  const RiccatiSolution sol = angular_operator(inst, ps);
  rep.X = sol.X;
  rep.mu = sol.mu;
  rep.riccati_residual = sol.riccati_residual;
  rep.cond_Y0 = sol.cond_Y0;
  {
    const MatrixC herm = (sol.Lambda0 + sol.Lambda0.adjoint()) / cplx(2.0);
    const VectorR ev = eigh(HermitianOp(herm)).values;
    rep.lambda0_spectrum.assign(ev.data(), ev.data() + ev.size());
  }
  rep.identities = lemma22_check(sol, inst);
  for (const auto& id : rep.identities) {
    rep.lemma26_max = std::max(rep.lemma26_max, id.res26);
    rep.lemma27_max = std::max(rep.lemma27_max, id.res27);
  }
  rep.graph = verify_graph_props(sol, inst, ps);
  rep.bounds = assemble_bounds(rep.graph.measured, rep.gap, inst.split.d, inst.v, ps.omega0, tol);

  const BoundReport& b = rep.bounds;
  if (!b.bound13_ok) rep.bound_violations.push_back("a priori tan-theta bound exceeded");
  if (!b.bound32_ok) rep.bound_violations.push_back("detailed (gap-length) bound exceeded");
  if (!b.enclosure_ok) rep.bound_violations.push_back("perturbed inner spectrum leaves its enclosure");
  if (flags.r31 && !(sol.mu < 1.0)) rep.bound_violations.push_back("||X|| >= 1 under v < sqrt(d(D-d))");
  if (flags.r31 && !(rep.graph.measured < std::sqrt(0.5))) {
    rep.bound_violations.push_back("rotation reaches pi/4 under v < sqrt(d(D-d))");
  }

  const double spectra_tol = tol.spectra * std::max(1.0, norm_sum);
  if (sol.riccati_residual > tol.riccati_rel * rep.scale) {
    rep.identity_violations.push_back("Riccati residual");
  }
  if (rep.graph.angle_residual > tol.angle) rep.identity_violations.push_back("norm-angle relation");
  if (rep.graph.graph1_residual > tol.angle) {
    rep.identity_violations.push_back("outer subspace is not the graph of -X^*");
  }
  if (rep.graph.spec0_residual > spectra_tol || rep.graph.spec1_residual > spectra_tol) {
    rep.identity_violations.push_back("block spectra differ from the perturbed split");
  }
  if (rep.graph.lambda0_hermitian_residual > spectra_tol ||
      rep.graph.lambda0_spec_residual > spectra_tol) {
    rep.identity_violations.push_back("Lambda0 not self-adjoint with spectrum omega0");
  }
  if (std::max(rep.lemma26_max, rep.lemma27_max) > tol.lemma_rel * rep.scale) {
    rep.identity_violations.push_back("|X| eigenpair identities");
  }
  return rep;
}

json to_json(const AnalysisReport& r) {
  json j;
  j["n0"] = r.n0;
  j["n1"] = r.n1;
  j["gap"] = {r.gap.left, r.gap.right};
  j["sigma0"] = r.sigma0;
  j["sigma1"] = r.sigma1;
  j["omega0"] = r.omega0;
  j["omega1"] = r.omega1;
  j["gap_closed"] = r.gap_closed;
  j["D"] = r.bounds.D;
  j["d"] = r.bounds.d;
  j["v"] = r.bounds.v;
  j["scale"] = r.scale;
  j["X"] = r.X.size() ? matrix_to_json(r.X) : json(nullptr);
  j["mu"] = r.mu;
  j["riccati_residual"] = r.riccati_residual;
  j["cond_Y0"] = r.cond_Y0;
  j["lambda0_spectrum"] = r.lambda0_spectrum;
  json ids = json::array();
  for (const auto& id : r.identities) {
    ids.push_back({{"lambda", id.lambda},
                   {"res26", id.res26},
                   {"res27", id.res27},
                   {"cross_imag", id.cross_imag},
                   {"top", id.top}});
  }
  j["identities"] = std::move(ids);
  j["lemma26_max"] = r.lemma26_max;
  j["lemma27_max"] = r.lemma27_max;
  j["graph"] = {{"measured", r.graph.measured},
                {"predicted", r.graph.predicted},
                {"angle_residual", r.graph.angle_residual},
                {"graph1_residual", r.graph.graph1_residual},
                {"spec0_residual", r.graph.spec0_residual},
                {"spec1_residual", r.graph.spec1_residual},
                {"lambda0_hermitian_residual", r.graph.lambda0_hermitian_residual},
                {"lambda0_spec_residual", r.graph.lambda0_spec_residual}};
  const BoundReport& b = r.bounds;
  j["measured"] = b.measured;
  j["bound13"] = optional_number(b.bound13);
  j["bound32"] = optional_number(b.bound32);
  j["kappa"] = b.kappa ? json(b.kappa->value) : json(nullptr);
  j["kappa_branch"] = b.kappa ? json(to_string(b.kappa->branch)) : json(nullptr);
  j["r_V"] = optional_number(b.r_V);
  j["enclosure"] = b.enclosure ? json{b.enclosure->lower, b.enclosure->upper} : json(nullptr);
  j["enclosure_ok"] = b.enclosure_ok;
  j["ratio13"] = optional_number(b.ratio13);
  j["ratio32"] = optional_number(b.ratio32);
  j["regimes"] = {{"regime12", b.flags.r12}, {"regime29", b.flags.r29}, {"regime31", b.flags.r31}};
  j["bound_violations"] = r.bound_violations;
  j["identity_violations"] = r.identity_violations;
  return j;
}

}  // namespace spl
