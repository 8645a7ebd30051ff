// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spl/harness.hpp"

using namespace spl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream os;
      os << what << ": got " << format_double(got) << ", want " << format_double(want) << " +- " << tol;
      failures_.push_back(os.str());
    }
  }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome finish(const Check& c, const std::string& summary) {
  if (c.ok()) return {true, summary};
  std::string d = summary;
  for (std::size_t k = 0; k < c.failures().size() && k < 5; ++k) d += "\n      " + c.failures()[k];
  if (c.failures().size() > 5) d += "\n      ... " + std::to_string(c.failures().size() - 5) + " more";
  return {false, d};
}

PerturbationInstance golden() {
  MatrixC b(1, 2);
  b << 0.5, 0.0;
  return assemble_instance({0.0}, {-1.0, 1.0}, {-1.0, 1.0}, b);
}

/// Shared by the campaign and determinism criteria.
CampaignConfig campaign_config(int parallel) {
  CampaignConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 20260101;
  cfg.n0_min = 1;
  cfg.n0_max = 20;
  cfg.n1_min = 2;
  cfg.n1_max = 20;
  cfg.gap = {-1.0, 1.0};
  cfg.gap_scale_min = 0.25;
  cfg.gap_scale_max = 4.0;
  cfg.d_fraction = std::make_pair(0.05, 1.0);
  cfg.outer_radius = 2.0;
  cfg.regime = Regime::Mixed;
  cfg.v_fraction = 0.999;
  cfg.random_v_fraction = true;
  cfg.conjugate = true;
  cfg.parallel = parallel;
  return cfg;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Check c;
  const auto inst = golden();
  const AnalysisReport r = analyze_instance(inst);
  const double s2 = std::sqrt(2.0);
  const double tol = 1e-8;
  c.expect(r.omega0.size() == 1, "one inner eigenvalue");
  if (!r.omega0.empty()) c.near(r.omega0[0], (s2 - 1) / 2, tol, "omega0");
  c.expect(r.X.rows() == 2 && r.X.cols() == 1, "X is 2x1");
  if (r.X.size() == 2) {
    c.near(std::abs(r.X(0, 0) - cplx(s2 - 1)), 0.0, tol, "X(0)");
    c.near(std::abs(r.X(1, 0)), 0.0, tol, "X(1)");
  }
  c.near(r.mu, 0.41421356, tol, "mu");
  c.near(r.bounds.measured, 0.38268343, tol, "measured");
  c.expect(r.bounds.r_V && r.bounds.enclosure && r.bounds.bound13 && r.bounds.bound32, "bounds present");
  if (r.bounds.r_V) c.near(*r.bounds.r_V, 0.20710678, tol, "r_V");
  if (r.bounds.enclosure && !r.omega0.empty()) {
    c.near(r.bounds.enclosure->upper, 0.20710678, tol, "enclosure upper");
    c.near(r.omega0[0], r.bounds.enclosure->upper, 1e-15, "upper edge attained");
  }
  if (r.bounds.bound13) c.near(*r.bounds.bound13, 0.44721360, tol, "bound13");
  if (r.bounds.bound32) c.near(*r.bounds.bound32, 0.44721360, tol, "bound32");
  c.expect(r.riccati_residual < 1e-12, "Riccati residual < 1e-12");
  c.expect(r.lemma26_max < 1e-12, "identity (weighted) residual < 1e-12");
  c.expect(r.lemma27_max < 1e-12, "identity (Lambda0) residual < 1e-12");
  c.expect(r.clean(), "report clean");
  std::ostringstream os;
  os << "mu=" << format_double(r.mu) << " measured=" << format_double(r.bounds.measured)
     << " riccati=" << r.riccati_residual << " lemma=" << std::max(r.lemma26_max, r.lemma27_max);
  return finish(c, os.str());
}

Outcome criterion2() {
  Check c;
  const double tol = 1e-12;
  c.near(kappa(2.0, 1.0, 0.5).value, 4.0 / 3.0, tol, "kappa(2,1,0.5)");
  c.near(kappa(4.0, 1.0, 0.5).value, 1.0, tol, "kappa(4,1,0.5)");
  const double vb = std::sqrt(2.0) / 2;
  const double lin = kappa_linear_formula(1.0, vb);
  const double full = kappa_full_formula(4.0, 1.0, vb);
  c.near(lin, std::sqrt(2.0), tol, "kappa(4,1,sqrt2/2) linear");
  c.near(full, std::sqrt(2.0), tol, "kappa(4,1,sqrt2/2) full");
  c.near(lin, full, tol, "branch continuity");
  c.near(kappa(4.0, 1.0, vb).value, std::sqrt(2.0), tol, "kappa(4,1,sqrt2/2)");
  const double km = kappa_max_over_D(1.0, 0.5);
  c.near(km, 4.0 / 3.0, tol, "kappa_max_over_D(1,0.5)");
  c.near(km, kappa(2.0, 1.0, 0.5).value, tol, "max equals kappa(2d,d,v)");
  c.near(sin_half_arctan(km), bound_apriori(0.5, 1.0), tol, "maps to the a priori bound");
  return finish(c, "kappa(2,1,.5)=" + format_double(kappa(2.0, 1.0, 0.5).value));
}

Outcome criterion3() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_rel = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double d = 0.1 + 2.0 * u(rng);
    const double a = 3.0 * u(rng);
    const double v = (0.01 + 0.98 * u(rng)) * std::sqrt(d * (2 * a + d));
    const double an = phi_sup_analytic(a, d, v).sup;
    const double orc = phi_sup_oracle(a, d, v).sup;
    const double rel = std::abs(orc - an) / an;
    worst_rel = std::max(worst_rel, rel);
    c.expect(rel <= 1e-4, "oracle point " + std::to_string(k));
  }
  double worst_consistency = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double d = 0.1 + 2.0 * u(rng);
    const double a = 3.0 * u(rng);
    const double v = u(rng) * std::sqrt(d * (2 * a + d));
    const double lhs = 2.0 * phi_sup_analytic(a, d, v).sup;
    const double rhs = kappa(2.0 * (a + d), d, v).value;
    const double rel = std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs));
    if (rhs > 0.0) worst_consistency = std::max(worst_consistency, rel);
    c.expect(rhs == 0.0 ? lhs == 0.0 : rel <= 1e-12, "consistency point " + std::to_string(k));
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 60.0, "runtime under 60 s");
  std::ostringstream os;
  os << "max oracle rel " << worst_rel << ", max consistency rel " << worst_consistency << ", " << secs << " s";
  return finish(c, os.str());
}

struct CampaignRun {
  CampaignReport report;
  double seconds;
};

Outcome criterion4(const CampaignRun& run) {
  Check c;
  const CampaignAggregates& a = run.report.aggregates;
  c.expect(a.trials == 10000, "10000 trials");
  c.expect(a.bound_violations == 0, std::to_string(a.bound_violations) + " bound violations");
  c.expect(a.identity_violations == 0, std::to_string(a.identity_violations) + " identity violations");
  c.expect(a.structural_failures == 0, std::to_string(a.structural_failures) + " structural failures");
  int r12 = 0, r31 = 0, enc = 0, regime_a = 0, regime_b = 0;
  Index max_n0 = 0, max_n1 = 0;
  double max_angle_res = 0.0;
  for (const auto& r : run.report.records) {
    max_n0 = std::max(max_n0, r.n0);
    max_n1 = std::max(max_n1, r.n1);
    regime_a += r.regime == Regime::A;
    regime_b += r.regime == Regime::B;
    if (r.bound13) {
      ++r12;
      c.expect(r.measured <= *r.bound13 + 1e-9, "tan bound at trial " + std::to_string(r.index));
    }
    if (r.bound32) {
      ++r31;
      c.expect(r.measured <= *r.bound32 + 1e-9, "detailed bound at trial " + std::to_string(r.index));
    }
    if (r.r_V) ++enc;
    c.expect(r.enclosure_ok, "enclosure at trial " + std::to_string(r.index));
    c.expect(r.riccati_residual <= 1e-8 * r.scale, "Riccati residual at trial " + std::to_string(r.index));
    c.expect(r.angle_residual <= 1e-8, "norm-angle relation at trial " + std::to_string(r.index));
    max_angle_res = std::max(max_angle_res, r.angle_residual);
  }
  c.expect(r31 == a.trials && enc == a.trials, "every trial carries the detailed bound and the enclosure");
  c.expect(regime_a > 0 && regime_b > 0, "both regimes sampled");
  c.expect(max_n0 <= 20 && max_n1 <= 20, "block sizes within 20");
  c.expect(run.seconds <= 300.0, "single-threaded runtime within 5 minutes");
  std::ostringstream os;
  os << a.trials << " trials (A " << regime_a << ", B " << regime_b << "; tan bound checked on " << r12
     << "), max n0/n1 " << max_n0 << "/" << max_n1 << ", max ratio13 " << a.max_ratio13 << ", max ratio32 "
     << a.max_ratio32 << ", max Riccati rel " << a.max_riccati_rel << ", max angle residual "
     << max_angle_res << ", " << run.seconds << " s single-threaded";
  return finish(c, os.str());
}

Outcome criterion5() {
  Check c;
  CampaignConfig cfg = campaign_config(static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  cfg.trials = 1000;
  cfg.seed = 555;
  const CampaignReport rep = run_campaign(cfg);
  int covered = 0;
  double worst = 0.0;
  for (const auto& r : rep.records) {
    c.expect(r.status != TrialStatus::NotAGraph && r.status != TrialStatus::EigenFailure,
             "structural failure at trial " + std::to_string(r.index));
    if (!r.bound32) continue;  // outside the strongest hypothesis
    ++covered;
    const double rel = std::max(r.lemma26_max, r.lemma27_max) / r.scale;
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-9, "identity residual at trial " + std::to_string(r.index));
  }
  c.expect(covered == 1000, "all 1000 instances under the strongest hypothesis");
  std::ostringstream os;
  os << covered << " instances, max residual / (||A||+||V||)^2 = " << worst;
  return finish(c, os.str());
}

Outcome criterion6() {
  Check c;
  CampaignConfig cfg = campaign_config(1);
  cfg.seed = 606;
  cfg.n0_max = 8;
  cfg.n1_max = 8;
  cfg.gap = {0.5, 3.0};  // off-centre, so the shift is nontrivial
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto inst = trial_instance(cfg, k);
    const double cshift = inst.split.gap.center();
    const auto sh = shifted(inst, cshift);
    const MatrixC x = angular_operator(inst, perturbed_split(inst)).X;
    const MatrixC xs = angular_operator(sh, perturbed_split(sh)).X;
    const double diff = op_norm(MatrixC(x - xs));
    worst = std::max(worst, diff);
    c.expect(diff <= 1e-8, "shift at instance " + std::to_string(k));
  }
  std::ostringstream os;
  os << "100 instances, max ||X(A) - X(A - cI)|| = " << worst;
  return finish(c, os.str());
}

Outcome criterion7(const CampaignRun& run) {
  Check c;
  int n = 0;
  double max_mu = 0.0, max_measured = 0.0;
  auto scan = [&](const CampaignReport& rep) {
    for (const auto& r : rep.records) {
      if (!r.bound32) continue;
      ++n;
      max_mu = std::max(max_mu, r.mu);
      max_measured = std::max(max_measured, r.measured);
      c.expect(r.mu < 1.0, "mu < 1 at trial " + std::to_string(r.index));
      c.expect(r.measured < std::sqrt(0.5), "measured < sqrt(2)/2 at trial " + std::to_string(r.index));
    }
  };
  scan(run.report);
  // push v right up to the boundary of the strongest hypothesis
  CampaignConfig edge = campaign_config(static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  edge.trials = 1000;
  edge.seed = 777;
  edge.regime = Regime::B;
  edge.random_v_fraction = false;
  edge.v_fraction = 0.9999;
  scan(run_campaign(edge));
  std::ostringstream os;
  os << n << " in-regime trials, max mu " << max_mu << ", max measured " << max_measured;
  return finish(c, os.str());
}

Outcome criterion8() {
  Check c;
  std::mt19937_64 rng(888);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> n0d(1, 10);
  std::uniform_int_distribution<int> n1d(2, 10);
  double min_sep = INFINITY;
  double max_frac = 0.0;
  for (int k = 0; k < 1000; ++k) {
    RandomInstanceParams p;
    p.n0 = n0d(rng);
    p.n1 = n1d(rng);
    const double half = 0.25 + 2.0 * u(rng);
    p.gap = {-half, half};
    p.d = (0.05 + 0.95 * u(rng)) * half;
    p.outer_radius = 2.0;
    p.pin_side = u(rng) < 0.5 ? PinSide::Left : PinSide::Right;
    p.conjugate = u(rng) < 0.5;
    // sweep the fraction of sqrt(d |gap|) across the instances, up to 0.999
    const double frac = 0.999 * (k + 1) / 1000.0;
    max_frac = std::max(max_frac, frac);
    p.v = frac * std::sqrt(p.d * p.gap.length());
    const auto inst = random_instance(p, rng());
    const PerturbedSplit ps = perturbed_split(inst);
    c.expect(!ps.gap_closed, "gap closed at instance " + std::to_string(k));
    c.expect(!ps.omega0.empty(), "empty inner spectrum at instance " + std::to_string(k));
    for (double w0 : ps.omega0) {
      c.expect(w0 > p.gap.left && w0 < p.gap.right, "inner eigenvalue outside the gap");
      for (double w1 : ps.omega1) min_sep = std::min(min_sep, std::abs(w0 - w1));
    }
    if (ps.enclosure) {
      for (double w0 : ps.omega0) {
        c.expect(w0 >= ps.enclosure->lower - 1e-9 * half && w0 <= ps.enclosure->upper + 1e-9 * half,
                 "enclosure at instance " + std::to_string(k));
      }
    }
  }
  c.expect(min_sep > 0.0, "inner and outer spectra separated");
  std::ostringstream os;
  os << "1000 instances up to v = " << max_frac << " sqrt(d|gap|), min |omega0 - omega1| = " << min_sep;
  return finish(c, os.str());
}

Outcome criterion9(const CampaignRun& single) {
  Check c;
  const int workers = static_cast<int>(std::max(4u, std::thread::hardware_concurrency()));
  const CampaignReport multi = run_campaign(campaign_config(workers));
  const std::string sa = to_json(single.report).dump(2);
  const std::string sb = to_json(multi).dump(2);
  c.expect(sa == sb, "reports differ");
  std::size_t first_diff = 0;
  while (first_diff < std::min(sa.size(), sb.size()) && sa[first_diff] == sb[first_diff]) ++first_diff;
  std::ostringstream os;
  os << "1 vs " << workers << " workers, " << sa.size() << " bytes"
     << (sa == sb ? ", identical" : ", first difference at byte " + std::to_string(first_diff));
  return finish(c, os.str());
}

Outcome guarded(const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  auto record = [&](const std::string& name, const Outcome& o) {
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    results.emplace_back(name, o);
  };

  record("1 (golden 3x3 instance)", guarded(criterion1));
  record("2 (bound formulas)", guarded(criterion2));
  record("3 (phi oracle)", guarded(criterion3));

  CampaignRun run;
  bool have_run = false;
  record("4 (10000-trial campaign)", guarded([&] {
           const auto t0 = Clock::now();
           run.report = run_campaign(campaign_config(1));
           run.seconds = seconds_since(t0);
           have_run = true;
           return criterion4(run);
         }));
  record("5 (eigenpair identities)", guarded(criterion5));
  record("6 (shift invariance)", guarded(criterion6));
  record("7 (||X|| < 1, angle < pi/4)",
         have_run ? guarded([&] { return criterion7(run); }) : Outcome{false, "campaign did not run"});
  record("8 (gap does not close)", guarded(criterion8));
  record("9 (determinism across workers)",
         have_run ? guarded([&] { return criterion9(run); }) : Outcome{false, "campaign did not run"});

  int failed = 0;
  for (const auto& [name, o] : results) failed += !o.pass;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
