#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "spl/harness.hpp"

namespace spl {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double lerp(double lo, double hi, double t) { return lo + t * (hi - lo); }

struct VRange {
  double lo;
  double hi;
};

VRange regime_interval(Regime r, double D, double d) {
  switch (r) {
    case Regime::A: return {0.0, d};
    case Regime::B: return {d, std::sqrt(d * (D - d))};
    case Regime::C: return {std::sqrt(d * (D - d)), std::sqrt(2.0) * d};
    case Regime::Mixed: break;
  }
  throw Error(ErrorCode::InfeasibleParams, "mixed regime has no single interval");
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

TrialRecord run_trial(const CampaignConfig& cfg, int index) {
  const TrialPlan plan = plan_trial(cfg, index);
  TrialRecord rec;
  try {
    const PerturbationInstance inst = random_instance(plan.params, plan.instance_seed);
    rec = make_record(analyze_instance(inst, cfg.tol));
  } catch (const Error& e) {
    rec.n0 = plan.params.n0;
    rec.n1 = plan.params.n1;
    rec.D = plan.params.gap.length();
    rec.d = plan.params.d;
    rec.v = plan.params.v;
    rec.status = e.code() == ErrorCode::ConvergenceFailure ? TrialStatus::EigenFailure
                                                           : TrialStatus::NotAGraph;
    rec.message = e.what();
  }
  rec.index = index;
  rec.seed = plan.seed;
  rec.regime = plan.regime;
  return rec;
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::A: return "A";
    case Regime::B: return "B";
    case Regime::C: return "C";
    case Regime::Mixed: return "mixed";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "A") return Regime::A;
  if (s == "B") return Regime::B;
  if (s == "C") return Regime::C;
  if (s == "mixed") return Regime::Mixed;
  throw Error(ErrorCode::InfeasibleParams, "unknown regime '" + s + "'");
}

const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::Ok: return "ok";
    case TrialStatus::BoundViolation: return "BoundViolation";
    case TrialStatus::IdentityViolation: return "IdentityViolation";
    case TrialStatus::NotAGraph: return "NotAGraph";
    case TrialStatus::EigenFailure: return "EigenFailure";
  }
  return "?";
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * kGolden);
}

TrialPlan plan_trial(const CampaignConfig& cfg, int index) {
  TrialPlan plan;
  plan.seed = trial_seed(cfg.seed, static_cast<std::uint64_t>(index));
  std::mt19937_64 rng(plan.seed);
  // One raw draw per choice, in a fixed order.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double u_n0 = unit();
  const double u_n1 = unit();
  const double u_scale = unit();
  const double u_d = unit();
  const double u_regime = unit();
  const double u_v = unit();
  const double u_pin = unit();
  plan.instance_seed = rng();

  auto pick = [](Index lo, Index hi, double u) {
    return std::min(hi, lo + static_cast<Index>(u * static_cast<double>(hi - lo + 1)));
  };
  RandomInstanceParams& p = plan.params;
  p.n0 = pick(cfg.n0_min, cfg.n0_max, u_n0);
  p.n1 = pick(cfg.n1_min, cfg.n1_max, u_n1);
  const double D = cfg.gap.length() * lerp(cfg.gap_scale_min, cfg.gap_scale_max, u_scale);
  p.gap = {cfg.gap.center() - 0.5 * D, cfg.gap.center() + 0.5 * D};
  p.d = cfg.d_fraction ? lerp(cfg.d_fraction->first, cfg.d_fraction->second, u_d) * 0.5 * D : cfg.d;
  p.outer_radius = cfg.outer_radius;
  p.conjugate = cfg.conjugate;
  p.pin_side = u_pin < 0.5 ? PinSide::Left : PinSide::Right;

  plan.regime = cfg.regime;
  if (cfg.regime == Regime::Mixed) {
    const VRange b = regime_interval(Regime::B, D, p.d);
    plan.regime = (u_regime < 0.5 || !(b.hi > b.lo)) ? Regime::A : Regime::B;
  }
  const VRange range = regime_interval(plan.regime, D, p.d);
  if (!(range.hi > range.lo) || !(p.d > 0.0) || !(p.d <= 0.5 * D)) {
    throw Error(ErrorCode::InfeasibleParams,
                std::string("regime ") + to_string(plan.regime) + " is empty for D = " +
                    std::to_string(D) + ", d = " + std::to_string(p.d));
  }
  const double f = cfg.random_v_fraction ? cfg.v_fraction * (1.0 - u_v) : cfg.v_fraction;
  p.v = lerp(range.lo, range.hi, f);
  return plan;
}

PerturbationInstance trial_instance(const CampaignConfig& cfg, int index) {
  const TrialPlan plan = plan_trial(cfg, index);
  return random_instance(plan.params, plan.instance_seed);
}

void validate(const CampaignConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InfeasibleParams, what); };
  if (cfg.trials < 1) fail("trials must be >= 1");
  if (cfg.parallel < 1) fail("parallel must be >= 1");
  if (!(cfg.v_fraction >= 0.0 && cfg.v_fraction < 1.0)) fail("v_fraction must lie in [0, 1)");
  if (cfg.n0_min < 1 || cfg.n0_max < cfg.n0_min) fail("need 1 <= n0_min <= n0_max");
  if (cfg.n1_min < 2 || cfg.n1_max < cfg.n1_min) fail("need 2 <= n1_min <= n1_max");
  if (!(cfg.gap.left < cfg.gap.right)) fail("gap must satisfy left < right");
  if (!(cfg.gap_scale_min > 0.0) || cfg.gap_scale_max < cfg.gap_scale_min) fail("bad gap scale range");
  if (cfg.d_fraction) {
    const auto [lo, hi] = *cfg.d_fraction;
    if (!(lo > 0.0) || hi < lo || hi > 1.0) fail("d fraction range must lie in (0, 1]");
  }
  if (!(cfg.outer_radius > 0.0)) fail("outer_radius must be positive");
  for (int i = 0; i < cfg.trials; ++i) plan_trial(cfg, i);
}

TrialRecord make_record(const AnalysisReport& a) {
  TrialRecord r;
  r.n0 = a.n0;
  r.n1 = a.n1;
  r.D = a.bounds.D;
  r.d = a.bounds.d;
  r.v = a.bounds.v;
  r.measured = a.bounds.measured;
  r.bound13 = a.bounds.bound13;
  r.bound32 = a.bounds.bound32;
  if (a.bounds.kappa) r.kappa = a.bounds.kappa->value;
  r.r_V = a.bounds.r_V;
  r.enclosure_ok = a.bounds.enclosure_ok;
  r.mu = a.mu;
  r.riccati_residual = a.riccati_residual;
  r.lemma26_max = a.lemma26_max;
  r.lemma27_max = a.lemma27_max;
  r.angle_residual = a.graph.angle_residual;
  r.scale = a.scale;
  r.ratio13 = a.bounds.ratio13;
  r.ratio32 = a.bounds.ratio32;
  if (!a.bound_violations.empty()) {
    r.status = TrialStatus::BoundViolation;
    r.message = a.bound_violations.front();
  } else if (!a.identity_violations.empty()) {
    r.status = TrialStatus::IdentityViolation;
    r.message = a.identity_violations.front();
  }
  return r;
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();

  CampaignReport report;
  report.config = cfg;
  report.records.resize(static_cast<std::size_t>(cfg.trials));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.trials; i = next++) {
      report.records[static_cast<std::size_t>(i)] = run_trial(cfg, i);
    }
  };
  const int workers = std::min(cfg.parallel, cfg.trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  CampaignAggregates& agg = report.aggregates;
  agg.trials = cfg.trials;
  for (const TrialRecord& r : report.records) {
    switch (r.status) {
      case TrialStatus::Ok: break;
      case TrialStatus::BoundViolation: ++agg.bound_violations; break;
      case TrialStatus::IdentityViolation: ++agg.identity_violations; break;
      case TrialStatus::NotAGraph:
      case TrialStatus::EigenFailure: ++agg.structural_failures; continue;
    }
    if (r.ratio13) agg.max_ratio13 = std::max(agg.max_ratio13, *r.ratio13);
    if (r.ratio32) agg.max_ratio32 = std::max(agg.max_ratio32, *r.ratio32);
    if (r.scale > 0.0) {
      agg.max_riccati_rel = std::max(agg.max_riccati_rel, r.riccati_residual / r.scale);
      agg.max_lemma_rel = std::max(agg.max_lemma_rel, std::max(r.lemma26_max, r.lemma27_max) / r.scale);
    }
    agg.max_angle_residual = std::max(agg.max_angle_residual, r.angle_residual);
    if (r.bound32) {
      agg.max_mu_r31 = std::max(agg.max_mu_r31, r.mu);
      agg.max_measured_r31 = std::max(agg.max_measured_r31, r.measured);
    }
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int exit_status(const CampaignReport& report) {
  const CampaignAggregates& a = report.aggregates;
  if (a.bound_violations > 0 || a.identity_violations > 0) return 2;
  if (a.structural_failures > 0) return 3;
  return 0;
}

json to_json(const CampaignConfig& cfg) {
  json j;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["n0"] = {cfg.n0_min, cfg.n0_max};
  j["n1"] = {cfg.n1_min, cfg.n1_max};
  j["gap"] = {cfg.gap.left, cfg.gap.right};
  j["gap_scale"] = {cfg.gap_scale_min, cfg.gap_scale_max};
  j["d"] = cfg.d;
  j["d_fraction"] = cfg.d_fraction ? json{cfg.d_fraction->first, cfg.d_fraction->second} : json(nullptr);
  j["outer_radius"] = cfg.outer_radius;
  j["regime"] = to_string(cfg.regime);
  j["v_fraction"] = cfg.v_fraction;
  j["random_v_fraction"] = cfg.random_v_fraction;
  j["conjugate"] = cfg.conjugate;
  j["tolerances"] = {{"bound", cfg.tol.bound},
                     {"enclosure", cfg.tol.enclosure},
                     {"riccati_rel", cfg.tol.riccati_rel},
                     {"lemma_rel", cfg.tol.lemma_rel},
                     {"angle", cfg.tol.angle},
                     {"spectra", cfg.tol.spectra}};
  return j;
}

json to_json(const CampaignReport& report, bool include_timing) {
  json j;
  j["config"] = to_json(report.config);
  json recs = json::array();
  for (const TrialRecord& r : report.records) {
    recs.push_back({{"index", r.index},
                    {"seed", r.seed},
                    {"regime", to_string(r.regime)},
                    {"n0", r.n0},
                    {"n1", r.n1},
                    {"D", r.D},
                    {"d", r.d},
                    {"v", r.v},
                    {"measured", r.measured},
                    {"bound13", optional_number(r.bound13)},
                    {"bound32", optional_number(r.bound32)},
                    {"kappa", optional_number(r.kappa)},
                    {"r_V", optional_number(r.r_V)},
                    {"enclosure_ok", r.enclosure_ok},
                    {"mu", r.mu},
                    {"riccati_residual", r.riccati_residual},
                    {"lemma26_max", r.lemma26_max},
                    {"lemma27_max", r.lemma27_max},
                    {"angle_residual", r.angle_residual},
                    {"ratio13", optional_number(r.ratio13)},
                    {"ratio32", optional_number(r.ratio32)},
                    {"status", to_string(r.status)},
                    {"message", r.message}});
  }
  j["records"] = std::move(recs);
  const CampaignAggregates& a = report.aggregates;
  j["aggregates"] = {{"trials", a.trials},
                     {"bound_violations", a.bound_violations},
                     {"identity_violations", a.identity_violations},
                     {"structural_failures", a.structural_failures},
                     {"max_ratio13", a.max_ratio13},
                     {"max_ratio32", a.max_ratio32},
                     {"max_riccati_rel", a.max_riccati_rel},
                     {"max_lemma_rel", a.max_lemma_rel},
                     {"max_angle_residual", a.max_angle_residual},
                     {"max_mu_r31", a.max_mu_r31},
                     {"max_measured_r31", a.max_measured_r31}};
  if (include_timing) {
    j["runtime_seconds"] = report.runtime_seconds;
    j["parallel"] = report.config.parallel;
  }
  return j;
}

}  // namespace spl
