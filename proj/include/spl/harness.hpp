#pragma once

// Verification harness: single-instance analysis, seeded random campaigns,
// bound sweeps and the sharpness search.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spl/bounds.hpp"
#include "spl/io.hpp"
#include "spl/riccati.hpp"

namespace spl {

struct Tolerances {
  double bound = 1e-9;        ///< slack on every bound comparison
  double enclosure = 1e-9;    ///< relative to max(1, ||L||)
  double riccati_rel = 1e-8;  ///< times (||A|| + ||V||)^2
  double lemma_rel = 1e-9;    ///< times (||A|| + ||V||)^2
  double angle = 1e-8;        ///< norm-angle relation and graph of -X^*
  double spectra = 1e-8;      ///< times max(1, ||A|| + ||V||)
};

struct BoundReport {
  double D = 0.0;
  double d = 0.0;
  double v = 0.0;
  RegimeFlags flags;
  double measured = 0.0;
  std::optional<double> bound13;
  std::optional<double> bound32;
  std::optional<Kappa> kappa;
  std::optional<double> r_V;
  std::optional<Enclosure> enclosure;
  std::optional<double> ratio13;
  std::optional<double> ratio32;
  bool bound13_ok = true;
  bool bound32_ok = true;
  bool enclosure_ok = true;
};

/// Evaluates every bound whose hypothesis holds and compares with `measured`.
BoundReport assemble_bounds(double measured, const Gap& gap, double d, double v,
                            const std::vector<double>& omega0, const Tolerances& tol = {});

struct AnalysisReport {
  Index n0 = 0;
  Index n1 = 0;
  std::vector<double> sigma0;
  std::vector<double> sigma1;
  std::vector<double> omega0;
  std::vector<double> omega1;
  Gap gap{0.0, 0.0};
  bool gap_closed = false;
  double scale = 0.0;  ///< (||A|| + ||V||)^2
  MatrixC X;
  double mu = 0.0;
  double riccati_residual = 0.0;
  double cond_Y0 = 0.0;
  std::vector<double> lambda0_spectrum;
  std::vector<IdentityReport> identities;
  double lemma26_max = 0.0;
  double lemma27_max = 0.0;
  GraphReport graph;
  BoundReport bounds;
  std::vector<std::string> bound_violations;
  std::vector<std::string> identity_violations;

  bool clean() const { return bound_violations.empty() && identity_violations.empty(); }
};

/// Full pipeline on one instance. Throws NotAGraph/ConvergenceFailure; a closed
/// gap outside the hypotheses throws RankMismatch, inside them it is reported
/// as a bound violation.
AnalysisReport analyze_instance(const PerturbationInstance& inst, const Tolerances& tol = {});

json to_json(const AnalysisReport& report);

enum class Regime { A, B, C, Mixed };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct CampaignConfig {
  int trials = 100;
  std::uint64_t seed = 1;
  Index n0_min = 1;
  Index n0_max = 4;
  Index n1_min = 2;
  Index n1_max = 6;
  Gap gap{-1.0, 1.0};
  /// Per-trial gap length is |gap| times a factor drawn from this range.
  double gap_scale_min = 1.0;
  double gap_scale_max = 1.0;
  /// Fixed distance, used unless a relative range is given.
  double d = 0.5;
  /// Optional range for d as a fraction of |gap|/2.
  std::optional<std::pair<double, double>> d_fraction;
  double outer_radius = 1.0;
  Regime regime = Regime::A;
  /// Position of v inside the regime's interval [lo, hi): v = lo + f (hi - lo).
  double v_fraction = 0.5;
  /// Draw f uniformly from (0, v_fraction] per trial instead.
  bool random_v_fraction = false;
  bool conjugate = false;
  int parallel = 1;
  Tolerances tol;
};

/// Validates a config; throws InfeasibleParams.
void validate(const CampaignConfig& cfg);

/// Counter-mode seed of trial `index`: splitmix64(master + (index + 1) * golden).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

struct TrialPlan {
  std::uint64_t seed = 0;
  std::uint64_t instance_seed = 0;
  Regime regime = Regime::A;
  RandomInstanceParams params;
};

TrialPlan plan_trial(const CampaignConfig& cfg, int index);
PerturbationInstance trial_instance(const CampaignConfig& cfg, int index);

enum class TrialStatus { Ok, BoundViolation, IdentityViolation, NotAGraph, EigenFailure };

const char* to_string(TrialStatus s);

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  Regime regime = Regime::A;
  Index n0 = 0;
  Index n1 = 0;
  double D = 0.0;
  double d = 0.0;
  double v = 0.0;
  double measured = 0.0;
  std::optional<double> bound13;
  std::optional<double> bound32;
  std::optional<double> kappa;
  std::optional<double> r_V;
  bool enclosure_ok = true;
  double mu = 0.0;
  double riccati_residual = 0.0;
  double lemma26_max = 0.0;
  double lemma27_max = 0.0;
  double angle_residual = 0.0;
  double scale = 0.0;
  std::optional<double> ratio13;
  std::optional<double> ratio32;
  TrialStatus status = TrialStatus::Ok;
  std::string message;
};

TrialRecord make_record(const AnalysisReport& a);

struct CampaignAggregates {
  int trials = 0;
  int bound_violations = 0;
  int identity_violations = 0;
  int structural_failures = 0;
  double max_ratio13 = 0.0;
  double max_ratio32 = 0.0;
  double max_riccati_rel = 0.0;  ///< riccati_residual / scale
  double max_lemma_rel = 0.0;    ///< lemma residual / scale
  double max_angle_residual = 0.0;
  double max_mu_r31 = 0.0;        ///< largest mu where the detailed bound applies
  double max_measured_r31 = 0.0;  ///< largest measured norm where the detailed bound applies
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<TrialRecord> records;
  CampaignAggregates aggregates;
  double runtime_seconds = 0.0;
};

CampaignReport run_campaign(const CampaignConfig& cfg);

/// 0 clean, 2 bound or identity violation, 3 structural failure.
int exit_status(const CampaignReport& report);

/// Runtime is wall-clock and therefore left out unless asked for, so that
/// equal configs serialize to equal bytes.
json to_json(const CampaignReport& report, bool include_timing = false);
json to_json(const CampaignConfig& cfg);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  std::vector<double> points() const;
};

/// Parses "lo:hi:steps" (or a single number).
Range parse_range(const std::string& text);

struct SweepRow {
  double D = 0.0;
  double d = 0.0;
  double v = 0.0;
  RegimeFlags flags;
  std::optional<Kappa> kappa;
  std::optional<double> bound13;
  std::optional<double> bound32;
  std::optional<double> r_V;
  std::optional<Enclosure> enclosure;
};

/// Grid over D (outer) and v (inner); the gap is centred at the origin.
/// Fields outside their hypothesis stay empty unless `unchecked`.
std::vector<SweepRow> sweep(const Range& D, double d, const Range& v, bool unchecked = false);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct SharpnessConfig {
  Index n0 = 1;
  Index n1 = 2;
  double D = 2.0;
  double d = 1.0;
  double v = 0.5;
  int restarts = 4;
  int iters = 200;
  std::uint64_t seed = 1;
  double outer_radius = 1.0;
};

struct SharpnessResult {
  double bound32 = 0.0;
  double initial_ratio = 0.0;
  double best_ratio = 0.0;
  double best_measured = 0.0;
  int evaluations = 0;
  std::optional<PerturbationInstance> best;
};

/// Multi-start local search maximizing measured / bound32. The first start
/// pins all inner values at the left edge and couples them to the left gap end.
SharpnessResult sharpness_search(const SharpnessConfig& cfg);

json to_json(const SharpnessResult& result, const SharpnessConfig& cfg);

}  // namespace spl
