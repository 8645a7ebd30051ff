// spl: command-line front end for the spectral perturbation laboratory.
//
//   spl analyze   --in FILE [--gap-left X --gap-right Y] [--out FILE]
//   spl bounds    --D X --d Y --v Z [--unchecked]
//   spl verify    --trials N --seed S --n0 A --n1 B --gap-left X --gap-right Y
//                 --d D --regime {A|B|C|mixed} --v-frac F [--parallel K] --out FILE
//   spl sweep     --D-range lo:hi:steps --d V --v-range lo:hi:steps --out FILE.csv
//   spl sharpness --D X --d Y --v Z --n0 A --n1 B --restarts R --iters I --seed S --out FILE
//
// Exit codes: 0 clean, 2 bound violation, 3 structural failure, 4 config error.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spl/harness.hpp"

namespace {

constexpr int kExitViolation = 2;
constexpr int kExitStructural = 3;
constexpr int kExitConfig = 4;

int exit_code_for(spl::ErrorCode code) {
  switch (code) {
    case spl::ErrorCode::NotAGraph:
    case spl::ErrorCode::ConvergenceFailure:
    case spl::ErrorCode::RankMismatch:
      return kExitStructural;
    default:
      return kExitConfig;
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    spl::write_text_file(out, text);
  }
}

std::pair<spl::Index, spl::Index> parse_dim_range(const std::string& text) {
  const spl::Range r = spl::parse_range(text.find(':') == std::string::npos ? text
                                                                               : text + ":2");
  return {static_cast<spl::Index>(r.lo), static_cast<spl::Index>(r.hi)};
}

std::pair<double, double> parse_pair(const std::string& text) {
  const spl::Range r = spl::parse_range(text.find(':') == std::string::npos ? text : text + ":2");
  return {r.lo, r.hi};
}

spl::json error_json(const spl::Error& e) {
  spl::json j{{"error", std::string(spl::to_string(e.code()))}, {"message", e.what()}};
  if (spl::is_disposition_violation(e.code())) j["category"] = "DispositionViolation";
  if (e.has_offending_value()) j["offending_value"] = e.offending_value();
  return j;
}

spl::json bounds_json(double D, double d, double v, bool unchecked) {
  const spl::RegimeFlags f = spl::regimes(D, d, v);
  if (!f.domain && !unchecked) {
    throw spl::Error(spl::ErrorCode::DomainViolation, "need D > 0, 0 < d <= D/2, v >= 0");
  }
  auto null = spl::json(nullptr);
  spl::json j{{"D", D}, {"d", d}, {"v", v}, {"a", 0.5 * D - d}};
  j["regimes"] = {{"regime12", f.r12}, {"regime29", f.r29}, {"regime31", f.r31}};
  j["unchecked"] = unchecked;

  j["bound13"] = (f.r12 || unchecked) ? spl::json(spl::bound_apriori_unchecked(v, d).value) : null;
  if (f.r31 || unchecked) {
    const spl::Kappa k = spl::kappa_unchecked(D, d, v);
    j["kappa"] = k.value;
    j["branch"] = spl::to_string(k.branch);
    j["bound32"] = spl::sin_half_arctan(k.value);
    j["angular_norm_bound"] = spl::tan_half_arctan(k.value);
  } else {
    j["kappa"] = j["branch"] = j["bound32"] = j["angular_norm_bound"] = null;
  }
  if (f.r29 || unchecked) {
    const double r = spl::r_v_unchecked(v, d, D).value;
    j["r_V"] = r;
    j["enclosure"] = {-0.5 * D + (d - r), 0.5 * D - (d - r)};
  } else {
    j["r_V"] = j["enclosure"] = null;
  }
  j["kappa_max_over_D"] = (v < d && d > 0.0) ? spl::json(spl::kappa_max_over_D(d, v)) : null;
  const double a = 0.5 * D - d;
  if (f.domain && f.r31) {
    const spl::PhiSup s = spl::phi_sup_analytic(std::max(a, 0.0), d, v);
    j["phi_sup"] = {{"sup", s.sup}, {"x", s.x}, {"y", s.y}, {"branch", spl::to_string(s.branch)}};
  } else {
    j["phi_sup"] = null;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral subspace rotation under off-diagonal perturbations"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Analyze a single instance file");
  std::string in_file;
  std::string out_file;
  std::optional<double> gap_left;
  std::optional<double> gap_right;
  std::string format = "json";
  analyze->add_option("--in", in_file, "Instance JSON or matrix JSON")->required();
  analyze->add_option("--gap-left", gap_left, "Left end of the gap (overrides the file)");
  analyze->add_option("--gap-right", gap_right, "Right end of the gap (overrides the file)");
  analyze->add_option("--out", out_file, "Output file (stdout if omitted)");
  analyze->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate every bound for (D, d, v)");
  double bD = 0.0;
  double bd = 0.0;
  double bv = 0.0;
  bool unchecked = false;
  bounds->add_option("--D", bD, "Gap length")->required();
  bounds->add_option("--d", bd, "Distance between the spectral components")->required();
  bounds->add_option("--v", bv, "Perturbation norm")->required();
  bounds->add_flag("--unchecked", unchecked, "Evaluate formulas outside their hypotheses");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a seeded random verification campaign");
  spl::CampaignConfig cfg;
  std::string n0_text = "1:4";
  std::string n1_text = "2:6";
  std::string regime_text = "A";
  std::string d_frac_text;
  std::string gap_scale_text;
  std::optional<int> dump_trial;
  std::string dump_out;
  bool timing = false;
  double vgl = -1.0;
  double vgr = 1.0;
  verify->add_option("--trials", cfg.trials, "Number of trials")->required();
  verify->add_option("--seed", cfg.seed, "Master seed")->required();
  verify->add_option("--n0", n0_text, "Inner block size N or range lo:hi");
  verify->add_option("--n1", n1_text, "Outer block size N or range lo:hi");
  verify->add_option("--gap-left", vgl, "Left end of the nominal gap");
  verify->add_option("--gap-right", vgr, "Right end of the nominal gap");
  verify->add_option("--d", cfg.d, "Distance between the spectral components");
  verify->add_option("--d-frac", d_frac_text, "Random d as a fraction lo:hi of |gap|/2");
  verify->add_option("--gap-scale", gap_scale_text, "Random gap scaling lo:hi");
  verify->add_option("--outer-radius", cfg.outer_radius, "Spread of the outer spectrum");
  verify->add_option("--regime", regime_text, "A | B | C | mixed")
      ->check(CLI::IsMember({"A", "B", "C", "mixed"}));
  verify->add_option("--v-frac", cfg.v_fraction, "Position of v inside the regime interval");
  verify->add_flag("--random-v", cfg.random_v_fraction, "Draw the fraction from (0, v-frac]");
  verify->add_flag("--conjugate", cfg.conjugate, "Rotate every instance by a random unitary");
  verify->add_option("--parallel", cfg.parallel, "Worker threads");
  verify->add_option("--out", out_file, "Report file (stdout if omitted)");
  verify->add_flag("--timing", timing, "Include wall-clock runtime in the report");
  verify->add_option("--dump-trial", dump_trial, "Write the instance of this trial index");
  verify->add_option("--dump-out", dump_out, "File for --dump-trial");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate the bounds over a (D, v) grid");
  std::string D_range_text;
  std::string v_range_text;
  double sd = 0.0;
  sweep_cmd->add_option("--D-range", D_range_text, "lo:hi:steps")->required();
  sweep_cmd->add_option("--d", sd, "Distance")->required();
  sweep_cmd->add_option("--v-range", v_range_text, "lo:hi:steps")->required();
  sweep_cmd->add_option("--out", out_file, "CSV file (stdout if omitted)");
  sweep_cmd->add_flag("--unchecked", unchecked, "Fill fields outside their hypotheses");

  // sharpness
  auto* sharp = app.add_subcommand("sharpness", "Search for instances close to the detailed bound");
  spl::SharpnessConfig scfg;
  sharp->add_option("--D", scfg.D, "Gap length")->required();
  sharp->add_option("--d", scfg.d, "Distance")->required();
  sharp->add_option("--v", scfg.v, "Perturbation norm")->required();
  sharp->add_option("--n0", scfg.n0, "Inner block size");
  sharp->add_option("--n1", scfg.n1, "Outer block size");
  sharp->add_option("--restarts", scfg.restarts, "Random restarts");
  sharp->add_option("--iters", scfg.iters, "Iterations per restart");
  sharp->add_option("--seed", scfg.seed, "Seed");
  sharp->add_option("--outer-radius", scfg.outer_radius, "Spread of the extra outer values");
  sharp->add_option("--out", out_file, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*analyze) {
      if (gap_left.has_value() != gap_right.has_value()) {
        throw spl::Error(spl::ErrorCode::ParseError, "give both --gap-left and --gap-right");
      }
      std::optional<spl::Gap> gap;
      if (gap_left) gap = spl::Gap{*gap_left, *gap_right};
      const auto inst = spl::instance_from_json(spl::read_json_file(in_file), gap);
      const spl::AnalysisReport rep = spl::analyze_instance(inst);
      emit(spl::to_json(rep).dump(2) + "\n", out_file);
      return rep.clean() ? 0 : kExitViolation;
    }
    if (*bounds) {
      std::cout << bounds_json(bD, bd, bv, unchecked).dump(2) << "\n";
      return 0;
    }
    if (*verify) {
      cfg.gap = {vgl, vgr};
      std::tie(cfg.n0_min, cfg.n0_max) = parse_dim_range(n0_text);
      std::tie(cfg.n1_min, cfg.n1_max) = parse_dim_range(n1_text);
      cfg.regime = spl::regime_from_string(regime_text);
      if (!d_frac_text.empty()) cfg.d_fraction = parse_pair(d_frac_text);
      if (!gap_scale_text.empty()) std::tie(cfg.gap_scale_min, cfg.gap_scale_max) = parse_pair(gap_scale_text);
      spl::validate(cfg);
      if (dump_trial) {
        if (dump_out.empty()) throw spl::Error(spl::ErrorCode::ParseError, "--dump-trial needs --dump-out");
        spl::write_text_file(dump_out,
                             spl::instance_to_json(spl::trial_instance(cfg, *dump_trial)).dump(2) + "\n");
      }
      const spl::CampaignReport rep = spl::run_campaign(cfg);
      emit(spl::to_json(rep, timing).dump(2) + "\n", out_file);
      const auto& a = rep.aggregates;
      std::cerr << "trials " << a.trials << ", bound violations " << a.bound_violations
                << ", identity violations " << a.identity_violations << ", structural failures "
                << a.structural_failures << ", max ratio (tan) " << a.max_ratio13
                << ", max ratio (detailed) " << a.max_ratio32 << ", runtime " << rep.runtime_seconds
                << " s\n";
      return spl::exit_status(rep);
    }
    if (*sweep_cmd) {
      const auto rows = spl::sweep(spl::parse_range(D_range_text), sd, spl::parse_range(v_range_text), unchecked);
      emit(spl::sweep_csv(rows), out_file);
      return 0;
    }
    if (*sharp) {
      const spl::SharpnessResult res = spl::sharpness_search(scfg);
      emit(spl::to_json(res, scfg).dump(2) + "\n", out_file);
      return res.best_ratio <= 1.0 + 1e-9 ? 0 : kExitViolation;
    }
  } catch (const spl::Error& e) {
    std::cout << error_json(e).dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitConfig;
}
