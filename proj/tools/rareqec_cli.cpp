// Copyright 2026 The rareqec Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: builds fault systems, measures distances and
// minimum-weight logical sets, runs the onset estimators, samples failure
// spectra and rates, fits spectrum curves, and chains rare-rate splitting
// runs.  Results are printed as JSON; systems and logical sets use the text
// formats from io.hpp.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rareqec/rareqec.hpp"

namespace {

using nlohmann::json;
using namespace rareqec;

struct SystemSource {
  std::string path;
  std::string code;
  int distance = 0;
  double scale = 0;  // 0 keeps the stored/built value

  void attach(CLI::App* cmd, bool required = true) {
    auto* sys = cmd->add_option("--system", path, "fault system file");
    auto* code_opt = cmd->add_option("--code", code, "built-in family: toric, rotated-toric, bicycle")
                         ->check(CLI::IsMember({"toric", "rotated-toric", "bicycle"}));
    auto* dist_opt = cmd->add_option("--distance", distance, "code distance for --code");
    cmd->add_option("--scale", scale, "override the physical-to-mechanism rate scale");
    code_opt->excludes(sys)->needs(dist_opt);
    dist_opt->needs(code_opt);
    if (required) {
      // One of the two sources must be present.
      cmd->callback([this, cmd]() {
        if (path.empty() && code.empty())
          throw CLI::ValidationError(cmd->get_name(), "give --system or --code/--distance");
      });
    }
  }

  FaultSystem build() const {
    FaultSystem sys;
    if (!path.empty()) {
      sys = load_fault_system(path);
    } else if (code == "toric") {
      sys = toric_bitflip_system(distance);
    } else if (code == "rotated-toric") {
      sys = rotated_toric_bitflip_system(distance);
    } else {
      sys = bicycle_bitflip_system(distance);
    }
    if (scale > 0) sys.set_probability_scale(scale);
    return sys;
  }
};

struct DecoderChoice {
  std::string name = "bposd";
  double prior = 0.01;
  int bp_iterations = 100;
  int osd_order = 10;

  void attach(CLI::App* cmd) {
    cmd->add_option("--decoder", name, "exhaustive, matching, or bposd")
        ->check(CLI::IsMember({"exhaustive", "matching", "bposd"}))
        ->capture_default_str();
    cmd->add_option("--prior", prior, "uniform bposd prior")->capture_default_str();
    cmd->add_option("--bp-iterations", bp_iterations, "belief propagation rounds")
        ->capture_default_str();
    cmd->add_option("--osd-order", osd_order, "ordered-statistics search depth")
        ->capture_default_str();
  }

  std::unique_ptr<Decoder> build(const FaultSystem& sys) const {
    if (name == "exhaustive") return std::make_unique<ExhaustiveMinWeightDecoder>(sys);
    if (name == "matching") return std::make_unique<MatchingDecoder>(sys);
    BpOsdConfig config;
    config.max_iterations = bp_iterations;
    config.osd_order = osd_order;
    return std::make_unique<BpOsdDecoder>(sys, config,
                                          std::vector<double>(sys.num_faults(), prior));
  }
};

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open " + out + " for writing");
  os << j.dump(2) << "\n";
}

json system_summary(const FaultSystem& sys) {
  return {{"faults", sys.num_faults()},
          {"checks", sys.num_checks()},
          {"actions", sys.num_actions()},
          {"expanded_size", sys.expanded_size()},
          {"probability_scale", sys.probability_scale()}};
}

std::vector<BitVec> logicals_for(const FaultSystem& sys, const std::string& path,
                                 int max_weight) {
  if (!path.empty()) return load_support_lines(path, sys.num_faults());
  if (max_weight <= 0)
    throw std::runtime_error("give --logicals or --max-weight to enumerate");
  return enumerate_logicals(sys, static_cast<std::size_t>(max_weight));
}

json ansatz_json(const FailureSpectrumAnsatz& a) {
  return {{"asymptote", a.asymptote},         {"onset_weight", a.onset_weight},
          {"onset_fraction", a.onset_fraction}, {"gamma1", a.gamma1},
          {"gamma2", a.gamma2},               {"crossover_weight", a.crossover_weight},
          {"sharpness", a.sharpness}};
}

FailureSpectrumAnsatz ansatz_from_json(const json& j) {
  FailureSpectrumAnsatz a;
  a.asymptote = j.at("asymptote");
  a.onset_weight = j.at("onset_weight");
  a.onset_fraction = j.at("onset_fraction");
  a.gamma1 = j.at("gamma1");
  a.gamma2 = j.at("gamma2");
  a.crossover_weight = j.at("crossover_weight");
  a.sharpness = j.at("sharpness");
  return a;
}

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return json::parse(is);
}

int run(int argc, char** argv) {
  CLI::App app{"rare-failure characterization for check-based fault systems"};
  app.require_subcommand(1);

  // ---- build ----------------------------------------------------------
  auto* build = app.add_subcommand("build", "emit a built-in fault system as text");
  SystemSource build_src;
  std::string build_out;
  build_src.attach(build);
  build->add_option("-o,--out", build_out, "output path (default stdout)");
  build->final_callback([&]() {
    FaultSystem sys = build_src.build();
    if (build_out.empty())
      write_fault_system(std::cout, sys);
    else
      save_fault_system(build_out, sys);
    std::cerr << system_summary(sys).dump() << "\n";
  });

  // ---- distance -------------------------------------------------------
  auto* dist = app.add_subcommand("distance", "exact distance or randomized upper bound");
  SystemSource dist_src;
  dist_src.attach(dist);
  bool dist_exact = false;
  std::int64_t dist_trials = 200;
  std::uint64_t dist_seed = 1;
  double dist_prior = 0.02, dist_jitter = 1.0;
  std::string dist_out;
  dist->add_flag("--exact", dist_exact, "decode every action row with the exhaustive decoder");
  dist->add_option("--trials", dist_trials, "probe count for the upper bound")
      ->capture_default_str();
  dist->add_option("--seed", dist_seed, "rng seed")->capture_default_str();
  dist->add_option("--probe-prior", dist_prior, "base prior of the probe decoder")
      ->capture_default_str();
  dist->add_option("--probe-jitter", dist_jitter, "log-uniform prior jitter")
      ->capture_default_str();
  dist->add_option("-o,--out", dist_out, "output path (default stdout)");
  dist->final_callback([&]() {
    FaultSystem sys = dist_src.build();
    json j{{"system", system_summary(sys)}};
    if (dist_exact) {
      BitVec witness;
      auto factory = [](const FaultSystem& s) {
        return std::make_unique<ExhaustiveMinWeightDecoder>(s);
      };
      j["distance"] = distance_exact(sys, factory, &witness);
      j["witness"] = witness.to_indices();
      j["exact"] = true;
    } else {
      Rng rng(dist_seed);
      auto bound = distance_upper_bound(
          sys, perturbed_bposd_factory({}, dist_prior, dist_jitter, dist_seed ^ 0x9e37),
          dist_trials, rng);
      j["distance_upper_bound"] = bound.weight;
      j["witness"] = bound.witness.to_indices();
      j["trials"] = dist_trials;
      j["exact"] = false;
    }
    emit(j, dist_out);
  });

  // ---- logicals -------------------------------------------------------
  auto* log = app.add_subcommand("logicals",
                                 "minimum-weight logical sets, enumerated or searched");
  SystemSource log_src;
  log_src.attach(log);
  int log_max_weight = 0;
  bool log_translations = false;
  std::int64_t log_trials = 0, log_stale = 0;
  std::uint64_t log_seed = 1;
  std::string log_out, log_summary_out;
  log->add_option("--max-weight", log_max_weight, "enumerate all logicals up to this weight");
  log->add_flag("--translations", log_translations,
                "accelerate enumeration with the bicycle translation group");
  log->add_option("--search-trials", log_trials,
                  "randomized probe search instead of enumeration");
  log->add_option("--stale-window", log_stale, "stop the search after this many idle probes")
      ->capture_default_str();
  log->add_option("--seed", log_seed, "rng seed")->capture_default_str();
  log->add_option("-o,--out", log_out, "write the sets as support lines");
  log->add_option("--summary", log_summary_out, "summary path (default stdout)");
  log->final_callback([&]() {
    FaultSystem sys = log_src.build();
    json j{{"system", system_summary(sys)}};
    std::vector<BitVec> found;
    if (log_trials > 0) {
      Rng rng(log_seed);
      auto res = search_min_logicals(sys, perturbed_bposd_factory({}, 0.02, 1.0, log_seed ^ 0x9e37),
                                     log_trials, rng, log_stale);
      found = std::move(res.logicals);
      j["weight"] = res.weight;
      j["trials_run"] = res.trials_run;
      j["mode"] = "search";
    } else if (log_max_weight > 0) {
      std::uint64_t nodes = 0;
      if (log_translations) {
        if (log_src.code != "bicycle")
          throw std::runtime_error("--translations needs --code bicycle");
        found = enumerate_logicals_with_symmetries(
            sys, static_cast<std::size_t>(log_max_weight),
            bicycle_code(log_src.distance).translation_group(), &nodes);
      } else {
        found = enumerate_logicals(sys, static_cast<std::size_t>(log_max_weight), &nodes);
      }
      j["nodes"] = nodes;
      j["mode"] = "enumerate";
    } else {
      throw std::runtime_error("give --max-weight or --search-trials");
    }
    j["count"] = found.size();
    if (!log_out.empty()) save_support_lines(log_out, found);
    emit(j, log_summary_out);
  });

  // ---- onset ----------------------------------------------------------
  auto* onset = app.add_subcommand(
      "onset", "optimal-decoder failure share among half-weight sub-errors");
  SystemSource onset_src;
  onset_src.attach(onset);
  std::string onset_logicals;
  int onset_max_weight = 0;
  std::int64_t onset_trials = 0;
  std::uint64_t onset_seed = 1;
  std::string onset_out;
  onset->add_option("--logicals", onset_logicals, "support-line file of minimum logicals");
  onset->add_option("--max-weight", onset_max_weight, "enumerate logicals up to this weight");
  onset->add_option("--sample-trials", onset_trials,
                    "sampled estimate instead of the exact count");
  onset->add_option("--seed", onset_seed, "rng seed")->capture_default_str();
  onset->add_option("-o,--out", onset_out, "output path (default stdout)");
  onset->final_callback([&]() {
    FaultSystem sys = onset_src.build();
    auto logicals = logicals_for(sys, onset_logicals, onset_max_weight);
    json j{{"system", system_summary(sys)}, {"num_logicals", logicals.size()}};
    if (onset_trials > 0) {
      Rng rng(onset_seed);
      auto est = sample_optimal_onset(sys, logicals, onset_trials, rng);
      j["fails"] = est.fails;
      j["fails_std_error"] = est.std_error;
      j["onset_fraction"] = est.onset_fraction;
      j["onset_fraction_std_error"] = est.fraction_std_error;
      j["trials"] = est.trials;
      j["mode"] = "sampled";
    } else {
      auto res = exact_optimal_onset(sys, logicals);
      j["logical_weight"] = res.logical_weight;
      j["onset_weight"] = res.onset_weight;
      j["expanded_logicals"] = res.expanded_logicals;
      j["distinct_restrictions"] = res.distinct_restrictions;
      j["expanded_restrictions"] = res.expanded_restrictions;
      j["fails"] = res.fails;
      j["onset_fraction"] = res.onset_fraction;
      j["mode"] = "exact";
    }
    emit(j, onset_out);
  });

  // ---- spectrum -------------------------------------------------------
  auto* spec = app.add_subcommand("spectrum", "sampled failure fractions per error weight");
  SystemSource spec_src;
  DecoderChoice spec_dec;
  spec_src.attach(spec);
  spec_dec.attach(spec);
  std::vector<std::int64_t> spec_weights;
  SampleOptions spec_opts;
  std::string spec_out;
  spec->add_option("--weights", spec_weights, "expanded error weights")
      ->required()
      ->delimiter(',');
  spec->add_option("--max-trials", spec_opts.max_trials, "trial cap per weight")
      ->capture_default_str();
  spec->add_option("--target-failures", spec_opts.target_failures,
                   "stop a weight early after this many failures")
      ->capture_default_str();
  spec->add_option("--seed", spec_opts.seed, "rng seed")->capture_default_str();
  spec->add_option("-o,--out", spec_out, "output path (default stdout)");
  spec->final_callback([&]() {
    FaultSystem sys = spec_src.build();
    auto decoder = spec_dec.build(sys);
    auto points = sample_spectrum(sys, *decoder, spec_weights, spec_opts);
    json arr = json::array();
    for (const auto& pt : points)
      arr.push_back({{"weight", pt.weight},
                     {"trials", pt.trials},
                     {"failures", pt.failures},
                     {"fraction", pt.fraction()},
                     {"std_error", pt.std_error()}});
    emit(json{{"system", system_summary(sys)},
              {"decoder", decoder->name()},
              {"points", arr}},
         spec_out);
  });

  // ---- rate -----------------------------------------------------------
  auto* rate = app.add_subcommand("rate", "Monte Carlo failure rate at physical rates");
  SystemSource rate_src;
  DecoderChoice rate_dec;
  rate_src.attach(rate);
  rate_dec.attach(rate);
  std::vector<double> rate_ps;
  SampleOptions rate_opts;
  std::string rate_out;
  rate->add_option("--rates", rate_ps, "physical rates")->required()->delimiter(',');
  rate->add_option("--max-trials", rate_opts.max_trials, "trial cap per rate")
      ->capture_default_str();
  rate->add_option("--target-failures", rate_opts.target_failures,
                   "stop a rate early after this many failures")
      ->capture_default_str();
  rate->add_option("--seed", rate_opts.seed, "rng seed")->capture_default_str();
  rate->add_option("-o,--out", rate_out, "output path (default stdout)");
  rate->final_callback([&]() {
    FaultSystem sys = rate_src.build();
    auto decoder = rate_dec.build(sys);
    json arr = json::array();
    SampleOptions opts = rate_opts;
    for (double p : rate_ps) {
      const double q = p / sys.probability_scale();
      auto stats = sample_failure_rate(sys, *decoder, q, opts);
      opts.seed += 0x9e3779b9;
      arr.push_back({{"p", p},
                     {"q", q},
                     {"trials", stats.trials},
                     {"failures", stats.failures},
                     {"rate", stats.fraction()},
                     {"std_error", stats.std_error()}});
    }
    emit(json{{"system", system_summary(sys)},
              {"decoder", decoder->name()},
              {"points", arr}},
         rate_out);
  });

  // ---- fit ------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "fit a spectrum curve to sampled data");
  std::string fit_spectrum_path, fit_rates_path, fit_out;
  int fit_family = 5;
  int fit_onset = 0, fit_scan_min = 0, fit_scan_max = 0;
  double fit_fixed_fraction = 0;
  SpectrumFitOptions fit_opts;
  fit->add_option("--spectrum", fit_spectrum_path, "JSON from the spectrum subcommand")
      ->required();
  fit->add_option("--rate-data", fit_rates_path, "JSON from the rate subcommand");
  fit->add_option("--family", fit_family, "free parameters: 2, 3, 5, or 6")
      ->check(CLI::IsMember({2, 3, 5, 6}))
      ->capture_default_str();
  fit->add_option("--onset", fit_onset, "fix the onset weight");
  fit->add_option("--scan-min", fit_scan_min, "scan onset weights from here");
  fit->add_option("--scan-max", fit_scan_max, "scan onset weights up to here");
  fit->add_option("--onset-fraction", fit_fixed_fraction,
                  "fix the onset fraction instead of fitting it");
  fit->add_option("--restarts", fit_opts.restarts, "jittered optimizer restarts")
      ->capture_default_str();
  fit->add_option("--seed", fit_opts.seed, "rng seed")->capture_default_str();
  fit->add_option("-o,--out", fit_out, "output path (default stdout)");
  fit->final_callback([&]() {
    const json spec_json = load_json(fit_spectrum_path);
    const std::int64_t expanded = spec_json.at("system").at("expanded_size");
    const std::int64_t num_actions = spec_json.at("system").at("actions");
    std::vector<WeightPoint> weight_points;
    for (const auto& pt : spec_json.at("points")) {
      if (pt.contains("trials")) {
        SpectrumPoint sp{pt.at("weight"), pt.at("trials"), pt.at("failures")};
        auto converted = to_weight_points({sp});
        weight_points.push_back(converted.front());
      } else {
        weight_points.push_back({pt.at("weight"), pt.at("fraction"), pt.at("std_error")});
      }
    }
    std::vector<RatePoint> rate_points;
    if (!fit_rates_path.empty()) {
      for (const auto& pt : load_json(fit_rates_path).at("points"))
        rate_points.push_back({pt.at("q"), pt.at("rate"), pt.at("std_error")});
    }
    fit_opts.family = static_cast<AnsatzFamily>(fit_family);
    if (fit_fixed_fraction > 0) {
      fit_opts.fit_onset_fraction = false;
      fit_opts.onset_fraction = fit_fixed_fraction;
    }
    SpectrumFit result;
    if (fit_scan_max > 0) {
      result = fit_with_onset_scan(expanded, num_actions, weight_points, rate_points,
                                   fit_opts, std::max(fit_scan_min, 1), fit_scan_max);
    } else {
      if (fit_onset <= 0) throw std::runtime_error("give --onset or --scan-min/--scan-max");
      fit_opts.onset_weight = fit_onset;
      result = fit_failure_spectrum(expanded, num_actions, weight_points, rate_points,
                                    fit_opts);
    }
    json arr = json::array();
    for (const auto& pt : weight_points)
      arr.push_back({{"weight", pt.weight},
                     {"data", pt.fraction},
                     {"model", result.ansatz(static_cast<double>(pt.weight))}});
    emit(json{{"ansatz", ansatz_json(result.ansatz)},
              {"chi_square", result.chi_square},
              {"num_points", result.num_points},
              {"spectrum", arr}},
         fit_out);
  });

  // ---- predict --------------------------------------------------------
  auto* pred = app.add_subcommand("predict", "evaluate a fitted curve and its rate integral");
  SystemSource pred_src;
  pred_src.attach(pred, /*required=*/false);
  std::string pred_fit_path, pred_out;
  std::int64_t pred_expanded = 0;
  std::vector<double> pred_rates;
  std::vector<std::int64_t> pred_weights;
  pred->add_option("--fit", pred_fit_path, "JSON from the fit subcommand")->required();
  pred->add_option("--expanded", pred_expanded, "expanded mechanism count");
  pred->add_option("--rates", pred_rates, "physical rates to predict")->delimiter(',');
  pred->add_option("--weights", pred_weights, "weights to evaluate the curve at")
      ->delimiter(',');
  pred->add_option("-o,--out", pred_out, "output path (default stdout)");
  pred->final_callback([&]() {
    auto ansatz = ansatz_from_json(load_json(pred_fit_path).at("ansatz"));
    double scale = 1.0;
    std::int64_t expanded = pred_expanded;
    if (!pred_src.path.empty() || !pred_src.code.empty()) {
      FaultSystem sys = pred_src.build();
      expanded = sys.expanded_size();
      scale = sys.probability_scale();
    }
    json j{{"ansatz", ansatz_json(ansatz)}};
    if (!pred_weights.empty()) {
      json arr = json::array();
      for (auto w : pred_weights)
        arr.push_back({{"weight", w}, {"fraction", ansatz(static_cast<double>(w))}});
      j["spectrum"] = arr;
    }
    if (!pred_rates.empty()) {
      if (expanded <= 0) throw std::runtime_error("give --expanded or a system source");
      json arr = json::array();
      for (double p : pred_rates)
        arr.push_back({{"p", p},
                       {"rate", predicted_failure_rate(ansatz, expanded, p / scale)}});
      j["rates"] = arr;
    }
    emit(j, pred_out);
  });

  // ---- split ----------------------------------------------------------
  auto* split = app.add_subcommand("split", "chain failure-rate ratios down to rare rates");
  SystemSource split_src;
  DecoderChoice split_dec;
  split_src.attach(split);
  split_dec.attach(split);
  double split_start = 0, split_target = 0, split_start_estimate = 0;
  std::size_t split_min_weight = 1;
  MultiSeedOptions split_opts;
  SampleOptions split_mc;
  split_mc.max_trials = 1000000;
  split_mc.target_failures = 400;
  std::uint64_t split_seed = 1;
  std::string split_out;
  split->add_option("--start", split_start, "anchor physical rate")->required();
  split->add_option("--target", split_target, "physical rate to reach")->required();
  split->add_option("--min-fail-weight", split_min_weight,
                    "lowest expanded weight that can fail, sets ladder step sizes")
      ->capture_default_str();
  split->add_option("--start-estimate", split_start_estimate,
                    "known failure rate at the anchor (skips Monte Carlo)");
  split->add_option("--start-trials", split_mc.max_trials, "anchor Monte Carlo trial cap")
      ->capture_default_str();
  split->add_option("--start-failures", split_mc.target_failures,
                    "anchor Monte Carlo failure target")
      ->capture_default_str();
  split->add_option("--num-seeds", split_opts.num_seeds, "independent start configurations")
      ->capture_default_str();
  split->add_option("--repeats", split_opts.num_repeats, "chains per start configuration")
      ->capture_default_str();
  split->add_option("--chain-length", split_opts.chain.chain_length,
                    "initial samples per rung")
      ->capture_default_str();
  split->add_option("--relative-error", split_opts.chain.relative_error,
                    "per-run precision target")
      ->capture_default_str();
  split->add_option("--seed", split_seed, "rng seed")->capture_default_str();
  split->add_option("-o,--out", split_out, "output path (default stdout)");
  split->final_callback([&]() {
    FaultSystem sys = split_src.build();
    auto decoder = split_dec.build(sys);
    auto schedule = splitting_schedule(sys, split_start, split_target, split_min_weight);
    double anchor = split_start_estimate;
    json j{{"system", system_summary(sys)}, {"decoder", decoder->name()}};
    if (anchor <= 0) {
      split_mc.seed = split_seed ^ 0x51ed;
      auto stats = sample_failure_rate(sys, *decoder,
                                       split_start / sys.probability_scale(), split_mc);
      if (stats.failures == 0)
        throw std::runtime_error("no failures at the anchor rate; raise --start-trials");
      anchor = stats.fraction();
      j["anchor_trials"] = stats.trials;
      j["anchor_failures"] = stats.failures;
    }
    j["anchor_estimate"] = anchor;
    Rng rng(split_seed);
    auto res = multi_seeded_split(sys, *decoder, schedule, anchor, split_opts, rng);
    j["physical_rates"] = res.physical_rates;
    j["mean"] = res.mean;
    j["stddev"] = res.stddev;
    json runs = json::array();
    for (const auto& run : res.runs)
      runs.push_back({{"estimates", run.estimates}, {"converged", run.converged}});
    j["runs"] = runs;
    emit(j, split_out);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
