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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Reference counts cover the toric, rotated-toric and bicycle
// families; statistical criteria use the pinned gates below.  Pass --fast to
// skip the distance-18 bicycle runs (about a minute of enumeration).

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>

#include "rareqec/rareqec.hpp"

using namespace rareqec;

namespace {

constexpr double kExactRel = 1e-12;  // identities evaluated two ways
constexpr double kSigmaGate = 5.0;   // sampled estimate vs exact value
constexpr double kSplitRel = 0.15;   // splitting estimate vs exact rate
constexpr double kFitRel = 0.02;     // noiseless fit recovery

int g_failed = 0;

void check(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!ok) ++g_failed;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

bool all_weight(const std::vector<BitVec>& sets, std::size_t w) {
  for (const auto& v : sets)
    if (v.count() != w) return false;
  return true;
}

DecoderFactory exhaustive_factory() {
  return [](const FaultSystem& s) { return std::make_unique<ExhaustiveMinWeightDecoder>(s); };
}

void toric_closed_forms() {
  // d x d torus: 2d minimum logicals; each of the 2d * C(d, d/2) half
  // restrictions is shared by nothing, and exactly half the syndrome classes
  // are lost, d * C(d, d/2) in total.
  for (std::int64_t d : {4, 6}) {
    FaultSystem sys = toric_bitflip_system(d);
    const auto dd = static_cast<std::size_t>(d);
    const std::string tag = "toric-d" + std::to_string(d);
    if (d == 4)
      check(distance_exact(sys, exhaustive_factory()) == 4, tag + "-distance",
            "exact distance 4");
    auto logicals = enumerate_logicals(sys, dd);
    check(logicals.size() == 2 * dd && all_weight(logicals, dd), tag + "-logicals",
          fmt("%zu minimum logicals of weight %lld", logicals.size(), (long long)d));
    auto onset = exact_optimal_onset(sys, logicals);
    const double expect_restrictions =
        2.0 * static_cast<double>(d) * binomial(d, d / 2);
    const double expect_fails = static_cast<double>(d) * binomial(d, d / 2);
    check(static_cast<double>(onset.distinct_restrictions) == expect_restrictions &&
              onset.fails == expect_fails,
          tag + "-onset",
          fmt("%llu restrictions, %.0f fail",
              (unsigned long long)onset.distinct_restrictions, onset.fails));
  }
}

void rotated_toric_counts() {
  for (std::int64_t d : {4, 6}) {
    FaultSystem sys = rotated_toric_bitflip_system(d);
    auto logicals = enumerate_logicals(sys, static_cast<std::size_t>(d));
    const std::size_t expect = d == 4 ? 28 : 126;
    check(logicals.size() == expect && all_weight(logicals, static_cast<std::size_t>(d)),
          "rotated-toric-d" + std::to_string(d) + "-logicals",
          fmt("%zu minimum logicals", logicals.size()));
  }
}

void bicycle_d6() {
  FaultSystem sys = bicycle_bitflip_system(6);
  check(distance_exact(sys, exhaustive_factory()) == 6, "bicycle-d6-distance",
        "exact distance 6");

  Rng rng(7);
  auto bound = distance_upper_bound(sys, perturbed_bposd_factory({}, 0.02, 1.0, 99), 40, rng);
  check(bound.weight == 6, "bicycle-d6-distance-probe",
        fmt("probe upper bound %zu from 40 trials", bound.weight));

  auto plain = enumerate_logicals(sys, 6);
  auto fast = enumerate_logicals_with_symmetries(sys, 6, bicycle_code(6).translation_group());
  check(plain.size() == 84 && fast.size() == 84, "bicycle-d6-logicals",
        fmt("84 expected, plain %zu, translation-accelerated %zu", plain.size(),
            fast.size()));

  auto onset = exact_optimal_onset(sys, plain);
  const double expect_fraction = 744.0 / binomial(72, 3);
  check(onset.distinct_restrictions == 1392 && onset.fails == 744.0 &&
            std::abs(onset.onset_fraction - expect_fraction) <
                kExactRel * expect_fraction,
        "bicycle-d6-onset",
        fmt("%llu restrictions, %.0f fail, fraction %.6e",
            (unsigned long long)onset.distinct_restrictions, onset.fails,
            onset.onset_fraction));

  Rng rng2(29);
  auto est = sample_optimal_onset(sys, plain, 20000, rng2);
  check(std::abs(est.fails - 744.0) <= kSigmaGate * est.std_error && est.std_error < 5.0,
        "bicycle-d6-sampled-onset",
        fmt("sampled %.2f +- %.2f vs exact 744", est.fails, est.std_error));

  BpOsdDecoder bposd(sys, {}, std::vector<double>(sys.num_faults(), 0.01));
  const auto w2 = exact_weight_class_count(sys, bposd, 2);
  const auto w3 = exact_weight_class_count(sys, bposd, 3);
  check(w2.failures == 0 && w3.failures >= 744 && w3.failures <= 2000,
        "bicycle-d6-decoder-floor",
        fmt("bposd weight-2 failures %llu, weight-3 failures %llu (optimal floor 744)",
            (unsigned long long)w2.failures, (unsigned long long)w3.failures));
}

void bicycle_d12() {
  FaultSystem sys = bicycle_bitflip_system(12);
  auto logicals =
      enumerate_logicals_with_symmetries(sys, 12, bicycle_code(12).translation_group());
  check(logicals.size() == 1884 && all_weight(logicals, 12), "bicycle-d12-logicals",
        fmt("%zu minimum logicals of weight 12", logicals.size()));
  auto onset = exact_optimal_onset(sys, logicals);
  check(onset.distinct_restrictions == 1580496 && onset.fails == 733956.0,
        "bicycle-d12-onset",
        fmt("%llu restrictions, %.0f fail",
            (unsigned long long)onset.distinct_restrictions, onset.fails));
}

void bicycle_d18() {
  FaultSystem sys = bicycle_bitflip_system(18);
  auto logicals =
      enumerate_logicals_with_symmetries(sys, 18, bicycle_code(18).translation_group());
  check(logicals.size() == 336 && all_weight(logicals, 18), "bicycle-d18-logicals",
        fmt("%zu minimum logicals of weight 18", logicals.size()));
  auto onset = exact_optimal_onset(sys, logicals);
  check(onset.distinct_restrictions == 16334304 && onset.fails == 8167488.0,
        "bicycle-d18-onset",
        fmt("%llu restrictions, %.0f fail",
            (unsigned long long)onset.distinct_restrictions, onset.fails));
}

void transform_identity() {
  // Failure rate two ways: direct enumeration over error patterns versus the
  // weight-resolved fractions pushed through the binomial transform.
  FaultSystem sys = toric_bitflip_system(2);
  MatchingDecoder dec(sys);
  const std::int64_t n = sys.expanded_size();
  std::vector<double> fraction(static_cast<std::size_t>(n) + 1, 0.0);
  std::int64_t support_min = n;
  for (std::int64_t w = 0; w <= n; ++w) {
    const auto c = exact_weight_class_count(sys, dec, w);
    fraction[static_cast<std::size_t>(w)] =
        static_cast<double>(c.failures) / static_cast<double>(c.total);
    if (c.failures > 0) support_min = std::min(support_min, w);
  }
  bool ok = true;
  double worst = 0;
  for (double q : {0.02, 0.1, 0.3}) {
    const double direct = exact_failure_rate(sys, dec, q);
    const double transformed = binomial_transform(
        n, q, [&](std::int64_t w) { return fraction[static_cast<std::size_t>(w)]; },
        support_min);
    worst = std::max(worst, std::abs(direct - transformed) / direct);
    ok = ok && std::abs(direct - transformed) <= kExactRel * direct;
  }
  check(ok, "transform-identity", fmt("worst relative gap %.2e", worst));
}

void multiplicity_folding() {
  rareqec::BinaryMatrix checks(3, 4), actions(1, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    checks.set(i, i);
    checks.set(i, i + 1);
  }
  actions.set(0, 0);
  const std::vector<std::int64_t> mult = {1, 2, 1, 2};
  FaultSystem compressed = FaultSystem::from_matrices(checks, actions, mult);
  rareqec::BinaryMatrix echecks(3, 6), eactions(1, 6);
  std::size_t col = 0;
  for (std::size_t j = 0; j < 4; ++j)
    for (std::int64_t k = 0; k < mult[j]; ++k, ++col) {
      for (std::size_t i = 0; i < 3; ++i)
        if (checks.get(i, j)) echecks.set(i, col);
      if (j == 0) eactions.set(0, col);
    }
  FaultSystem expanded = FaultSystem::from_matrices(echecks, eactions);
  auto c = exact_optimal_onset(compressed, enumerate_logicals(compressed, 4));
  auto e = exact_optimal_onset(expanded, enumerate_logicals(expanded, 4));
  check(c.fails == e.fails && c.expanded_restrictions ==
                                  static_cast<double>(e.distinct_restrictions) &&
            std::abs(c.onset_fraction - e.onset_fraction) <= kExactRel * e.onset_fraction,
        "multiplicity-folding",
        fmt("compressed fails %.0f == expanded fails %.0f", c.fails, e.fails));
}

void ansatz_identities() {
  auto two = FailureSpectrumAnsatz::power_law(0.75, 5, 3e-4);
  auto three = FailureSpectrumAnsatz::single_slope(0.75, 5, 3e-4, 5.0);
  auto five = FailureSpectrumAnsatz::crossover(0.75, 5, 3e-4, 7.0, 7.0, 19.0);
  auto three_match = FailureSpectrumAnsatz::single_slope(0.75, 5, 3e-4, 7.0);
  double worst = 0;
  for (std::int64_t w = 0; w <= 200; ++w) {
    worst = std::max(worst, std::abs(two(static_cast<double>(w)) -
                                     three(static_cast<double>(w))));
    worst = std::max(worst, std::abs(five(static_cast<double>(w)) -
                                     three_match(static_cast<double>(w))));
  }
  const bool saturation = FailureSpectrumAnsatz::saturation_for_actions(12) ==
                          1.0 - std::exp2(-12.0);
  check(worst <= 1e-14 && saturation, "ansatz-reductions",
        fmt("family collapse gap %.1e", worst));

  const double w0 = 4.0;
  const double gamma = w0 + (2.0 * w0 - std::log(2.0 * M_PI * w0)) / std::log(2.0);
  auto f = FailureSpectrumAnsatz::crossover(1.0, 4, 1e-30, gamma, w0, w0);
  bool ok = true;
  for (std::int64_t w : {40, 200}) {
    const double ratio = f(static_cast<double>(w)) / 1e-30 / binomial(w, 4);
    ok = ok && ratio > 0.85 && ratio < 1.2;
  }
  check(ok, "ansatz-subset-count-tracking",
        fmt("weight-200 ratio %.3f", f(200.0) / 1e-30 / binomial(200, 4)));
}

void fit_recovery() {
  auto truth = FailureSpectrumAnsatz::crossover(0.75, 5, 2e-4, 5.0, 9.0, 15.0);
  std::vector<WeightPoint> points;
  for (std::int64_t w : {5, 6, 8, 11, 15, 20, 27, 36, 48, 64})
    points.push_back({w, truth(static_cast<double>(w)),
                      0.01 * truth(static_cast<double>(w))});
  SpectrumFitOptions opts;
  opts.family = AnsatzFamily::crossover;
  opts.onset_weight = 5;
  auto fit = fit_failure_spectrum(500, 2, points, {}, opts);
  bool ok = fit.chi_square < 1e-6;
  double worst = 0;
  for (std::int64_t w = 5; w <= 100; w += 5) {
    const double rel = std::abs(fit.ansatz(static_cast<double>(w)) -
                                truth(static_cast<double>(w))) /
                       truth(static_cast<double>(w));
    worst = std::max(worst, rel);
    ok = ok && rel <= kFitRel;
  }
  check(ok, "fit-recovery",
        fmt("chi2 %.1e, worst curve deviation %.2e", fit.chi_square, worst));
}

void onset_anchored_pipeline() {
  // Matching is minimum-weight, so its weight-2 failures on the d4 torus
  // must equal the optimal-onset count exactly; the sampled spectrum point
  // must agree within its own error bar.
  FaultSystem sys = toric_bitflip_system(4);
  MatchingDecoder dec(sys);
  auto onset = exact_optimal_onset(sys, enumerate_logicals(sys, 4));
  const auto w2 = exact_weight_class_count(sys, dec, 2);
  check(static_cast<double>(w2.failures) == onset.fails, "matching-achieves-onset",
        fmt("weight-2 failures %llu == optimal %.0f",
            (unsigned long long)w2.failures, onset.fails));

  SampleOptions mc;
  mc.max_trials = 100000;
  mc.seed = 5;
  auto pts = sample_spectrum(sys, dec, {2}, mc);
  const double sigma = std::max(pts[0].std_error(), 1e-9);
  check(std::abs(pts[0].fraction() - onset.onset_fraction) <= kSigmaGate * sigma,
        "sampled-spectrum-onset",
        fmt("f(2) = %.5f vs exact %.5f (sigma %.5f)", pts[0].fraction(),
            onset.onset_fraction, sigma));
}

void splitting_vs_exact() {
  FaultSystem sys = toric_bitflip_system(2);
  MatchingDecoder dec(sys);
  auto schedule = splitting_schedule(sys, 0.08, 0.01, 2);
  const double start = exact_failure_rate(sys, dec, 0.08);
  const double target = exact_failure_rate(sys, dec, 0.01);
  MultiSeedOptions opts;
  opts.num_seeds = 3;
  opts.num_repeats = 2;
  opts.chain.chain_length = 20000;
  Rng rng(41);
  auto res = multi_seeded_split(sys, dec, schedule, start, opts, rng);
  const double rel = std::abs(res.mean.back() - target) / target;
  check(rel <= kSplitRel, "splitting-vs-exact",
        fmt("estimate %.4e vs exact %.4e (off %.1f%%)", res.mean.back(), target,
            100 * rel));

  FaultSystem chain = FaultSystem::from_matrices(
      [] {
        rareqec::BinaryMatrix m(3, 4);
        for (std::size_t i = 0; i < 3; ++i) {
          m.set(i, i);
          m.set(i, i + 1);
        }
        return m;
      }(),
      [] {
        rareqec::BinaryMatrix m(1, 4);
        m.set(0, 0);
        return m;
      }(),
      {1, 2, 1, 2});
  ExhaustiveMinWeightDecoder exh(chain);
  auto sched2 = splitting_schedule(chain, 0.1, 0.02, 2);
  const double start2 = exact_failure_rate(chain, exh, 0.1);
  const double target2 = exact_failure_rate(chain, exh, 0.02);
  Rng rng2(43);
  BitVec seed = find_failing_config(chain, exh, 0.1, 100000, rng2);
  SplittingOptions sopts;
  sopts.chain_length = 30000;
  auto run = split_failure_rate(chain, exh, sched2, start2, seed, sopts, rng2);
  const double rel2 = std::abs(run.estimates.back() - target2) / target2;
  check(rel2 <= kSplitRel, "splitting-multiplicities",
        fmt("estimate %.4e vs exact %.4e (off %.1f%%)", run.estimates.back(), target2,
            100 * rel2));
}

}  // namespace

int main(int argc, char** argv) {
  bool fast = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--fast") == 0) fast = true;

  toric_closed_forms();
  rotated_toric_counts();
  bicycle_d6();
  bicycle_d12();
  if (!fast)
    bicycle_d18();
  else
    std::printf("SKIP bicycle-d18: --fast\n");
  transform_identity();
  multiplicity_folding();
  ansatz_identities();
  fit_recovery();
  onset_anchored_pipeline();
  splitting_vs_exact();

  std::printf("%s: %d criterion(s) failed\n", g_failed == 0 ? "ACCEPTED" : "REJECTED",
              g_failed);
  return g_failed == 0 ? 0 : 1;
}
