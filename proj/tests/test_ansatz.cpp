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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "rareqec/ansatz.hpp"
#include "rareqec/binomial.hpp"
#include "rareqec/fit.hpp"

using rareqec::AnsatzFamily;
using rareqec::FailureSpectrumAnsatz;

TEST_CASE("family members collapse into each other") {
  const double a = 0.75, f0 = 3e-4;
  const std::int64_t w0 = 5;
  auto two = FailureSpectrumAnsatz::power_law(a, w0, f0);
  auto three = FailureSpectrumAnsatz::single_slope(a, w0, f0, static_cast<double>(w0));
  auto five = FailureSpectrumAnsatz::crossover(a, w0, f0, 7.0, 7.0, 19.0);
  auto three_match = FailureSpectrumAnsatz::single_slope(a, w0, f0, 7.0);
  auto sharp = five;
  sharp.sharpness = 7.0;
  for (std::int64_t w = 0; w <= 80; ++w) {
    CHECK(two(w) == Catch::Approx(three(w)).margin(1e-15));
    CHECK(five(w) == Catch::Approx(three_match(w)).margin(1e-15));
    CHECK(sharp(w) == Catch::Approx(five(w)).margin(1e-15));
  }
}

TEST_CASE("onset, saturation, and low-fraction linearity") {
  auto f = FailureSpectrumAnsatz::crossover(0.875, 6, 1e-6, 6.0, 11.0, 20.0);
  CHECK(f(0) == 0.0);
  CHECK(f(5) == 0.0);
  CHECK(f(std::int64_t{5000}) == Catch::Approx(0.875).epsilon(1e-12));
  CHECK(f(6) == Catch::Approx(1e-6).epsilon(1e-5));
  CHECK(FailureSpectrumAnsatz::saturation_for_actions(1) == 0.5);
  CHECK(FailureSpectrumAnsatz::saturation_for_actions(12) ==
        Catch::Approx(1.0 - std::exp2(-12.0)));
}

TEST_CASE("crossover curve tracks the enclosure-count combinatorics") {
  // With the slope pinned to w0 + (2 w0 - ln(2 pi w0)) / ln 2, the default
  // sharpness, and the crossover at the onset, the growth factor mirrors
  // C(w, w0) well into the tail.
  for (std::int64_t w0 : {4, 9}) {
    const double dw0 = static_cast<double>(w0);
    const double gamma =
        dw0 + (2.0 * dw0 - std::log(2.0 * M_PI * dw0)) / std::log(2.0);
    const double f0 = 1e-30;
    auto f = FailureSpectrumAnsatz::crossover(1.0, w0, f0, gamma, dw0, dw0);
    for (std::int64_t w : {2 * w0, 10 * w0, 50 * w0}) {
      const double x = static_cast<double>(w) / dw0;
      const double closed_form =
          std::pow(x, gamma) * std::pow((1.0 + x * x) / 2.0, (dw0 - gamma) / 2.0);
      CHECK(f(w) / f0 == Catch::Approx(closed_form).epsilon(1e-9));
    }
    // The closed form tracks the count of weight-w0 subsets loosely at
    // moderate w and tightly deep in the tail.
    CHECK(f(10 * w0) / f0 / rareqec::binomial(10 * w0, w0) == Catch::Approx(1.0).margin(0.45));
    CHECK(f(50 * w0) / f0 / rareqec::binomial(50 * w0, w0) == Catch::Approx(1.0).margin(0.15));
    CHECK(f(w0) / f0 == Catch::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("rate prediction equals the direct weighted sum") {
  auto f = FailureSpectrumAnsatz::single_slope(0.75, 3, 2e-3, 4.0);
  const std::int64_t n = 30;
  for (double q : {0.02, 0.1, 0.3}) {
    double direct = 0;
    for (std::int64_t w = 0; w <= n; ++w)
      direct += f(w) * rareqec::binomial(n, w) * std::pow(q, static_cast<double>(w)) *
                std::pow(1 - q, static_cast<double>(n - w));
    CHECK(rareqec::predicted_failure_rate(f, n, q) == Catch::Approx(direct).epsilon(1e-11));
  }
}

namespace {

std::vector<rareqec::WeightPoint> synthetic_spectrum(const FailureSpectrumAnsatz& truth,
                                                     const std::vector<std::int64_t>& weights,
                                                     double rel_sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<rareqec::WeightPoint> pts;
  for (auto w : weights) {
    const double value = truth(w);
    const double sigma = rel_sigma * value;
    const double observed = seed == 0 ? value : value + sigma * noise(rng);
    pts.push_back({w, observed, std::max(sigma, 1e-300)});
  }
  return pts;
}

}  // namespace

TEST_CASE("noiseless fit recovers the generating curve") {
  auto truth = FailureSpectrumAnsatz::crossover(0.75, 5, 2e-4, 5.0, 9.0, 15.0);
  const std::vector<std::int64_t> weights = {5, 6, 8, 11, 15, 20, 27, 36, 48, 64};
  auto spectrum = synthetic_spectrum(truth, weights, 0.01, 0);

  rareqec::SpectrumFitOptions opts;
  opts.family = AnsatzFamily::crossover;
  opts.onset_weight = 5;
  auto fit = rareqec::fit_failure_spectrum(500, 2, spectrum, {}, opts);
  CHECK(fit.chi_square < 1e-6);
  for (std::int64_t w = 5; w <= 100; w += 5)
    CHECK(fit.ansatz(w) == Catch::Approx(truth(w)).epsilon(0.02));
}

TEST_CASE("noisy fit with rate data predicts into the tail") {
  const std::int64_t n = 500;
  auto truth = FailureSpectrumAnsatz::crossover(0.75, 5, 2e-4, 5.0, 9.0, 15.0);
  const std::vector<std::int64_t> weights = {5, 6, 8, 11, 15, 20, 27, 36, 48, 64};
  auto spectrum = synthetic_spectrum(truth, weights, 0.05, 77);
  std::vector<rareqec::RatePoint> rates;
  for (double q : {0.01, 0.02, 0.04}) {
    const double r = rareqec::predicted_failure_rate(truth, n, q);
    rates.push_back({q, r, 0.05 * r});
  }

  rareqec::SpectrumFitOptions opts;
  opts.family = AnsatzFamily::crossover;
  opts.onset_weight = 5;
  opts.seed = 3;
  auto fit = rareqec::fit_failure_spectrum(n, 2, spectrum, rates, opts);
  const double predicted = rareqec::predicted_failure_rate(fit.ansatz, n, 1e-4);
  const double expected = rareqec::predicted_failure_rate(truth, n, 1e-4);
  CHECK(predicted == Catch::Approx(expected).epsilon(0.25));
}

TEST_CASE("onset scan locates the true onset") {
  auto truth = FailureSpectrumAnsatz::single_slope(0.75, 5, 2e-4, 8.0);
  const std::vector<std::int64_t> weights = {5, 6, 8, 11, 15, 20, 27, 36};
  auto spectrum = synthetic_spectrum(truth, weights, 0.01, 0);
  rareqec::SpectrumFitOptions opts;
  opts.family = AnsatzFamily::single_slope;
  auto fit = rareqec::fit_with_onset_scan(500, 2, spectrum, {}, opts, 3, 8);
  CHECK(fit.ansatz.onset_weight == 5);
  CHECK(fit.ansatz.gamma1 == Catch::Approx(8.0).margin(0.05));
}

TEST_CASE("fixed onset fraction is honored") {
  auto truth = FailureSpectrumAnsatz::single_slope(0.75, 4, 1e-3, 6.0);
  const std::vector<std::int64_t> weights = {4, 5, 7, 10, 14, 20, 28};
  auto spectrum = synthetic_spectrum(truth, weights, 0.01, 0);
  rareqec::SpectrumFitOptions opts;
  opts.family = AnsatzFamily::single_slope;
  opts.onset_weight = 4;
  opts.fit_onset_fraction = false;
  opts.onset_fraction = 1e-3;
  auto fit = rareqec::fit_failure_spectrum(500, 2, spectrum, {}, opts);
  CHECK(fit.ansatz.onset_fraction == 1e-3);
  CHECK(fit.ansatz.gamma1 == Catch::Approx(6.0).margin(0.05));
}

TEST_CASE("spectrum counts convert with an uncertainty floor") {
  std::vector<rareqec::SpectrumPoint> pts = {{4, 1000, 0}, {6, 1000, 10}};
  auto wp = rareqec::to_weight_points(pts);
  CHECK(wp[0].fraction == 0.0);
  CHECK(wp[0].std_error == Catch::Approx(1e-3));
  CHECK(wp[1].fraction == Catch::Approx(0.01));
  CHECK(wp[1].std_error == Catch::Approx(std::sqrt(0.01 * 0.99 / 1000.0)));
}
