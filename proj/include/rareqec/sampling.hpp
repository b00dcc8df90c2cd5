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

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "rareqec/decoders/decoder.hpp"
#include "rareqec/fault_system.hpp"

namespace rareqec {

using Rng = std::mt19937_64;

struct TrialStats {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double fraction() const {
    return trials == 0 ? 0.0
                       : static_cast<double>(failures) / static_cast<double>(trials);
  }
  double std_error() const {
    if (trials == 0) return 0.0;
    const double f = fraction();
    return std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
  }
};

struct SampleOptions {
  std::int64_t max_trials = 100000;
  std::int64_t target_failures = 0;  // 0: always run max_trials
  std::uint64_t seed = 1;
};

// Probability that a compressed fault with this multiplicity is active (an
// odd number of its mechanisms fired) at per-mechanism rate q.
inline double odd_parity_probability(std::int64_t multiplicity, double q) {
  return 0.5 * (1.0 - std::pow(1.0 - 2.0 * q, static_cast<double>(multiplicity)));
}

// One i.i.d. error at per-mechanism rate q, folded to compressed parity.
inline BitVec sample_error(const FaultSystem& sys, double q, Rng& rng) {
  BitVec e(sys.num_faults());
  if (sys.is_uniform()) {
    std::bernoulli_distribution coin(q);
    for (std::size_t j = 0; j < sys.num_faults(); ++j)
      if (coin(rng)) e.set(j);
  } else {
    for (std::size_t j = 0; j < sys.num_faults(); ++j) {
      std::bernoulli_distribution coin(odd_parity_probability(sys.multiplicity(j), q));
      if (coin(rng)) e.set(j);
    }
  }
  return e;
}

// Uniform error of exact expanded weight w, folded to compressed parity.
// Distinct mechanisms of one fault cancel pairwise in the parity.
inline BitVec sample_fixed_weight_error(const FaultSystem& sys, std::int64_t w,
                                        Rng& rng) {
  const std::int64_t n = sys.expanded_size();
  BitVec e(sys.num_faults());
  std::unordered_set<std::int64_t> chosen;
  for (std::int64_t i = n - w; i < n; ++i) {
    std::uniform_int_distribution<std::int64_t> pick(0, i);
    std::int64_t idx = pick(rng);
    if (!chosen.insert(idx).second) {
      idx = i;
      chosen.insert(i);
    }
    e.flip(sys.fault_of_expanded(idx));
  }
  return e;
}

inline bool decode_fails(const FaultSystem& sys, Decoder& decoder, const BitVec& error) {
  return sys.fails(error, decoder.decode(sys.syndrome(error)));
}

// Monte Carlo estimate of the failure rate at per-mechanism rate q.
inline TrialStats sample_failure_rate(const FaultSystem& sys, Decoder& decoder,
                                      double q, const SampleOptions& opts) {
  Rng rng(opts.seed);
  TrialStats stats;
  while (stats.trials < opts.max_trials) {
    ++stats.trials;
    if (decode_fails(sys, decoder, sample_error(sys, q, rng))) ++stats.failures;
    if (opts.target_failures > 0 && stats.failures >= opts.target_failures) break;
  }
  return stats;
}

// Monte Carlo estimate of the failing fraction of weight-w errors.
inline TrialStats sample_weight_fraction(const FaultSystem& sys, Decoder& decoder,
                                         std::int64_t w, const SampleOptions& opts) {
  Rng rng(opts.seed);
  TrialStats stats;
  while (stats.trials < opts.max_trials) {
    ++stats.trials;
    if (decode_fails(sys, decoder, sample_fixed_weight_error(sys, w, rng)))
      ++stats.failures;
    if (opts.target_failures > 0 && stats.failures >= opts.target_failures) break;
  }
  return stats;
}

struct SpectrumPoint {
  std::int64_t weight = 0;
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double fraction() const { return TrialStats{trials, failures}.fraction(); }
  double std_error() const { return TrialStats{trials, failures}.std_error(); }
};

inline std::vector<SpectrumPoint> sample_spectrum(const FaultSystem& sys,
                                                  Decoder& decoder,
                                                  const std::vector<std::int64_t>& weights,
                                                  const SampleOptions& opts) {
  std::vector<SpectrumPoint> out;
  out.reserve(weights.size());
  SampleOptions per = opts;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    per.seed = opts.seed + 0x9e3779b9u * (i + 1);
    TrialStats s = sample_weight_fraction(sys, decoder, weights[i], per);
    out.push_back({weights[i], s.trials, s.failures});
  }
  return out;
}

}  // namespace rareqec
