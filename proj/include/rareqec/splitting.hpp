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
#include <stdexcept>
#include <vector>

#include "rareqec/bitvec.hpp"
#include "rareqec/decoders/decoder.hpp"
#include "rareqec/fault_system.hpp"
#include "rareqec/sampling.hpp"

namespace rareqec {

// Estimates failure rates far below Monte Carlo reach by walking a Markov
// chain over failing configurations at a ladder of physical rates and
// chaining the neighbouring-rate probability ratios.  Everything here works
// in the expanded representation, where each mechanism carries the same rate
// q = p / probability_scale and chain statistics depend only on the weight.

// Geometric ladder from start to target (either direction); step sizes
// shrink as the typical failing weight max(min_fail_weight, p*N) grows.
inline std::vector<double> splitting_schedule(const FaultSystem& sys, double p_start,
                                              double p_target,
                                              std::size_t min_fail_weight) {
  if (p_start <= 0 || p_target <= 0) throw std::invalid_argument("rates must be positive");
  const double n = static_cast<double>(sys.expanded_size());
  const bool down = p_target < p_start;
  std::vector<double> schedule{p_start};
  double p = p_start;
  while (down ? p > p_target : p < p_target) {
    const double w = std::max(static_cast<double>(min_fail_weight), p * n);
    p *= std::exp2((down ? -1.0 : 1.0) / std::sqrt(w));
    if (down ? p <= p_target : p >= p_target) p = p_target;
    schedule.push_back(p);
  }
  return schedule;
}

namespace detail {

// log pi_to(E) - log pi_from(E) as an affine function of the expanded weight.
struct LogWeightRatio {
  double slope = 0, base = 0;
  LogWeightRatio() = default;
  LogWeightRatio(double q_from, double q_to, std::int64_t expanded_size) {
    const double tail = std::log1p(-q_to) - std::log1p(-q_from);
    slope = std::log(q_to) - std::log(q_from) - tail;
    base = static_cast<double>(expanded_size) * tail;
  }
  double operator()(std::int32_t w) const { return base + slope * static_cast<double>(w); }
};

inline double logistic(double x) {
  if (x > 700) return 0.0;
  return 1.0 / (1.0 + std::exp(x));
}

struct TermStats {
  double mean = 0, sd = 0, half_mean = 0;
};

// Mean, spread and first-half mean of g(pi_j/pi_k) over the chain weights,
// where lr(w) = log pi_k - log pi_j.
inline TermStats g_term_stats(const std::vector<std::int32_t>& weights,
                              const LogWeightRatio& lr) {
  TermStats out;
  const std::size_t n = weights.size();
  const std::size_t half = (n + 1) / 2;
  double sum = 0, sum_sq = 0, half_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = logistic(-lr(weights[i]));
    sum += g;
    sum_sq += g * g;
    if (i < half) half_sum += g;
  }
  out.mean = sum / static_cast<double>(n);
  out.half_mean = half_sum / static_cast<double>(half);
  if (n > 1) {
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(n) * out.mean * out.mean) /
                          static_cast<double>(n - 1));
    out.sd = std::sqrt(var);
  }
  return out;
}

// Iterated two-sample ratio estimate of P(p_j)/P(p_jm1) given chain weights
// at both rates; d(w) = log pi_j - log pi_jm1.  The scale constant converges
// to the ratio itself, which minimizes the statistical error.
inline double iterated_ratio(const std::vector<std::int32_t>& prev_weights,
                             const std::vector<std::int32_t>& cur_weights,
                             const LogWeightRatio& d) {
  double c = 1.0;
  for (int iter = 0; iter < 3; ++iter) {
    double num = 0;
    for (auto w : prev_weights) num += 1.0 / (1.0 + c * std::exp(std::min(700.0, -d(w))));
    num /= static_cast<double>(prev_weights.size());
    double den = 0;
    for (auto w : cur_weights) den += 1.0 / (1.0 + std::exp(std::min(700.0, d(w))) / c);
    den /= static_cast<double>(cur_weights.size());
    c = c * num / den;
  }
  return c;
}

// Single-flip Metropolis walk over failing configurations.  A proposed flip
// first passes the stationary-ratio test, then the decoder confirms the new
// configuration still fails; otherwise the walk stays put.
class FailingWalker {
 public:
  FailingWalker(const FaultSystem& sys, Decoder& decoder, BitVec expanded_config)
      : sys_(&sys),
        decoder_(&decoder),
        expanded_(std::move(expanded_config)),
        compressed_(sys.num_faults()) {
    if (expanded_.size() != static_cast<std::size_t>(sys.expanded_size()))
      throw std::invalid_argument("seed configuration has wrong expanded size");
    expanded_.for_each_set([&](std::size_t i) {
      compressed_.flip(sys_->fault_of_expanded(static_cast<std::int64_t>(i)));
    });
    weight_ = static_cast<std::int32_t>(expanded_.count());
    if (!decode_fails(*sys_, *decoder_, compressed_))
      throw std::invalid_argument("seed configuration does not fail");
  }

  std::int32_t step(double q, Rng& rng) {
    std::uniform_int_distribution<std::int64_t> pick(0, sys_->expanded_size() - 1);
    const std::int64_t idx = pick(rng);
    const auto i = static_cast<std::size_t>(idx);
    const bool adding = !expanded_.get(i);
    if (adding) {
      std::bernoulli_distribution pass(q / (1.0 - q));
      if (!pass(rng)) return weight_;
    }
    const std::size_t fault = sys_->fault_of_expanded(idx);
    expanded_.flip(i);
    compressed_.flip(fault);
    if (decode_fails(*sys_, *decoder_, compressed_)) {
      weight_ += adding ? 1 : -1;
      ++transitions_;
    } else {
      expanded_.flip(i);
      compressed_.flip(fault);
    }
    return weight_;
  }

  const BitVec& expanded() const { return expanded_; }
  std::int64_t transitions() const { return transitions_; }

 private:
  const FaultSystem* sys_;
  Decoder* decoder_;
  BitVec expanded_, compressed_;
  std::int32_t weight_ = 0;
  std::int64_t transitions_ = 0;
};

}  // namespace detail

struct SplittingOptions {
  std::int64_t chain_length = 100000;   // initial samples per rate
  double relative_error = 0.25;         // target for the final estimate
  double growth_factor = 2.0;           // chain extension scaling
  int max_growth_rounds = 10;
};

struct ChainSummary {
  double physical_rate = 0;
  std::int64_t samples = 0;
  std::int64_t transitions = 0;
  double mean_weight = 0;
  bool converged = true;
};

struct SplittingResult {
  std::vector<double> physical_rates;
  std::vector<double> ratios;     // consecutive failure-rate ratios
  std::vector<double> estimates;  // cumulative, anchored on the start estimate
  std::vector<ChainSummary> chains;
  bool converged = true;
};

// One splitting run along the schedule.  start_estimate is the known failure
// rate at schedule.front(); seed_config is a failing expanded configuration
// sampled near that rate.  Each chain seeds the next with its final state.
inline SplittingResult split_failure_rate(const FaultSystem& sys, Decoder& decoder,
                                          const std::vector<double>& schedule,
                                          double start_estimate, BitVec seed_config,
                                          const SplittingOptions& opts, Rng& rng) {
  if (schedule.empty()) throw std::invalid_argument("empty schedule");
  const double scale = sys.probability_scale();
  std::vector<double> q(schedule.size());
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    q[j] = schedule[j] / scale;
    if (q[j] <= 0 || q[j] >= 0.5)
      throw std::invalid_argument("per-mechanism rates must lie in (0, 0.5)");
  }
  const std::size_t t = schedule.size();
  const double per_chain_budget = opts.relative_error / std::sqrt(static_cast<double>(t));

  SplittingResult out;
  out.physical_rates = schedule;
  out.estimates = {start_estimate};

  detail::FailingWalker walker(sys, decoder, std::move(seed_config));
  std::vector<std::int32_t> prev_weights, weights;
  for (std::size_t j = 0; j < t; ++j) {
    weights.clear();
    std::int64_t target = opts.chain_length;
    double growth = opts.growth_factor;
    ChainSummary summary;
    summary.physical_rate = schedule[j];
    int rounds = 0;
    while (true) {
      while (static_cast<std::int64_t>(weights.size()) < target)
        weights.push_back(walker.step(q[j], rng));
      if (t == 1) break;
      double sigma = 0, delta = 0;
      for (int dir : {-1, +1}) {
        const std::size_t k = j + static_cast<std::size_t>(dir);
        if ((dir < 0 && j == 0) || k >= t) continue;
        const detail::LogWeightRatio lr(q[j], q[k], sys.expanded_size());
        const auto stats = detail::g_term_stats(weights, lr);
        sigma = std::max(sigma, stats.sd / stats.mean /
                                    std::sqrt(static_cast<double>(weights.size())));
        delta = std::max(delta, std::abs(stats.mean - stats.half_mean) / stats.mean);
      }
      if (sigma + delta <= per_chain_budget) break;
      if (++rounds > opts.max_growth_rounds) {
        summary.converged = false;
        out.converged = false;
        break;
      }
      target += static_cast<std::int64_t>(std::ceil(growth * static_cast<double>(opts.chain_length)));
      growth *= opts.growth_factor;
    }
    summary.samples = static_cast<std::int64_t>(weights.size());
    summary.transitions = walker.transitions();
    double wsum = 0;
    for (auto w : weights) wsum += w;
    summary.mean_weight = wsum / static_cast<double>(weights.size());
    out.chains.push_back(summary);

    if (j > 0) {
      const detail::LogWeightRatio d(q[j - 1], q[j], sys.expanded_size());
      const double r = detail::iterated_ratio(prev_weights, weights, d);
      out.ratios.push_back(r);
      out.estimates.push_back(out.estimates.back() * r);
    }
    prev_weights.swap(weights);
  }
  // Transitions accumulate over the whole walk; report per-chain deltas.
  for (std::size_t j = out.chains.size(); j-- > 1;)
    out.chains[j].transitions -= out.chains[j - 1].transitions;
  return out;
}

// Draws an i.i.d. expanded configuration at per-mechanism rate q.
inline BitVec sample_expanded_error(const FaultSystem& sys, double q, Rng& rng) {
  BitVec e(static_cast<std::size_t>(sys.expanded_size()));
  std::bernoulli_distribution coin(q);
  for (std::int64_t i = 0; i < sys.expanded_size(); ++i)
    if (coin(rng)) e.set(static_cast<std::size_t>(i));
  return e;
}

// Monte Carlo search for a failing configuration at per-mechanism rate q.
inline BitVec find_failing_config(const FaultSystem& sys, Decoder& decoder, double q,
                                  std::int64_t max_trials, Rng& rng) {
  BitVec compressed(sys.num_faults());
  for (std::int64_t trial = 0; trial < max_trials; ++trial) {
    BitVec expanded = sample_expanded_error(sys, q, rng);
    compressed.clear();
    expanded.for_each_set([&](std::size_t i) {
      compressed.flip(sys.fault_of_expanded(static_cast<std::int64_t>(i)));
    });
    if (decode_fails(sys, decoder, compressed)) return expanded;
  }
  throw std::runtime_error("no failing configuration found at the starting rate");
}

struct MultiSeedOptions {
  int num_seeds = 12;                        // independently sampled start configs
  int num_repeats = 3;                       // chains per start config
  SplittingOptions chain;
  std::int64_t seed_search_max_trials = 10000000;
};

struct MultiSeedResult {
  std::vector<double> physical_rates;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<SplittingResult> runs;
};

// Runs the splitting estimate num_seeds * num_repeats times, each time
// starting from a fresh Monte Carlo failing configuration at the head of the
// schedule, and aggregates the per-rate estimates.
inline MultiSeedResult multi_seeded_split(const FaultSystem& sys, Decoder& decoder,
                                          const std::vector<double>& schedule,
                                          double start_estimate,
                                          const MultiSeedOptions& opts, Rng& rng) {
  if (schedule.empty()) throw std::invalid_argument("empty schedule");
  MultiSeedResult out;
  out.physical_rates = schedule;
  const double q0 = schedule.front() / sys.probability_scale();
  for (int s = 0; s < opts.num_seeds; ++s) {
    BitVec seed = find_failing_config(sys, decoder, q0, opts.seed_search_max_trials, rng);
    for (int m = 0; m < opts.num_repeats; ++m)
      out.runs.push_back(
          split_failure_rate(sys, decoder, schedule, start_estimate, seed, opts.chain, rng));
  }
  const std::size_t t = schedule.size();
  out.mean.assign(t, 0.0);
  out.stddev.assign(t, 0.0);
  const double n = static_cast<double>(out.runs.size());
  for (const auto& run : out.runs)
    for (std::size_t j = 0; j < t; ++j) out.mean[j] += run.estimates[j] / n;
  for (const auto& run : out.runs)
    for (std::size_t j = 0; j < t; ++j) {
      const double d = run.estimates[j] - out.mean[j];
      out.stddev[j] += d * d / n;
    }
  for (std::size_t j = 0; j < t; ++j) out.stddev[j] = std::sqrt(out.stddev[j]);
  return out;
}

}  // namespace rareqec
