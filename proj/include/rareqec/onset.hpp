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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rareqec/binomial.hpp"
#include "rareqec/bitvec.hpp"
#include "rareqec/fault_system.hpp"
#include "rareqec/sampling.hpp"

namespace rareqec {

namespace detail {

inline std::size_t common_logical_weight(const FaultSystem& sys,
                                         const std::vector<BitVec>& logicals) {
  if (logicals.empty()) throw std::invalid_argument("need at least one logical");
  const std::size_t d = logicals.front().count();
  for (const auto& l : logicals) {
    if (l.size() != sys.num_faults()) throw std::invalid_argument("logical has wrong length");
    if (l.count() != d) throw std::invalid_argument("logicals must share one weight");
    if (!sys.syndrome(l).none()) throw std::invalid_argument("input is detectable");
    if (sys.action(l).none()) throw std::invalid_argument("input has no action");
  }
  if (d == 0 || d % 2 != 0)
    throw std::invalid_argument("onset analysis needs an even nonzero weight");
  return d;
}

inline double multiplicity_product(const FaultSystem& sys, const BitVec& v) {
  if (sys.is_uniform()) return 1.0;
  double rho = 1.0;
  v.for_each_set([&](std::size_t j) { rho *= static_cast<double>(sys.multiplicity(j)); });
  return rho;
}

}  // namespace detail

// Minimum-weight failure census of the best achievable decoder.  Counts are
// in expanded faults: a pattern contributes the product of the
// multiplicities on its support.
struct OnsetAnalysis {
  std::size_t logical_weight = 0;          // weight of the supplied logicals
  std::size_t onset_weight = 0;            // half of it
  std::uint64_t num_logicals = 0;
  double expanded_logicals = 0;
  std::uint64_t distinct_restrictions = 0;
  double expanded_restrictions = 0;
  double fails = 0;
  double onset_fraction = 0;               // fails / #(expanded sets of onset weight)
};

// Given every minimum-weight logical, computes exactly how many
// minimum-weight fault sets defeat an optimal decoder.  Half-weight
// restrictions of the logicals are grouped by syndrome; within each group an
// optimal decoder converts the largest action class and loses the rest.
// With an incomplete logical set the fail count is a lower bound.
inline OnsetAnalysis exact_optimal_onset(const FaultSystem& sys,
                                         const std::vector<BitVec>& logicals) {
  const std::size_t d = detail::common_logical_weight(sys, logicals);
  const std::size_t half = d / 2;
  const std::size_t n = sys.num_faults();
  const std::size_t stride = (n + 63) / 64;

  OnsetAnalysis out;
  out.logical_weight = d;
  out.onset_weight = half;
  out.num_logicals = logicals.size();
  for (const auto& l : logicals)
    out.expanded_logicals += detail::multiplicity_product(sys, l);

  // Pack every half-weight restriction of every logical.
  std::vector<std::uint64_t> flat;
  flat.reserve(logicals.size() * binomial_exact(d, half) * stride);
  std::vector<std::int32_t> support;
  std::vector<std::size_t> idx(half);
  for (const auto& l : logicals) {
    support = l.to_indices();
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
      const std::size_t base = flat.size();
      flat.resize(base + stride, 0);
      for (std::size_t t = 0; t < half; ++t) {
        const auto b = static_cast<std::size_t>(support[idx[t]]);
        flat[base + b / 64] |= std::uint64_t{1} << (b % 64);
      }
      std::size_t i = half;
      while (i > 0 && idx[i - 1] == i - 1 + d - half) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < half; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  const std::size_t total = flat.size() / stride;
  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0u);
  const auto word_at = [&](std::uint32_t r) { return flat.begin() + std::size_t{r} * stride; };
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(word_at(a), word_at(a) + stride, word_at(b),
                                        word_at(b) + stride);
  });

  // Deduplicate, then label each distinct restriction with its multiplicity
  // product and its (syndrome, action) key.
  const std::size_t sig_words = (sys.num_checks() + 63) / 64;
  const std::size_t act_words = (sys.num_actions() + 63) / 64;
  const std::size_t key_stride = sig_words + act_words;
  std::vector<std::uint64_t> keys;
  std::vector<double> rho;
  BitVec sigma(sys.num_checks());
  BitVec action(sys.num_actions());
  for (std::size_t i = 0; i < total; ++i) {
    if (i > 0 && std::equal(word_at(order[i]), word_at(order[i]) + stride, word_at(order[i - 1])))
      continue;
    sigma.clear();
    action.clear();
    double r = 1.0;
    for (std::size_t w = 0; w < stride; ++w) {
      std::uint64_t bits = *(word_at(order[i]) + w);
      while (bits) {
        const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        sys.flip_syndrome(sigma, j);
        sys.flip_action(action, j);
        r *= static_cast<double>(sys.multiplicity(j));
      }
    }
    keys.insert(keys.end(), sigma.words().begin(), sigma.words().end());
    keys.insert(keys.end(), action.words().begin(), action.words().end());
    rho.push_back(r);
  }
  const std::size_t distinct = rho.size();
  out.distinct_restrictions = distinct;
  out.expanded_restrictions = std::accumulate(rho.begin(), rho.end(), 0.0);

  std::vector<std::uint32_t> by_key(distinct);
  std::iota(by_key.begin(), by_key.end(), 0u);
  const auto key_at = [&](std::uint32_t r) { return keys.begin() + std::size_t{r} * key_stride; };
  std::sort(by_key.begin(), by_key.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(key_at(a), key_at(a) + key_stride, key_at(b),
                                        key_at(b) + key_stride);
  });
  const auto same_sigma = [&](std::uint32_t a, std::uint32_t b) {
    return std::equal(key_at(a), key_at(a) + sig_words, key_at(b));
  };
  const auto same_key = [&](std::uint32_t a, std::uint32_t b) {
    return std::equal(key_at(a), key_at(a) + key_stride, key_at(b));
  };

  std::size_t b = 0;
  while (b < distinct) {
    std::size_t e = b + 1;
    while (e < distinct && same_sigma(by_key[b], by_key[e])) ++e;
    double group_total = 0, group_best = 0;
    std::size_t c = b;
    while (c < e) {
      std::size_t c2 = c + 1;
      while (c2 < e && same_key(by_key[c], by_key[c2])) ++c2;
      double cls = 0;
      for (std::size_t t = c; t < c2; ++t) cls += rho[by_key[t]];
      group_total += cls;
      group_best = std::max(group_best, cls);
      c = c2;
    }
    out.fails += group_total - group_best;
    b = e;
  }
  out.onset_fraction = out.fails / binomial(sys.expanded_size(), half);
  return out;
}

struct OnsetEstimate {
  double fails = 0;
  double std_error = 0;
  double onset_fraction = 0;
  double fraction_std_error = 0;
  std::int64_t trials = 0;
};

// Monte-Carlo version of exact_optimal_onset: draws a uniform half-weight
// restriction of a uniform logical, reconstructs the full set of half-weight
// fault sets sharing its syndrome from the supplied logicals, and scores the
// failure chance of the optimal decoder on it.  Requires the complete
// minimum-weight logical set.
inline OnsetEstimate sample_optimal_onset(const FaultSystem& sys,
                                          const std::vector<BitVec>& logicals,
                                          std::int64_t trials, Rng& rng) {
  const std::size_t d = detail::common_logical_weight(sys, logicals);
  const std::size_t half = d / 2;
  if (trials < 2) throw std::invalid_argument("need at least two trials");

  std::vector<std::vector<std::int32_t>> supports;
  supports.reserve(logicals.size());
  for (const auto& l : logicals) supports.push_back(l.to_indices());

  std::uniform_int_distribution<std::size_t> pick(0, logicals.size() - 1);
  std::vector<std::int32_t> pool(d);
  std::unordered_set<BitVec, BitVecHash> errors;
  std::unordered_map<BitVec, double, BitVecHash> class_rho;
  double sum = 0, sum_sq = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const std::size_t u = pick(rng);
    pool.assign(supports[u].begin(), supports[u].end());
    for (std::size_t i = 0; i < half; ++i) {
      std::uniform_int_distribution<std::size_t> swap_with(i, d - 1);
      std::swap(pool[i], pool[swap_with(rng)]);
    }
    BitVec restriction(sys.num_faults());
    for (std::size_t i = 0; i < half; ++i)
      restriction.set(static_cast<std::size_t>(pool[i]));
    BitVec remainder = logicals[u];
    remainder ^= restriction;

    errors.clear();
    std::int64_t mu = 0;
    for (const auto& l : logicals) {
      if (is_subset(restriction, l)) {
        BitVec e = l;
        e ^= restriction;
        errors.insert(std::move(e));
        ++mu;
      }
      if (is_subset(remainder, l)) {
        BitVec e = l;
        e ^= remainder;
        errors.insert(std::move(e));
      }
    }
    class_rho.clear();
    for (const auto& e : errors)
      class_rho[sys.action(e)] += detail::multiplicity_product(sys, e);
    double best = 0;
    for (const auto& [a, r] : class_rho) best = std::max(best, r);
    std::size_t num_best = 0;
    for (const auto& [a, r] : class_rho) num_best += (r == best);
    const double own = class_rho.at(sys.action(restriction));
    const double fail_chance =
        own == best ? 1.0 - 1.0 / static_cast<double>(num_best) : 1.0;
    const double term =
        detail::multiplicity_product(sys, restriction) * fail_chance / static_cast<double>(mu);
    sum += term;
    sum_sq += term * term;
  }

  const double scale =
      static_cast<double>(logicals.size()) * static_cast<double>(binomial_exact(d, half));
  const double mean = sum / static_cast<double>(trials);
  const double var =
      std::max(0.0, (sum_sq - static_cast<double>(trials) * mean * mean) /
                        static_cast<double>(trials - 1));
  OnsetEstimate out;
  out.trials = trials;
  out.fails = scale * mean;
  out.std_error = scale * std::sqrt(var / static_cast<double>(trials));
  const double denom = binomial(sys.expanded_size(), half);
  out.onset_fraction = out.fails / denom;
  out.fraction_std_error = out.std_error / denom;
  return out;
}

}  // namespace rareqec
