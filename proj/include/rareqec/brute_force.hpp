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

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rareqec/decoders/decoder.hpp"
#include "rareqec/fault_system.hpp"
#include "rareqec/sampling.hpp"

namespace rareqec {

// Exhaustive references for small systems.  Exponential; used by tests,
// demos and anywhere an exact answer is worth the wait.

// Memoizes corrections per syndrome so enumeration loops pay one decode per
// distinct syndrome.
class CachingDecoder {
 public:
  explicit CachingDecoder(Decoder& inner) : inner_(&inner) {}
  const BitVec& decode(const BitVec& syndrome) {
    auto it = cache_.find(syndrome);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(syndrome, inner_->decode(syndrome)).first->second;
  }

 private:
  Decoder* inner_;
  std::unordered_map<BitVec, BitVec, BitVecHash> cache_;
};

// Exact failure probability at per-mechanism rate q, by enumerating all
// compressed parity patterns with their exact probabilities.
inline double exact_failure_rate(const FaultSystem& sys, Decoder& decoder, double q) {
  const std::size_t n = sys.num_faults();
  if (n > 30) throw std::invalid_argument("system too large for enumeration");
  std::vector<double> p_odd(n);
  for (std::size_t j = 0; j < n; ++j)
    p_odd[j] = odd_parity_probability(sys.multiplicity(j), q);
  CachingDecoder cached(decoder);
  double total = 0.0;
  BitVec e(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    e.words()[0] = mask;
    double prob = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      prob *= (mask >> j) & 1 ? p_odd[j] : 1.0 - p_odd[j];
    if (prob == 0.0) continue;
    if (sys.fails(e, cached.decode(sys.syndrome(e)))) total += prob;
  }
  return total;
}

// Exact count of failing errors among all C(N, w) expanded weight-w errors.
struct WeightClassCount {
  std::int64_t weight = 0;
  std::uint64_t total = 0;
  std::uint64_t failures = 0;
};

inline WeightClassCount exact_weight_class_count(const FaultSystem& sys,
                                                 Decoder& decoder, std::int64_t w) {
  const std::int64_t n = sys.expanded_size();
  if (w < 0 || w > n) throw std::invalid_argument("weight out of range");
  CachingDecoder cached(decoder);
  WeightClassCount out{w, 0, 0};
  std::vector<std::int64_t> idx(static_cast<std::size_t>(w));
  for (std::int64_t i = 0; i < w; ++i) idx[static_cast<std::size_t>(i)] = i;
  BitVec e(sys.num_faults());
  while (true) {
    e.clear();
    for (auto i : idx) e.flip(sys.fault_of_expanded(i));
    ++out.total;
    if (sys.fails(e, cached.decode(sys.syndrome(e)))) ++out.failures;
    // Next combination in lexicographic order.
    std::int64_t k = w - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - w + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (std::int64_t t = k + 1; t < w; ++t)
      idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
  }
  return out;
}

// All undetectable-but-harmful fault sets with expanded weight <= max_weight,
// by direct enumeration over compressed supports (one mechanism per fault;
// repeated mechanisms cancel and cannot reach a lower weight).
inline std::vector<BitVec> brute_force_logicals(const FaultSystem& sys,
                                                std::size_t max_weight) {
  const std::size_t n = sys.num_faults();
  if (n > 40) throw std::invalid_argument("system too large for enumeration");
  std::vector<BitVec> found;
  std::vector<std::int32_t> idx;
  BitVec e(n);
  const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                                std::size_t left) {
    if (sys.syndrome(e).none() && sys.action(e).any() && e.any()) found.push_back(e);
    if (left == 0) return;
    for (std::size_t j = start; j < n; ++j) {
      e.set(j);
      rec(j + 1, left - 1);
      e.reset(j);
    }
  };
  rec(0, max_weight);
  return found;
}

}  // namespace rareqec
