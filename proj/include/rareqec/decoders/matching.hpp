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
#include <queue>
#include <stdexcept>
#include <vector>

#include "rareqec/decoders/decoder.hpp"
#include "rareqec/decoders/weighted_matching.hpp"

namespace rareqec {

// Minimum-weight decoding for systems whose faults each touch at most two
// checks.  Defects are paired up by minimum-weight perfect matching over
// shortest-path distances in the check graph; faults touching one check
// connect it to a virtual boundary node.  With the default unit weights the
// returned correction has exactly minimum weight.
class MatchingDecoder : public Decoder {
 public:
  explicit MatchingDecoder(const FaultSystem& sys) : sys_(&sys) {
    if (!sys.finalized()) throw std::invalid_argument("system not finalized");
    for (std::size_t j = 0; j < sys.num_faults(); ++j) {
      const auto deg = sys.checks_of(j).size();
      if (deg == 0 || deg > 2)
        throw std::invalid_argument("matchable faults must touch one or two checks");
      if (deg == 1) has_boundary_ = true;
    }
    weights_.assign(sys.num_faults(), 1.0);
    scale_ = 1.0;
  }

  // Positive per-fault costs; the decoder then minimizes total cost.
  void set_fault_weights(const std::vector<double>& w) {
    if (w.size() != sys_->num_faults()) throw std::invalid_argument("weight size mismatch");
    double w_max = 0;
    for (double x : w) {
      if (!(x > 0)) throw std::invalid_argument("fault weights must be positive");
      w_max = std::max(w_max, x);
    }
    weights_ = w;
    // Integer grid used when rounding path lengths for the matcher.
    scale_ = static_cast<double>(std::int64_t{1} << 24) / (w_max * sys_->num_checks());
  }

  std::string name() const override { return "matching"; }

  BitVec decode(const BitVec& syndrome) override {
    BitVec correction(sys_->num_faults());
    auto defects = syndrome.to_indices();
    if (defects.empty()) return correction;
    const std::size_t k = defects.size();
    if (k % 2 != 0 && !has_boundary_)
      throw std::runtime_error("odd defect count without a boundary");

    // Shortest paths from every defect; node num_checks() is the boundary.
    dist_.assign(k, {});
    via_fault_.assign(k, {});
    for (std::size_t i = 0; i < k; ++i)
      dijkstra(static_cast<std::size_t>(defects[i]), dist_[i], via_fault_[i]);

    const std::size_t nodes = has_boundary_ ? 2 * k : k;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::int64_t>> cost(nodes,
                                                std::vector<std::int64_t>(nodes, 0));
    const auto grid = [&](double d) {
      if (d == inf) return std::int64_t{1} << 40;
      return static_cast<std::int64_t>(std::llround(d * scale_)) + 1;
    };
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        cost[i][j] = cost[j][i] =
            grid(dist_[i][static_cast<std::size_t>(defects[j])]);
    if (has_boundary_) {
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
          if (i != j) cost[k + i][k + j] = 1;  // boundary nodes pair freely
        for (std::size_t j = 0; j < k; ++j)
          cost[i][k + j] = cost[k + j][i] =
              (i == j) ? grid(dist_[i][sys_->num_checks()]) : (std::int64_t{1} << 40);
      }
    }

    auto mate = min_weight_perfect_matching(std::move(cost));
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t m = static_cast<std::size_t>(mate[i]);
      if (m < k) {
        if (m > i) xor_path(i, static_cast<std::size_t>(defects[m]), correction);
      } else {
        xor_path(i, sys_->num_checks(), correction);
      }
    }
    return correction;
  }

 private:
  void dijkstra(std::size_t source, std::vector<double>& dist,
                std::vector<std::int32_t>& via) const {
    const std::size_t n = sys_->num_checks() + 1;  // last node = boundary
    dist.assign(n, std::numeric_limits<double>::infinity());
    via.assign(n, -1);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, c] = heap.top();
      heap.pop();
      if (d > dist[c]) continue;
      if (c == sys_->num_checks()) continue;  // boundary is a sink
      for (auto f : sys_->faults_of_check(c)) {
        const auto fj = static_cast<std::size_t>(f);
        const auto& cs = sys_->checks_of(fj);
        const std::size_t other =
            cs.size() == 1
                ? sys_->num_checks()
                : static_cast<std::size_t>(cs[0] == static_cast<std::int32_t>(c) ? cs[1]
                                                                                 : cs[0]);
        const double nd = d + weights_[fj];
        if (nd < dist[other]) {
          dist[other] = nd;
          via[other] = f;
          heap.emplace(nd, other);
        }
      }
    }
  }

  // XORs the faults of the stored shortest path from defect i to node `to`.
  void xor_path(std::size_t i, std::size_t to, BitVec& correction) const {
    const auto& via = via_fault_[i];
    std::size_t at = to;
    while (via[at] >= 0) {
      const auto fj = static_cast<std::size_t>(via[at]);
      correction.flip(fj);
      const auto& cs = sys_->checks_of(fj);
      if (cs.size() == 1) {
        at = static_cast<std::size_t>(cs[0]);
      } else {
        const std::size_t a = static_cast<std::size_t>(cs[0]);
        const std::size_t b = static_cast<std::size_t>(cs[1]);
        at = (at == a) ? b : a;
      }
    }
  }

  const FaultSystem* sys_;
  bool has_boundary_ = false;
  std::vector<double> weights_;
  double scale_ = 1.0;
  std::vector<std::vector<double>> dist_;
  std::vector<std::vector<std::int32_t>> via_fault_;
};

}  // namespace rareqec
