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
#include <vector>

#include "rareqec/decoders/decoder.hpp"

namespace rareqec {

// Exact minimum-weight decoding by iterative-deepening branch and bound.
// Exponential in the correction weight; meant for small systems and as a
// reference oracle for the fast decoders.
class ExhaustiveMinWeightDecoder : public Decoder {
 public:
  explicit ExhaustiveMinWeightDecoder(const FaultSystem& sys,
                                      std::size_t max_weight = SIZE_MAX)
      : sys_(&sys),
        max_weight_(std::min<std::size_t>(max_weight, sys.num_faults())) {}

  std::string name() const override { return "exhaustive"; }

  BitVec decode(const BitVec& syndrome) override {
    sigma_ = syndrome;
    unsat_ = sigma_.count();
    forbidden_.assign(sys_->num_faults(), 0);
    support_.clear();
    const std::size_t cmax = std::max<std::size_t>(sys_->max_checks_per_fault(), 1);
    const std::size_t start = (unsat_ + cmax - 1) / cmax;
    for (std::size_t budget = start; budget <= max_weight_; ++budget) {
      if (search(budget)) return BitVec::from_indices(sys_->num_faults(), support_);
    }
    throw std::runtime_error("syndrome has no correction within weight budget");
  }

 private:
  bool search(std::size_t budget) {
    if (unsat_ == 0) return true;
    const std::size_t cmax = std::max<std::size_t>(sys_->max_checks_per_fault(), 1);
    if (budget * cmax < unsat_) return false;
    // Branch on the unsatisfied check with the fewest open faults.
    std::int32_t best_check = -1;
    std::size_t best_open = SIZE_MAX;
    sigma_.for_each_set([&](std::size_t c) {
      std::size_t open = 0;
      for (auto f : sys_->faults_of_check(c))
        if (!forbidden_[static_cast<std::size_t>(f)]) ++open;
      if (open < best_open) {
        best_open = open;
        best_check = static_cast<std::int32_t>(c);
      }
    });
    if (best_open == 0) return false;
    std::vector<std::int32_t> local;
    bool found = false;
    for (auto f : sys_->faults_of_check(static_cast<std::size_t>(best_check))) {
      if (forbidden_[static_cast<std::size_t>(f)]) continue;
      toggle(static_cast<std::size_t>(f));
      support_.push_back(f);
      forbidden_[static_cast<std::size_t>(f)] = 1;
      found = search(budget - 1);
      if (found) break;
      support_.pop_back();
      toggle(static_cast<std::size_t>(f));
      // Keep f excluded for the remaining branches of this node.
      local.push_back(f);
    }
    if (!found)
      for (auto f : local) forbidden_[static_cast<std::size_t>(f)] = 0;
    return found;
  }

  void toggle(std::size_t fault) {
    for (auto c : sys_->checks_of(fault)) {
      const auto ci = static_cast<std::size_t>(c);
      unsat_ += sigma_.get(ci) ? -1 : 1;
      sigma_.flip(ci);
    }
  }

  const FaultSystem* sys_;
  std::size_t max_weight_;
  BitVec sigma_;
  std::size_t unsat_ = 0;
  std::vector<std::uint8_t> forbidden_;
  std::vector<std::int32_t> support_;
};

}  // namespace rareqec
