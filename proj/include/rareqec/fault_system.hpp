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
#include <cassert>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rareqec/binary_matrix.hpp"
#include "rareqec/bitvec.hpp"

namespace rareqec {

// A binary error model: faults flip subsets of parity checks and subsets of
// action bits.  Checks are observable (they define the syndrome a decoder
// sees); action bits are not, and a correction succeeds exactly when it
// reproduces the action parity of the error.
//
// Faults are stored deduplicated ("compressed"): a fault with multiplicity m
// stands for m independent physical mechanisms with identical check/action
// supports.  At physical rate p each mechanism fires independently with
// probability q = p / probability_scale, so the compressed fault is active
// (odd number of its mechanisms fired) with probability (1-(1-2q)^m)/2,
// which is m*q to first order.  Weight-resolved quantities (weight of an
// error, number of errors of a weight class) always refer to the expanded
// mechanism count N = sum of multiplicities.
class FaultSystem {
 public:
  FaultSystem() = default;
  FaultSystem(std::size_t num_checks, std::size_t num_actions)
      : num_checks_(num_checks), num_actions_(num_actions) {}

  std::size_t num_checks() const { return num_checks_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_faults() const { return checks_of_.size(); }
  std::int64_t expanded_size() const { return expanded_size_; }
  double probability_scale() const { return scale_; }
  void set_probability_scale(double b) {
    if (!(b > 0)) throw std::invalid_argument("probability scale must be positive");
    scale_ = b;
  }

  const std::vector<std::int32_t>& checks_of(std::size_t fault) const {
    return checks_of_[fault];
  }
  const std::vector<std::int32_t>& actions_of(std::size_t fault) const {
    return actions_of_[fault];
  }
  std::int64_t multiplicity(std::size_t fault) const { return mult_[fault]; }
  bool is_uniform() const { return uniform_; }

  const std::vector<std::int32_t>& faults_of_check(std::size_t check) const {
    return faults_of_check_[check];
  }
  std::size_t max_checks_per_fault() const { return max_checks_per_fault_; }

  void add_fault(std::vector<std::int32_t> checks, std::vector<std::int32_t> actions,
                 std::int64_t multiplicity = 1) {
    if (multiplicity < 1) throw std::invalid_argument("fault multiplicity must be >= 1");
    std::sort(checks.begin(), checks.end());
    std::sort(actions.begin(), actions.end());
    for (auto c : checks)
      if (c < 0 || static_cast<std::size_t>(c) >= num_checks_)
        throw std::out_of_range("check index out of range");
    for (auto a : actions)
      if (a < 0 || static_cast<std::size_t>(a) >= num_actions_)
        throw std::out_of_range("action index out of range");
    checks_of_.push_back(std::move(checks));
    actions_of_.push_back(std::move(actions));
    mult_.push_back(multiplicity);
    finalized_ = false;
  }

  // Rebuilds the derived adjacency and index tables.  Call after the last
  // add_fault; accessors relying on derived tables assert on stale state.
  void finalize() {
    faults_of_check_.assign(num_checks_, {});
    for (std::size_t j = 0; j < checks_of_.size(); ++j)
      for (auto c : checks_of_[j])
        faults_of_check_[static_cast<std::size_t>(c)].push_back(
            static_cast<std::int32_t>(j));
    mult_prefix_.assign(num_faults() + 1, 0);
    for (std::size_t j = 0; j < num_faults(); ++j)
      mult_prefix_[j + 1] = mult_prefix_[j] + mult_[j];
    expanded_size_ = mult_prefix_.back();
    uniform_ = std::all_of(mult_.begin(), mult_.end(),
                           [](std::int64_t m) { return m == 1; });
    max_checks_per_fault_ = 0;
    for (const auto& cs : checks_of_)
      max_checks_per_fault_ = std::max(max_checks_per_fault_, cs.size());
    finalized_ = true;
  }
  bool finalized() const { return finalized_; }

  // Compressed fault index owning expanded mechanism index idx in [0, N).
  std::size_t fault_of_expanded(std::int64_t idx) const {
    assert(finalized_ && idx >= 0 && idx < expanded_size_);
    auto it = std::upper_bound(mult_prefix_.begin(), mult_prefix_.end(), idx);
    return static_cast<std::size_t>(it - mult_prefix_.begin()) - 1;
  }
  std::int64_t expanded_offset(std::size_t fault) const { return mult_prefix_[fault]; }

  void flip_syndrome(BitVec& sigma, std::size_t fault) const {
    for (auto c : checks_of_[fault]) sigma.flip(static_cast<std::size_t>(c));
  }
  void flip_action(BitVec& act, std::size_t fault) const {
    for (auto a : actions_of_[fault]) act.flip(static_cast<std::size_t>(a));
  }

  // Syndrome/action parity of a compressed fault set (length num_faults()).
  BitVec syndrome(const BitVec& faults) const {
    BitVec sigma(num_checks_);
    faults.for_each_set([&](std::size_t j) { flip_syndrome(sigma, j); });
    return sigma;
  }
  BitVec action(const BitVec& faults) const {
    BitVec act(num_actions_);
    faults.for_each_set([&](std::size_t j) { flip_action(act, j); });
    return act;
  }

  // Whether correction c (with matching syndrome) fails on error e.
  bool fails(const BitVec& error, const BitVec& correction) const {
    return action(error ^ correction).any();
  }

  BinaryMatrix check_matrix() const {
    BinaryMatrix h(num_checks_, num_faults());
    for (std::size_t j = 0; j < num_faults(); ++j)
      for (auto c : checks_of_[j]) h.set(static_cast<std::size_t>(c), j);
    return h;
  }
  BinaryMatrix action_matrix() const {
    BinaryMatrix a(num_actions_, num_faults());
    for (std::size_t j = 0; j < num_faults(); ++j)
      for (auto r : actions_of_[j]) a.set(static_cast<std::size_t>(r), j);
    return a;
  }

  static FaultSystem from_matrices(const BinaryMatrix& checks, const BinaryMatrix& actions,
                                   std::vector<std::int64_t> multiplicity = {},
                                   double probability_scale = 1.0) {
    if (checks.num_cols() != actions.num_cols())
      throw std::invalid_argument("check/action fault counts differ");
    FaultSystem sys(checks.num_rows(), actions.num_rows());
    const std::size_t n = checks.num_cols();
    if (multiplicity.empty()) multiplicity.assign(n, 1);
    if (multiplicity.size() != n)
      throw std::invalid_argument("multiplicity length mismatch");
    BinaryMatrix ht = checks.transposed();
    BinaryMatrix at = actions.transposed();
    for (std::size_t j = 0; j < n; ++j)
      sys.add_fault(ht.row(j).to_indices(), at.row(j).to_indices(), multiplicity[j]);
    sys.set_probability_scale(probability_scale);
    sys.finalize();
    return sys;
  }

  // The same system with check row `extra` appended as check num_checks().
  FaultSystem with_extra_check(const BitVec& extra) const {
    assert(extra.size() == num_faults());
    FaultSystem out(num_checks_ + 1, num_actions_);
    for (std::size_t j = 0; j < num_faults(); ++j) {
      auto cs = checks_of_[j];
      if (extra.get(j)) cs.push_back(static_cast<std::int32_t>(num_checks_));
      out.add_fault(std::move(cs), actions_of_[j], mult_[j]);
    }
    out.set_probability_scale(scale_);
    out.finalize();
    return out;
  }

 private:
  std::size_t num_checks_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<std::vector<std::int32_t>> checks_of_;
  std::vector<std::vector<std::int32_t>> actions_of_;
  std::vector<std::int64_t> mult_;
  double scale_ = 1.0;
  // Derived by finalize().
  std::vector<std::vector<std::int32_t>> faults_of_check_;
  std::vector<std::int64_t> mult_prefix_;
  std::int64_t expanded_size_ = 0;
  bool uniform_ = true;
  std::size_t max_checks_per_fault_ = 0;
  bool finalized_ = false;
};

}  // namespace rareqec
