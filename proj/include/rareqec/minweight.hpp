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
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "rareqec/decoders/bp_osd.hpp"
#include "rareqec/decoders/decoder.hpp"
#include "rareqec/fault_system.hpp"
#include "rareqec/sampling.hpp"

namespace rareqec {

// Exact distance: smallest weight of an undetectable fault set with nonzero
// action.  Requires a factory producing exact minimum-weight decoders (for
// instance ExhaustiveMinWeightDecoder); with a heuristic decoder the result
// is only an upper bound.
inline std::size_t distance_exact(const FaultSystem& sys,
                                  const DecoderFactory& min_weight_factory,
                                  BitVec* witness = nullptr) {
  BinaryMatrix actions = sys.action_matrix();
  std::size_t best = SIZE_MAX;
  for (std::size_t i = 0; i < actions.num_rows(); ++i) {
    FaultSystem extended = sys.with_extra_check(actions.row(i));
    auto decoder = min_weight_factory(extended);
    BitVec sigma(extended.num_checks());
    sigma.set(extended.num_checks() - 1);
    BitVec candidate = decoder->decode(sigma);
    if (candidate.count() < best) {
      best = candidate.count();
      if (witness) *witness = candidate;
    }
  }
  return best;
}

namespace detail {

// Shared state for random-row probes: a probe row g = h + l pairs a random h
// from the check row space with a random l outside it from the action rows.
// Any set with zero base syndrome and odd overlap with g then has nonzero
// action, so decoding the unit syndrome of g can only yield logicals.
struct LogicalProber {
  explicit LogicalProber(const FaultSystem& sys)
      : sys(&sys),
        checks(sys.check_matrix()),
        actions(sys.action_matrix()),
        check_space(sys.num_faults()) {
    for (std::size_t i = 0; i < checks.num_rows(); ++i) check_space.add(checks.row(i));
  }

  std::optional<BitVec> probe(const DecoderFactory& factory, Rng& rng) const {
    BitVec g(sys->num_faults());
    do {
      g = checks.random_row_combination(rng);
      g ^= actions.random_row_combination(rng);
    } while (check_space.contains(g));
    FaultSystem extended = sys->with_extra_check(g);
    auto decoder = factory(extended);
    BitVec sigma(extended.num_checks());
    sigma.set(extended.num_checks() - 1);
    BitVec candidate = decoder->decode(sigma);
    if (!sys->syndrome(candidate).none() || sys->action(candidate).none())
      return std::nullopt;
    return candidate;
  }

  const FaultSystem* sys;
  BinaryMatrix checks, actions;
  RowBasis check_space;
};

}  // namespace detail

// One random-row probe; the returned fault set is verified to be a logical
// of the base system.
inline std::optional<BitVec> sample_logical_candidate(const FaultSystem& sys,
                                                      const DecoderFactory& factory,
                                                      Rng& rng) {
  return detail::LogicalProber(sys).probe(factory, rng);
}

struct DistanceBound {
  std::size_t weight = SIZE_MAX;
  BitVec witness;
};

// Randomized upper bound on the distance; tightens with more trials.
inline DistanceBound distance_upper_bound(const FaultSystem& sys,
                                          const DecoderFactory& factory,
                                          std::int64_t trials, Rng& rng) {
  detail::LogicalProber prober(sys);
  DistanceBound best;
  for (std::int64_t t = 0; t < trials; ++t) {
    auto cand = prober.probe(factory, rng);
    if (cand && cand->count() < best.weight) {
      best.weight = cand->count();
      best.witness = *cand;
    }
  }
  if (best.weight == SIZE_MAX) throw std::runtime_error("no logical candidate found");
  return best;
}

struct LogicalSearchResult {
  std::size_t weight = SIZE_MAX;
  std::vector<BitVec> logicals;
  std::int64_t trials_run = 0;
};

// Repeated random-row probes, keeping every distinct logical of the lowest
// weight seen.  If stale_window > 0 the search stops early once that many
// consecutive probes add nothing new.
inline LogicalSearchResult search_min_logicals(const FaultSystem& sys,
                                               const DecoderFactory& factory,
                                               std::int64_t trials, Rng& rng,
                                               std::int64_t stale_window = 0) {
  detail::LogicalProber prober(sys);
  LogicalSearchResult result;
  std::unordered_set<BitVec, BitVecHash> seen;
  std::int64_t stale = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    ++result.trials_run;
    auto cand = prober.probe(factory, rng);
    bool fresh = false;
    if (cand) {
      if (cand->count() < result.weight) {
        result.weight = cand->count();
        seen.clear();
        seen.insert(*cand);
        fresh = true;
      } else if (cand->count() == result.weight && seen.insert(*cand).second) {
        fresh = true;
      }
    }
    stale = fresh ? 0 : stale + 1;
    if (stale_window > 0 && stale >= stale_window) break;
  }
  result.logicals.assign(seen.begin(), seen.end());
  return result;
}

// Decoder factory for logical searches: BP-OSD with a low uniform prior,
// re-randomized multiplicatively per built decoder so repeated probes explore
// different corners of the solution space.
inline DecoderFactory perturbed_bposd_factory(BpOsdConfig config = {},
                                              double base_prior = 0.02,
                                              double jitter = 1.0,
                                              std::uint64_t seed = 12345) {
  auto rng = std::make_shared<Rng>(seed);
  return [config, base_prior, jitter, rng](const FaultSystem& sys) {
    std::uniform_real_distribution<double> u(-jitter, jitter);
    std::vector<double> priors(sys.num_faults());
    for (auto& p : priors)
      p = std::min(0.49, std::max(1e-9, base_prior * std::exp(u(*rng))));
    return std::make_unique<BpOsdDecoder>(sys, config, std::move(priors));
  };
}

namespace detail {

// Decision-tree enumeration of every logical with weight <= max_weight whose
// support contains `seed` and avoids `forbidden` (modified during the walk
// but restored on return).  Each tree level picks the unsatisfied check with
// the fewest open faults and branches over them; branches taken earlier are
// excluded from later siblings, so each support is visited once.
class LogicalEnumerator {
 public:
  LogicalEnumerator(const FaultSystem& sys, std::size_t max_weight)
      : sys_(&sys),
        max_weight_(max_weight),
        sigma_(sys.num_checks()),
        action_(sys.num_actions()) {
    for (std::size_t j = 0; j < sys.num_faults(); ++j)
      if (sys.checks_of(j).empty())
        throw std::invalid_argument("enumeration needs every fault to touch a check");
    // Connectivity of the walk is only guaranteed below D + s, where s is
    // the smallest weight of a nonzero all-zero-syndrome zero-action set; the
    // caller picks max_weight accordingly.
  }

  void run(std::size_t seed, std::vector<std::uint8_t>& forbidden,
           std::vector<BitVec>& out) {
    forbidden_ = &forbidden;
    out_ = &out;
    support_.clear();
    sigma_.clear();
    action_.clear();
    unsat_ = 0;
    nodes_ = 0;
    push(seed);
    (*forbidden_)[seed] = 1;
    walk();
    pop(seed);
    (*forbidden_)[seed] = 0;
  }

  std::uint64_t nodes_visited() const { return nodes_; }

 private:
  void walk() {
    ++nodes_;
    if (unsat_ == 0) {
      if (action_.any()) out_->push_back(BitVec::from_indices(sys_->num_faults(), support_));
      return;  // extending past a closed set never stays within the budget
    }
    const std::size_t cmax = std::max<std::size_t>(sys_->max_checks_per_fault(), 1);
    if (support_.size() + (unsat_ + cmax - 1) / cmax > max_weight_) return;
    std::int32_t branch_check = -1;
    std::size_t best_open = SIZE_MAX;
    sigma_.for_each_set([&](std::size_t c) {
      std::size_t open = 0;
      for (auto f : sys_->faults_of_check(c))
        if (!(*forbidden_)[static_cast<std::size_t>(f)]) ++open;
      if (open < best_open) {
        best_open = open;
        branch_check = static_cast<std::int32_t>(c);
      }
    });
    if (best_open == 0) return;
    std::vector<std::int32_t> taken;
    for (auto f : sys_->faults_of_check(static_cast<std::size_t>(branch_check))) {
      const auto fj = static_cast<std::size_t>(f);
      if ((*forbidden_)[fj]) continue;
      push(fj);
      (*forbidden_)[fj] = 1;
      walk();
      pop(fj);
      taken.push_back(f);  // keep excluded for the remaining siblings
    }
    for (auto f : taken) (*forbidden_)[static_cast<std::size_t>(f)] = 0;
  }

  void push(std::size_t fault) {
    support_.push_back(static_cast<std::int32_t>(fault));
    for (auto c : sys_->checks_of(fault)) {
      const auto ci = static_cast<std::size_t>(c);
      unsat_ += sigma_.get(ci) ? -1 : 1;
      sigma_.flip(ci);
    }
    sys_->flip_action(action_, fault);
  }

  void pop(std::size_t fault) {
    support_.pop_back();
    for (auto c : sys_->checks_of(fault)) {
      const auto ci = static_cast<std::size_t>(c);
      unsat_ += sigma_.get(ci) ? -1 : 1;
      sigma_.flip(ci);
    }
    sys_->flip_action(action_, fault);
  }

  const FaultSystem* sys_;
  std::size_t max_weight_;
  BitVec sigma_, action_;
  std::size_t unsat_ = 0;
  std::uint64_t nodes_ = 0;
  std::vector<std::int32_t> support_;
  std::vector<std::uint8_t>* forbidden_ = nullptr;
  std::vector<BitVec>* out_ = nullptr;
};

}  // namespace detail

// All logicals of weight <= max_weight, found exactly.  Valid while
// max_weight stays below D + s (see LogicalEnumerator); in particular always
// valid for max_weight = D and D + 1 when s >= 2.
inline std::vector<BitVec> enumerate_logicals(const FaultSystem& sys,
                                              std::size_t max_weight,
                                              std::uint64_t* nodes = nullptr) {
  std::vector<BitVec> out;
  std::vector<std::uint8_t> forbidden(sys.num_faults(), 0);
  detail::LogicalEnumerator walker(sys, max_weight);
  std::uint64_t total_nodes = 0;
  // Canonical discovery: the seed is the lowest-index fault of the support.
  for (std::size_t s = 0; s < sys.num_faults(); ++s) {
    walker.run(s, forbidden, out);
    total_nodes += walker.nodes_visited();
    forbidden[s] = 1;
  }
  if (nodes) *nodes = total_nodes;
  return out;
}

inline BitVec apply_permutation(const BitVec& v, const std::vector<std::int32_t>& perm) {
  BitVec out(v.size());
  v.for_each_set([&](std::size_t j) { out.set(static_cast<std::size_t>(perm[j])); });
  return out;
}

// Verifies that a column permutation maps the undetectable sets and the
// harmless sets onto themselves, so it maps logicals to logicals.
inline bool is_system_symmetry(const FaultSystem& sys,
                               const std::vector<std::int32_t>& perm) {
  if (perm.size() != sys.num_faults()) return false;
  BinaryMatrix h = sys.check_matrix();
  BinaryMatrix a = sys.action_matrix();
  RowBasis h_space(sys.num_faults());
  for (std::size_t i = 0; i < h.num_rows(); ++i) h_space.add(h.row(i));
  RowBasis ha_space(sys.num_faults());
  for (std::size_t i = 0; i < h.num_rows(); ++i) ha_space.add(h.row(i));
  for (std::size_t i = 0; i < a.num_rows(); ++i) ha_space.add(a.row(i));
  for (std::size_t i = 0; i < h.num_rows(); ++i)
    if (!h_space.contains(apply_permutation(h.row(i), perm))) return false;
  for (std::size_t i = 0; i < a.num_rows(); ++i)
    if (!ha_space.contains(apply_permutation(a.row(i), perm))) return false;
  return true;
}

// Closes a set of logicals under a group of verified symmetries.
inline std::vector<BitVec> close_under_symmetries(
    const std::vector<BitVec>& logicals,
    const std::vector<std::vector<std::int32_t>>& group) {
  std::unordered_set<BitVec, BitVecHash> closed;
  for (const auto& l : logicals)
    for (const auto& perm : group) closed.insert(apply_permutation(l, perm));
  return {closed.begin(), closed.end()};
}

// Exact enumeration accelerated by a symmetry group: only orbit
// representatives of the seed fault need to be walked, and the found set is
// closed under the group afterwards.  Every permutation is verified first.
inline std::vector<BitVec> enumerate_logicals_with_symmetries(
    const FaultSystem& sys, std::size_t max_weight,
    const std::vector<std::vector<std::int32_t>>& group,
    std::uint64_t* nodes = nullptr) {
  for (const auto& perm : group)
    if (!is_system_symmetry(sys, perm))
      throw std::invalid_argument("permutation is not a symmetry of the system");
  // Fault orbits under the group.
  std::vector<std::int32_t> orbit_of(sys.num_faults(), -1);
  std::vector<std::vector<std::int32_t>> orbits;
  for (std::size_t j = 0; j < sys.num_faults(); ++j) {
    if (orbit_of[j] >= 0) continue;
    const auto id = static_cast<std::int32_t>(orbits.size());
    std::vector<std::int32_t> members;
    for (const auto& perm : group) {
      const auto to = perm[j];
      if (orbit_of[static_cast<std::size_t>(to)] < 0) {
        orbit_of[static_cast<std::size_t>(to)] = id;
        members.push_back(to);
      }
    }
    orbits.push_back(std::move(members));
  }
  std::vector<BitVec> reps_found;
  std::vector<std::uint8_t> forbidden(sys.num_faults(), 0);
  detail::LogicalEnumerator walker(sys, max_weight);
  std::uint64_t total_nodes = 0;
  for (const auto& orbit : orbits) {
    // Seed on the orbit representative; the rest of the orbit stays open.
    walker.run(static_cast<std::size_t>(orbit.front()), forbidden, reps_found);
    total_nodes += walker.nodes_visited();
    for (auto f : orbit) forbidden[static_cast<std::size_t>(f)] = 1;
  }
  if (nodes) *nodes = total_nodes;
  return close_under_symmetries(reps_found, group);
}

}  // namespace rareqec
