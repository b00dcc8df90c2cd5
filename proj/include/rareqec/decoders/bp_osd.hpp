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
#include <vector>

#include "rareqec/decoders/decoder.hpp"

namespace rareqec {

struct BpOsdConfig {
  enum class BpVariant { product_sum, min_sum };
  int max_iterations = 100;
  BpVariant variant = BpVariant::product_sum;
  double min_sum_scale = 0.625;
  // Ordered-statistics search depth: -1 disables post-processing, 0 keeps
  // the most-reliable solution, lambda > 0 additionally sweeps all single
  // flips of non-pivot bits plus all pairs among the first lambda of them.
  int osd_order = 10;
};

// Belief propagation with ordered-statistics post-processing.  Works on any
// system; the correction always satisfies the syndrome (found by BP hard
// decision when it converges, otherwise by OSD over the reliability-sorted
// reduced system).
class BpOsdDecoder : public Decoder {
 public:
  BpOsdDecoder(const FaultSystem& sys, BpOsdConfig config = {},
               std::vector<double> priors = {})
      : sys_(&sys), config_(config) {
    if (!sys.finalized()) throw std::invalid_argument("system not finalized");
    const std::size_t n = sys.num_faults();
    // Edge layout: per-fault contiguous slices into the flat message arrays.
    fault_edge_begin_.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j)
      fault_edge_begin_[j + 1] = fault_edge_begin_[j] + sys.checks_of(j).size();
    const std::size_t num_edges = fault_edge_begin_[n];
    edge_check_.resize(num_edges);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t t = 0; t < sys.checks_of(j).size(); ++t)
        edge_check_[fault_edge_begin_[j] + t] =
            static_cast<std::size_t>(sys.checks_of(j)[t]);
    check_edges_.assign(sys.num_checks(), {});
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t e = fault_edge_begin_[j]; e < fault_edge_begin_[j + 1]; ++e)
        check_edges_[edge_check_[e]].push_back({e, j});
    to_check_.assign(num_edges, 0.0);
    to_fault_.assign(num_edges, 0.0);
    posterior_.assign(n, 0.0);
    hard_.assign(n, 0);
    if (priors.empty()) priors.assign(n, 1e-2);
    set_priors(std::move(priors));
  }

  // priors[j] = probability that fault j is active, in (0, 0.5).
  void set_priors(std::vector<double> priors) {
    if (priors.size() != sys_->num_faults())
      throw std::invalid_argument("prior size mismatch");
    prior_llr_.resize(priors.size());
    for (std::size_t j = 0; j < priors.size(); ++j) {
      if (!(priors[j] > 0.0) || !(priors[j] < 0.5))
        throw std::invalid_argument("priors must lie in (0, 0.5)");
      prior_llr_[j] = std::log((1.0 - priors[j]) / priors[j]);
    }
  }

  std::string name() const override { return "bp_osd"; }
  bool last_bp_converged() const { return bp_converged_; }

  BitVec decode(const BitVec& syndrome) override {
    run_bp(syndrome);
    if (bp_converged_ || config_.osd_order < 0) {
      BitVec out(sys_->num_faults());
      for (std::size_t j = 0; j < hard_.size(); ++j)
        if (hard_[j]) out.set(j);
      return out;
    }
    return osd(syndrome);
  }

 private:
  static double clamp_llr(double x) { return std::clamp(x, -50.0, 50.0); }

  void run_bp(const BitVec& syndrome) {
    const std::size_t n = sys_->num_faults();
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t e = fault_edge_begin_[j]; e < fault_edge_begin_[j + 1]; ++e)
        to_check_[e] = prior_llr_[j];
    bp_converged_ = false;
    for (int it = 0; it < config_.max_iterations; ++it) {
      // Check-to-fault messages.
      for (std::size_t c = 0; c < check_edges_.size(); ++c) {
        const auto& edges = check_edges_[c];
        const double sign = syndrome.get(c) ? -1.0 : 1.0;
        if (config_.variant == BpOsdConfig::BpVariant::product_sum) {
          double prod = sign;
          for (const auto& [e, j] : edges) prod *= std::tanh(0.5 * to_check_[e]);
          for (const auto& [e, j] : edges) {
            const double t = std::tanh(0.5 * to_check_[e]);
            double rest;
            if (std::abs(t) > 1e-12) {
              rest = prod / t;
            } else {
              rest = sign;
              for (const auto& [e2, j2] : edges)
                if (e2 != e) rest *= std::tanh(0.5 * to_check_[e2]);
            }
            rest = std::clamp(rest, -0.999999999999, 0.999999999999);
            to_fault_[e] = clamp_llr(2.0 * std::atanh(rest));
          }
        } else {
          // Min-sum with rescaling: track the two smallest magnitudes.
          double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
          double sgn = sign;
          for (const auto& [e, j] : edges) {
            const double m = to_check_[e];
            if (m < 0) sgn = -sgn;
            const double a = std::abs(m);
            if (a < min1) {
              min2 = min1;
              min1 = a;
            } else {
              min2 = std::min(min2, a);
            }
          }
          for (const auto& [e, j] : edges) {
            const double m = to_check_[e];
            const double mag = (std::abs(m) == min1 ? min2 : min1);
            const double s = (m < 0 ? -sgn : sgn);
            to_fault_[e] = clamp_llr(config_.min_sum_scale * s *
                                     (std::isinf(mag) ? 50.0 : mag));
          }
        }
      }
      // Fault-to-check messages and posteriors.
      for (std::size_t j = 0; j < n; ++j) {
        double total = prior_llr_[j];
        for (std::size_t e = fault_edge_begin_[j]; e < fault_edge_begin_[j + 1]; ++e)
          total += to_fault_[e];
        posterior_[j] = total;
        hard_[j] = total < 0.0 ? 1 : 0;
        for (std::size_t e = fault_edge_begin_[j]; e < fault_edge_begin_[j + 1]; ++e)
          to_check_[e] = clamp_llr(total - to_fault_[e]);
      }
      if (hard_decision_matches(syndrome)) {
        bp_converged_ = true;
        return;
      }
    }
  }

  bool hard_decision_matches(const BitVec& syndrome) const {
    BitVec sigma(sys_->num_checks());
    for (std::size_t j = 0; j < hard_.size(); ++j)
      if (hard_[j]) sys_->flip_syndrome(sigma, j);
    return sigma == syndrome;
  }

  BitVec osd(const BitVec& syndrome) {
    const std::size_t n = sys_->num_faults();
    const std::size_t m = sys_->num_checks();
    // Most-likely-flipped first: ascending posterior log-likelihood ratio.
    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
      return posterior_[static_cast<std::size_t>(a)] <
             posterior_[static_cast<std::size_t>(b)];
    });

    // Eliminate in reliability order; row-reduce an augmented copy of the
    // check matrix.
    std::vector<BitVec> rows(m, BitVec(n));
    for (std::size_t j = 0; j < n; ++j)
      for (auto c : sys_->checks_of(j)) rows[static_cast<std::size_t>(c)].set(j);
    BitVec rhs = syndrome;
    std::vector<std::int32_t> pivot_col;
    std::vector<std::uint8_t> col_is_pivot(n, 0);
    std::size_t r = 0;
    for (auto cand : order) {
      const auto col = static_cast<std::size_t>(cand);
      std::size_t sel = r;
      while (sel < m && !rows[sel].get(col)) ++sel;
      if (sel == m) continue;
      std::swap(rows[r], rows[sel]);
      {
        const bool tmp = rhs.get(r);
        rhs.assign(r, rhs.get(sel));
        rhs.assign(sel, tmp);
      }
      for (std::size_t i = 0; i < m; ++i)
        if (i != r && rows[i].get(col)) {
          rows[i] ^= rows[r];
          if (rhs.get(r)) rhs.flip(i);
        }
      pivot_col.push_back(cand);
      col_is_pivot[col] = 1;
      if (++r == m) break;
    }
    for (std::size_t i = r; i < m; ++i)
      if (rhs.get(i)) throw std::runtime_error("syndrome outside the check space");

    // Base solution: non-pivot bits zero.
    BitVec base(r);
    for (std::size_t k = 0; k < r; ++k) base.assign(k, rhs.get(k));

    std::vector<std::int32_t> free_cols;
    free_cols.reserve(n - r);
    for (auto cand : order)
      if (!col_is_pivot[static_cast<std::size_t>(cand)]) free_cols.push_back(cand);

    // Reduced image of each free column, for cheap candidate evaluation.
    std::vector<BitVec> image(free_cols.size(), BitVec(r));
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
      const auto col = static_cast<std::size_t>(free_cols[t]);
      for (std::size_t k = 0; k < r; ++k)
        if (rows[k].get(col)) image[t].set(k);
    }

    const auto cost_of = [&](const BitVec& pivot_bits,
                             std::initializer_list<std::size_t> free_set) {
      double cost = 0;
      pivot_bits.for_each_set([&](std::size_t k) {
        cost += prior_llr_[static_cast<std::size_t>(pivot_col[k])];
      });
      for (auto t : free_set)
        cost += prior_llr_[static_cast<std::size_t>(free_cols[t])];
      return cost;
    };

    double best_cost = cost_of(base, {});
    BitVec best_pivot = base;
    std::size_t best_t1 = SIZE_MAX, best_t2 = SIZE_MAX;
    const auto consider = [&](std::size_t t1, std::size_t t2) {
      BitVec sol = base;
      sol ^= image[t1];
      std::initializer_list<std::size_t> fs{t1};
      double cost;
      if (t2 != SIZE_MAX) {
        sol ^= image[t2];
        cost = cost_of(sol, {t1, t2});
      } else {
        cost = cost_of(sol, fs);
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_pivot = sol;
        best_t1 = t1;
        best_t2 = t2;
      }
    };
    if (config_.osd_order > 0) {
      for (std::size_t t = 0; t < free_cols.size(); ++t) consider(t, SIZE_MAX);
      const std::size_t lam =
          std::min<std::size_t>(static_cast<std::size_t>(config_.osd_order),
                                free_cols.size());
      for (std::size_t t1 = 0; t1 < lam; ++t1)
        for (std::size_t t2 = t1 + 1; t2 < lam; ++t2) consider(t1, t2);
    }

    BitVec out(n);
    best_pivot.for_each_set([&](std::size_t k) {
      out.set(static_cast<std::size_t>(pivot_col[k]));
    });
    if (best_t1 != SIZE_MAX) out.set(static_cast<std::size_t>(free_cols[best_t1]));
    if (best_t2 != SIZE_MAX) out.set(static_cast<std::size_t>(free_cols[best_t2]));
    return out;
  }

  const FaultSystem* sys_;
  BpOsdConfig config_;
  std::vector<std::size_t> fault_edge_begin_;
  std::vector<std::size_t> edge_check_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> check_edges_;
  std::vector<double> to_check_, to_fault_, posterior_, prior_llr_;
  std::vector<std::uint8_t> hard_;
  bool bp_converged_ = false;
};

}  // namespace rareqec
