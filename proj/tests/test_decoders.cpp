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

#include <boost/graph/adjacency_matrix.hpp>
#include <boost/graph/maximum_weighted_matching.hpp>
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "rareqec/binomial.hpp"
#include "rareqec/brute_force.hpp"
#include "rareqec/codes.hpp"
#include "rareqec/decoders/bp_osd.hpp"
#include "rareqec/decoders/exhaustive.hpp"
#include "rareqec/decoders/matching.hpp"
#include "rareqec/decoders/weighted_matching.hpp"
#include "rareqec/sampling.hpp"

using rareqec::BitVec;
using rareqec::FaultSystem;

namespace {

std::int64_t matching_total(const std::vector<std::vector<std::int64_t>>& w,
                            const std::vector<std::int32_t>& mate) {
  std::int64_t total = 0;
  for (std::size_t u = 0; u < mate.size(); ++u) {
    REQUIRE(mate[u] >= 0);
    REQUIRE(mate[static_cast<std::size_t>(mate[u])] == static_cast<std::int32_t>(u));
    if (static_cast<std::size_t>(mate[u]) > u) total += w[u][static_cast<std::size_t>(mate[u])];
  }
  return total;
}

// Bitmask reference for minimum-weight perfect matching.
std::int64_t dp_min_perfect(const std::vector<std::vector<std::int64_t>>& w) {
  const std::size_t n = w.size();
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<std::int64_t> dp(full + 1, std::numeric_limits<std::int64_t>::max() / 4);
  dp[0] = 0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(mask));
    if (!((mask >> i) & 1)) continue;
    for (std::size_t j = i + 1; j < n; ++j)
      if ((mask >> j) & 1) {
        const std::size_t rest = mask & ~(std::size_t{1} << i) & ~(std::size_t{1} << j);
        dp[mask] = std::min(dp[mask], dp[rest] + w[i][j]);
      }
  }
  return dp[full];
}

std::int64_t boost_min_perfect(const std::vector<std::vector<std::int64_t>>& w) {
  using Graph = boost::adjacency_matrix<
      boost::undirectedS, boost::no_property,
      boost::property<boost::edge_weight_t, std::int64_t>>;
  const std::size_t n = w.size();
  std::int64_t w_max = 0;
  for (const auto& row : w)
    for (auto x : row) w_max = std::max(w_max, x);
  const std::int64_t base = static_cast<std::int64_t>(n) * (w_max + 1);
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      boost::add_edge(u, v, base + w_max + 1 - w[u][v], g);
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(n);
  boost::maximum_weighted_matching(g, &mate[0]);
  std::int64_t total = 0;
  for (std::size_t u = 0; u < n; ++u) {
    REQUIRE(mate[u] != boost::graph_traits<Graph>::null_vertex());
    if (mate[u] > u) total += w[u][mate[u]];
  }
  return total;
}

std::vector<std::vector<std::int64_t>> random_weights(std::size_t n, std::mt19937_64& rng,
                                                      std::int64_t hi) {
  std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, 0));
  std::uniform_int_distribution<std::int64_t> pick(1, hi);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) w[u][v] = w[v][u] = pick(rng);
  return w;
}

// A length-n parity chain: bit i flips checks (i-1, i); the end bits touch a
// single check.  The action row is all-ones.
FaultSystem parity_chain(std::size_t n) {
  FaultSystem sys(n - 1, 1);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::int32_t> cs;
    if (j > 0) cs.push_back(static_cast<std::int32_t>(j - 1));
    if (j + 1 < n) cs.push_back(static_cast<std::int32_t>(j));
    sys.add_fault(std::move(cs), {0});
  }
  sys.finalize();
  return sys;
}

}  // namespace

TEST_CASE("blossom agrees with bitmask reference") {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 2 * (1 + rng() % 6);  // 2..12
    auto w = random_weights(n, rng, 1 + static_cast<std::int64_t>(rng() % 50));
    auto mate = rareqec::min_weight_perfect_matching(w);
    REQUIRE(matching_total(w, mate) == dp_min_perfect(w));
  }
}

TEST_CASE("blossom agrees with boost on larger graphs") {
  std::mt19937_64 rng(103);
  for (int round = 0; round < 10; ++round) {
    const std::size_t n = 2 * (7 + rng() % 5);  // 14..22
    auto w = random_weights(n, rng, 1000);
    auto mate = rareqec::min_weight_perfect_matching(w);
    REQUIRE(matching_total(w, mate) == boost_min_perfect(w));
  }
}

TEST_CASE("exhaustive decoder finds minimum weight corrections") {
  FaultSystem sys = rareqec::toric_bitflip_system(3);
  rareqec::ExhaustiveMinWeightDecoder dec(sys);
  rareqec::Rng rng(7);
  for (int round = 0; round < 50; ++round) {
    BitVec e = rareqec::sample_error(sys, 0.08, rng);
    BitVec sigma = sys.syndrome(e);
    BitVec c = dec.decode(sigma);
    REQUIRE(sys.syndrome(c) == sigma);
    REQUIRE(c.count() <= e.count());
  }
}

TEST_CASE("matching equals exhaustive minimum weight on the torus") {
  for (std::int64_t d : {3, 4}) {
    FaultSystem sys = rareqec::toric_bitflip_system(d);
    rareqec::MatchingDecoder matching(sys);
    rareqec::ExhaustiveMinWeightDecoder exhaustive(sys);
    rareqec::Rng rng(11 + static_cast<std::uint64_t>(d));
    for (int round = 0; round < 40; ++round) {
      BitVec e = rareqec::sample_error(sys, 0.06, rng);
      BitVec sigma = sys.syndrome(e);
      BitVec c = matching.decode(sigma);
      REQUIRE(sys.syndrome(c) == sigma);
      REQUIRE(c.count() == exhaustive.decode(sigma).count());
    }
  }
}

TEST_CASE("matching corrects every single fault on small lattices") {
  for (auto make : {+[] { return rareqec::toric_bitflip_system(4); },
                    +[] { return rareqec::rotated_toric_bitflip_system(4); }}) {
    FaultSystem sys = make();
    rareqec::MatchingDecoder dec(sys);
    for (std::size_t j = 0; j < sys.num_faults(); ++j) {
      BitVec e(sys.num_faults());
      e.set(j);
      REQUIRE_FALSE(rareqec::decode_fails(sys, dec, e));
    }
  }
}

TEST_CASE("matching handles boundaries on a parity chain") {
  FaultSystem sys = parity_chain(7);
  rareqec::MatchingDecoder dec(sys);
  // Every error of weight <= 3 is corrected; every weight-4 error fails to
  // the complementary weight-3 correction.
  for (std::int64_t w = 0; w <= 4; ++w) {
    auto count = rareqec::exact_weight_class_count(sys, dec, w);
    CAPTURE(w);
    REQUIRE(count.total == rareqec::binomial_exact(7, w));
    REQUIRE(count.failures == (w == 4 ? count.total : 0));
  }
}

TEST_CASE("bp-osd returns syndrome-matching corrections") {
  FaultSystem sys = rareqec::bicycle_bitflip_system(6);
  rareqec::BpOsdDecoder dec(sys, {}, std::vector<double>(sys.num_faults(), 0.01));
  rareqec::Rng rng(17);
  for (int round = 0; round < 60; ++round) {
    BitVec e = rareqec::sample_error(sys, 0.05, rng);
    BitVec sigma = sys.syndrome(e);
    BitVec c = dec.decode(sigma);
    REQUIRE(sys.syndrome(c) == sigma);
  }
}

TEST_CASE("bp-osd corrects all weight-1 and weight-2 bicycle errors") {
  FaultSystem sys = rareqec::bicycle_bitflip_system(6);
  rareqec::BpOsdDecoder dec(sys, {}, std::vector<double>(sys.num_faults(), 0.01));
  auto w1 = rareqec::exact_weight_class_count(sys, dec, 1);
  REQUIRE(w1.failures == 0);
  auto w2 = rareqec::exact_weight_class_count(sys, dec, 2);
  REQUIRE(w2.total == rareqec::binomial_exact(72, 2));
  REQUIRE(w2.failures == 0);
}

TEST_CASE("osd path is exercised when bp does not converge") {
  FaultSystem sys = rareqec::bicycle_bitflip_system(6);
  rareqec::BpOsdConfig config;
  config.max_iterations = 2;  // starve BP so OSD has to finish the job
  rareqec::BpOsdDecoder dec(sys, config, std::vector<double>(sys.num_faults(), 0.01));
  rareqec::Rng rng(23);
  int osd_used = 0;
  for (int round = 0; round < 30; ++round) {
    BitVec e = rareqec::sample_error(sys, 0.08, rng);
    BitVec sigma = sys.syndrome(e);
    BitVec c = dec.decode(sigma);
    REQUIRE(sys.syndrome(c) == sigma);
    if (!dec.last_bp_converged()) ++osd_used;
  }
  REQUIRE(osd_used > 0);
}

TEST_CASE("exact failure rate via enumeration is decoder-consistent") {
  FaultSystem sys = rareqec::toric_bitflip_system(2);
  rareqec::MatchingDecoder dec(sys);
  const double p1 = rareqec::exact_failure_rate(sys, dec, 0.1);
  REQUIRE(p1 > 0.0);
  REQUIRE(p1 < 0.5);
  // The rate is monotone over moderate q for this tiny system.
  REQUIRE(rareqec::exact_failure_rate(sys, dec, 0.05) < p1);
}
