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

#include "rareqec/bitvec.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

using rareqec::BitVec;

TEST_CASE("bit get/set/flip across word boundaries") {
  BitVec v(200);
  REQUIRE(v.size() == 200);
  REQUIRE(v.none());
  for (std::size_t i : {0u, 63u, 64u, 127u, 128u, 199u}) {
    v.set(i);
    REQUIRE(v.get(i));
  }
  REQUIRE(v.count() == 6);
  v.flip(64);
  REQUIRE_FALSE(v.get(64));
  v.assign(64, true);
  REQUIRE(v.get(64));
  REQUIRE(v.first_set() == 0);
  v.reset(0);
  REQUIRE(v.first_set() == 63);
}

TEST_CASE("xor matches set symmetric difference") {
  std::mt19937_64 rng(7);
  const std::size_t n = 321;
  std::set<std::size_t> sa, sb;
  BitVec a(n), b(n);
  for (int k = 0; k < 100; ++k) {
    std::size_t i = rng() % n, j = rng() % n;
    a.flip(i);
    sa.count(i) ? (void)sa.erase(i) : (void)sa.insert(i);
    b.flip(j);
    sb.count(j) ? (void)sb.erase(j) : (void)sb.insert(j);
  }
  std::set<std::size_t> sym;
  std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                std::inserter(sym, sym.begin()));
  BitVec x = a ^ b;
  REQUIRE(x.count() == sym.size());
  for (auto i : sym) REQUIRE(x.get(i));
  std::size_t visited = 0;
  x.for_each_set([&](std::size_t i) {
    REQUIRE(sym.count(i) == 1);
    ++visited;
  });
  REQUIRE(visited == sym.size());
}

TEST_CASE("dot is inner product parity") {
  BitVec a(130), b(130);
  REQUIRE_FALSE(rareqec::dot(a, b));
  a.set(5);
  b.set(5);
  REQUIRE(rareqec::dot(a, b));
  a.set(129);
  b.set(129);
  REQUIRE_FALSE(rareqec::dot(a, b));
  b.set(70);
  REQUIRE_FALSE(rareqec::dot(a, b));
  a.set(70);
  REQUIRE(rareqec::dot(a, b));
}

TEST_CASE("round trip through index lists") {
  std::vector<std::int32_t> idx = {3, 17, 64, 65, 99};
  BitVec v = BitVec::from_indices(100, idx);
  REQUIRE(v.to_indices() == idx);
}

TEST_CASE("equal content implies equal hash") {
  BitVec a(77), b(77);
  for (std::size_t i : {1u, 2u, 76u}) {
    a.set(i);
    b.set(i);
  }
  REQUIRE(a == b);
  REQUIRE(a.hash() == b.hash());
  b.flip(40);
  REQUIRE_FALSE(a == b);
}
