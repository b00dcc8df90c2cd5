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

#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "rareqec/codes.hpp"
#include "rareqec/io.hpp"
#include "rareqec/minweight.hpp"

using rareqec::BitVec;
using rareqec::FaultSystem;

namespace {

void check_same(const FaultSystem& a, const FaultSystem& b) {
  REQUIRE(a.num_checks() == b.num_checks());
  REQUIRE(a.num_actions() == b.num_actions());
  REQUIRE(a.num_faults() == b.num_faults());
  CHECK(a.probability_scale() == b.probability_scale());
  CHECK(a.expanded_size() == b.expanded_size());
  for (std::size_t j = 0; j < a.num_faults(); ++j) {
    CHECK(a.multiplicity(j) == b.multiplicity(j));
    CHECK(a.checks_of(j) == b.checks_of(j));
    CHECK(a.actions_of(j) == b.actions_of(j));
  }
}

}  // namespace

TEST_CASE("fault system round-trips through text") {
  FaultSystem sys = rareqec::bicycle_bitflip_system(6);
  std::stringstream buf;
  rareqec::write_fault_system(buf, sys);
  check_same(sys, rareqec::read_fault_system(buf));
}

TEST_CASE("multiplicities and scale round-trip") {
  rareqec::BinaryMatrix checks(3, 4), actions(1, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    checks.set(i, i);
    checks.set(i, i + 1);
  }
  actions.set(0, 0);
  FaultSystem sys = FaultSystem::from_matrices(checks, actions, {1, 2, 1, 7}, 3.0);
  std::stringstream buf;
  rareqec::write_fault_system(buf, sys);
  check_same(sys, rareqec::read_fault_system(buf));
}

TEST_CASE("hand-written system text parses") {
  std::stringstream buf(
      "# two-bit repetition readout\n"
      "rareqec-fault-system 1\n"
      "checks 1\n"
      "actions 1\n"
      "\n"
      "fault 1 : 0 : 0   # first bit\n"
      "fault 3 : 0 :\n");
  FaultSystem sys = rareqec::read_fault_system(buf);
  CHECK(sys.num_faults() == 2);
  CHECK(sys.multiplicity(1) == 3);
  CHECK(sys.expanded_size() == 4);
  CHECK(sys.actions_of(1).empty());
}

TEST_CASE("malformed system text is rejected with a line number") {
  auto parse = [](const std::string& text) {
    std::stringstream buf(text);
    return rareqec::read_fault_system(buf);
  };
  CHECK_THROWS_WITH(parse("bogus 1\n"), Catch::Matchers::ContainsSubstring("line 1"));
  CHECK_THROWS_WITH(parse("rareqec-fault-system 2\n"),
                    Catch::Matchers::ContainsSubstring("header"));
  CHECK_THROWS_WITH(parse("rareqec-fault-system 1\nfault 1 : 0 : 0\n"),
                    Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THROWS_WITH(parse("rareqec-fault-system 1\nchecks 1\nactions 1\nfault 1 : 0\n"),
                    Catch::Matchers::ContainsSubstring("line 4"));
  CHECK_THROWS_WITH(parse("rareqec-fault-system 1\nchecks 1\nactions 1\nfault 1 : 9 : 0\n"),
                    Catch::Matchers::ContainsSubstring("bad fault entry"));
  CHECK_THROWS_WITH(parse("rareqec-fault-system 1\nchecks 1\n"),
                    Catch::Matchers::ContainsSubstring("missing"));
}

TEST_CASE("support lines round-trip") {
  FaultSystem sys = rareqec::toric_bitflip_system(4);
  auto logicals = rareqec::enumerate_logicals(sys, 4);
  REQUIRE(!logicals.empty());
  std::stringstream buf;
  rareqec::write_support_lines(buf, logicals);
  auto back = rareqec::read_support_lines(buf, sys.num_faults());
  CHECK(back == logicals);

  std::stringstream bad("0 99\n");
  CHECK_THROWS_WITH(rareqec::read_support_lines(bad, sys.num_faults()),
                    Catch::Matchers::ContainsSubstring("out of range"));
}
