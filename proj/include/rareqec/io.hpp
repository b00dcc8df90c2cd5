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

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rareqec/bitvec.hpp"
#include "rareqec/fault_system.hpp"

namespace rareqec {

// Plain-text fault system format, one line per fault:
//
//   rareqec-fault-system 1
//   checks 3
//   actions 1
//   scale 1
//   fault 2 : 0 1 : 0        # fault <multiplicity> : <checks> : <actions>
//
// '#' comments run to end of line; blank lines are ignored.

inline constexpr const char* kFaultSystemMagic = "rareqec-fault-system";

inline void write_fault_system(std::ostream& os, const FaultSystem& sys) {
  os << kFaultSystemMagic << " 1\n";
  os << "checks " << sys.num_checks() << "\n";
  os << "actions " << sys.num_actions() << "\n";
  if (sys.probability_scale() != 1.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", sys.probability_scale());
    os << "scale " << buf << "\n";
  }
  for (std::size_t j = 0; j < sys.num_faults(); ++j) {
    os << "fault " << sys.multiplicity(j) << " :";
    for (auto c : sys.checks_of(j)) os << ' ' << c;
    os << " :";
    for (auto a : sys.actions_of(j)) os << ' ' << a;
    os << "\n";
  }
}

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

inline std::vector<std::int32_t> parse_indices(const std::string& text, std::size_t line) {
  std::istringstream in(text);
  std::vector<std::int32_t> out;
  std::int64_t v;
  while (in >> v) out.push_back(static_cast<std::int32_t>(v));
  if (!in.eof()) parse_fail(line, "expected an index list");
  return out;
}

}  // namespace detail

inline FaultSystem read_fault_system(std::istream& is) {
  std::string line, word;
  std::size_t line_no = 0;
  bool saw_header = false, saw_checks = false, saw_actions = false;
  std::size_t num_checks = 0, num_actions = 0;
  double scale = 1.0;
  struct PendingFault {
    std::int64_t mult;
    std::vector<std::int32_t> checks, actions;
  };
  std::vector<PendingFault> faults;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    if (!(in >> word)) continue;
    if (!saw_header) {
      int version = 0;
      if (word != kFaultSystemMagic || !(in >> version) || version != 1)
        detail::parse_fail(line_no, std::string("expected header '") + kFaultSystemMagic + " 1'");
      saw_header = true;
    } else if (word == "checks") {
      if (!(in >> num_checks)) detail::parse_fail(line_no, "expected check count");
      saw_checks = true;
    } else if (word == "actions") {
      if (!(in >> num_actions)) detail::parse_fail(line_no, "expected action count");
      saw_actions = true;
    } else if (word == "scale") {
      if (!(in >> scale) || !(scale > 0))
        detail::parse_fail(line_no, "expected a positive scale");
    } else if (word == "fault") {
      if (!saw_checks || !saw_actions)
        detail::parse_fail(line_no, "fault lines must follow the checks/actions counts");
      std::string rest;
      std::getline(in, rest);
      const auto first = rest.find(':');
      const auto second = first == std::string::npos ? first : rest.find(':', first + 1);
      if (second == std::string::npos)
        detail::parse_fail(line_no, "expected 'fault <mult> : <checks> : <actions>'");
      std::istringstream head(rest.substr(0, first));
      PendingFault f;
      if (!(head >> f.mult)) detail::parse_fail(line_no, "expected a multiplicity");
      f.checks = detail::parse_indices(rest.substr(first + 1, second - first - 1), line_no);
      f.actions = detail::parse_indices(rest.substr(second + 1), line_no);
      faults.push_back(std::move(f));
    } else {
      detail::parse_fail(line_no, "unknown directive '" + word + "'");
    }
  }
  if (!saw_header) detail::parse_fail(line_no, "missing header");
  if (!saw_checks || !saw_actions) detail::parse_fail(line_no, "missing checks/actions counts");
  FaultSystem sys(num_checks, num_actions);
  for (auto& f : faults) {
    try {
      sys.add_fault(std::move(f.checks), std::move(f.actions), f.mult);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("bad fault entry: ") + e.what());
    }
  }
  sys.set_probability_scale(scale);
  sys.finalize();
  return sys;
}

inline void save_fault_system(const std::string& path, const FaultSystem& sys) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_fault_system(os, sys);
  if (!os.flush()) throw std::runtime_error("write to " + path + " failed");
}

inline FaultSystem load_fault_system(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_fault_system(is);
}

// Fault index sets, one line of indices per set.  Used for logical lists and
// error configurations; blank and comment-only lines are skipped.
inline void write_support_lines(std::ostream& os, const std::vector<BitVec>& sets) {
  for (const auto& v : sets) {
    bool first = true;
    v.for_each_set([&](std::size_t j) {
      if (!first) os << ' ';
      os << j;
      first = false;
    });
    os << "\n";
  }
}

inline std::vector<BitVec> read_support_lines(std::istream& is, std::size_t num_faults) {
  std::vector<BitVec> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    BitVec v(num_faults);
    for (auto j : detail::parse_indices(line, line_no)) {
      if (j < 0 || static_cast<std::size_t>(j) >= num_faults)
        detail::parse_fail(line_no, "fault index out of range");
      v.set(static_cast<std::size_t>(j));
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline void save_support_lines(const std::string& path, const std::vector<BitVec>& sets) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_support_lines(os, sets);
  if (!os.flush()) throw std::runtime_error("write to " + path + " failed");
}

inline std::vector<BitVec> load_support_lines(const std::string& path,
                                              std::size_t num_faults) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_support_lines(is, num_faults);
}

}  // namespace rareqec
