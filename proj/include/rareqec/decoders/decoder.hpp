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

#include <functional>
#include <memory>
#include <string>

#include "rareqec/bitvec.hpp"
#include "rareqec/fault_system.hpp"

namespace rareqec {

// Maps a syndrome to a fault set with the same syndrome.  Implementations
// are stateful scratch-wise but deterministic: equal syndromes give equal
// corrections.
class Decoder {
 public:
  virtual ~Decoder() = default;
  virtual BitVec decode(const BitVec& syndrome) = 0;
  virtual std::string name() const = 0;
};

// Builds a decoder for a given system; used where a routine must decode
// derived systems (for instance a system with an extra check row).
using DecoderFactory = std::function<std::unique_ptr<Decoder>(const FaultSystem&)>;

}  // namespace rareqec
