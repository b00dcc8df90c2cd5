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

#include "rareqec/ansatz.hpp"
#include "rareqec/binary_matrix.hpp"
#include "rareqec/binomial.hpp"
#include "rareqec/bitvec.hpp"
#include "rareqec/brute_force.hpp"
#include "rareqec/codes.hpp"
#include "rareqec/decoders/bp_osd.hpp"
#include "rareqec/decoders/decoder.hpp"
#include "rareqec/decoders/exhaustive.hpp"
#include "rareqec/decoders/matching.hpp"
#include "rareqec/fault_system.hpp"
#include "rareqec/fit.hpp"
#include "rareqec/io.hpp"
#include "rareqec/minweight.hpp"
#include "rareqec/onset.hpp"
#include "rareqec/sampling.hpp"
#include "rareqec/splitting.hpp"
