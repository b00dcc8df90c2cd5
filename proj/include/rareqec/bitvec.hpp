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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rareqec {

// Fixed-length vector over F2, packed 64 bits per word.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  static BitVec from_indices(std::size_t n, std::span<const std::int32_t> ones) {
    BitVec v(n);
    for (auto i : ones) v.set(static_cast<std::size_t>(i));
    return v;
  }

  std::size_t size() const { return size_; }
  std::size_t num_words() const { return words_.size(); }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool b) { b ? set(i) : reset(i); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const { return !none(); }

  // Index of the lowest set bit, or size() if empty.
  std::size_t first_set() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return (k << 6) + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return size_;
  }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  BitVec& operator&=(const BitVec& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  BitVec& operator|=(const BitVec& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }

  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }

  bool operator==(const BitVec& o) const { return size_ == o.size_ && words_ == o.words_; }

  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        fn((k << 6) + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::int32_t> to_indices() const {
    std::vector<std::int32_t> out;
    out.reserve(count());
    for_each_set([&](std::size_t i) { out.push_back(static_cast<std::int32_t>(i)); });
    return out;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Parity of the F2 inner product a . b (sizes must match).
inline bool dot(const BitVec& a, const BitVec& b) {
  std::uint64_t acc = 0;
  auto wa = a.words(), wb = b.words();
  for (std::size_t k = 0; k < wa.size(); ++k) acc ^= wa[k] & wb[k];
  return std::popcount(acc) & 1;
}

// True when every set bit of a is also set in b (sizes must match).
inline bool is_subset(const BitVec& a, const BitVec& b) {
  auto wa = a.words(), wb = b.words();
  for (std::size_t k = 0; k < wa.size(); ++k)
    if (wa[k] & ~wb[k]) return false;
  return true;
}

struct BitVecHash {
  std::size_t operator()(const BitVec& v) const { return static_cast<std::size_t>(v.hash()); }
};

}  // namespace rareqec
