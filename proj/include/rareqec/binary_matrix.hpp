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

#include <cassert>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rareqec/bitvec.hpp"

namespace rareqec {

// Dense matrix over F2, stored row-major as packed bit rows.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols)
      : cols_(cols), rows_(rows, BitVec(cols)) {}

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return cols_; }

  const BitVec& row(std::size_t i) const { return rows_[i]; }
  BitVec& row(std::size_t i) { return rows_[i]; }

  bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j) { rows_[i].set(j); }
  void flip(std::size_t i, std::size_t j) { rows_[i].flip(j); }

  void append_row(BitVec r) {
    assert(r.size() == cols_ || rows_.empty());
    if (rows_.empty()) cols_ = r.size();
    rows_.push_back(std::move(r));
  }

  // y = M x, with x of length num_cols().
  BitVec mul(const BitVec& x) const {
    BitVec y(num_rows());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (dot(rows_[i], x)) y.set(i);
    return y;
  }

  BinaryMatrix transposed() const {
    BinaryMatrix t(cols_, num_rows());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      rows_[i].for_each_set([&](std::size_t j) { t.set(j, i); });
    return t;
  }

  // In-place reduction to reduced row echelon form; returns pivot columns.
  std::vector<std::int32_t> rref() {
    std::vector<std::int32_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_.size(); ++c) {
      std::size_t sel = r;
      while (sel < rows_.size() && !rows_[sel].get(c)) ++sel;
      if (sel == rows_.size()) continue;
      std::swap(rows_[r], rows_[sel]);
      for (std::size_t i = 0; i < rows_.size(); ++i)
        if (i != r && rows_[i].get(c)) rows_[i] ^= rows_[r];
      pivots.push_back(static_cast<std::int32_t>(c));
      ++r;
    }
    return pivots;
  }

  std::size_t rank() const {
    BinaryMatrix copy = *this;
    return copy.rref().size();
  }

  // Basis of { x : M x = 0 }.
  std::vector<BitVec> kernel_basis() const {
    BinaryMatrix red = *this;
    auto pivots = red.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<BitVec> basis;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (is_pivot[j]) continue;
      BitVec v(cols_);
      v.set(j);
      for (std::size_t r = 0; r < pivots.size(); ++r)
        if (red.rows_[r].get(j)) v.set(static_cast<std::size_t>(pivots[r]));
      basis.push_back(std::move(v));
    }
    return basis;
  }

  // A particular solution of M x = y, if one exists.
  std::optional<BitVec> solve(const BitVec& y) const {
    assert(y.size() == num_rows());
    BinaryMatrix red = *this;
    BitVec rhs = y;
    std::vector<std::int32_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < red.rows_.size(); ++c) {
      std::size_t sel = r;
      while (sel < red.rows_.size() && !red.rows_[sel].get(c)) ++sel;
      if (sel == red.rows_.size()) continue;
      std::swap(red.rows_[r], red.rows_[sel]);
      { bool tmp = rhs.get(r); rhs.assign(r, rhs.get(sel)); rhs.assign(sel, tmp); }
      for (std::size_t i = 0; i < red.rows_.size(); ++i)
        if (i != r && red.rows_[i].get(c)) {
          red.rows_[i] ^= red.rows_[r];
          if (rhs.get(r)) rhs.flip(i);
        }
      pivots.push_back(static_cast<std::int32_t>(c));
      ++r;
    }
    for (std::size_t i = r; i < red.rows_.size(); ++i)
      if (rhs.get(i)) return std::nullopt;
    BitVec x(cols_);
    for (std::size_t k = 0; k < pivots.size(); ++k)
      if (rhs.get(k)) x.set(static_cast<std::size_t>(pivots[k]));
    return x;
  }

  // Random element of the row space (coefficients i.i.d. uniform).
  template <typename Rng>
  BitVec random_row_combination(Rng& rng) const {
    BitVec v(cols_);
    std::uniform_int_distribution<int> coin(0, 1);
    for (const auto& row : rows_)
      if (coin(rng)) v ^= row;
    return v;
  }

 private:
  std::size_t cols_ = 0;
  std::vector<BitVec> rows_;
};

// Incremental Gaussian elimination over a growing set of rows.  Supports
// independence tests without recomputing a full reduction each time.
class RowBasis {
 public:
  explicit RowBasis(std::size_t cols) : cols_(cols) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t num_cols() const { return cols_; }

  // Reduces v against the current basis.  Returns true (and absorbs the
  // remainder) if v was independent of the rows added so far.
  bool add(BitVec v) {
    reduce(v);
    if (v.none()) return false;
    std::size_t lead = v.first_set();
    rows_.push_back(std::move(v));
    leads_.push_back(lead);
    return true;
  }

  bool contains(BitVec v) const {
    reduce(v);
    return v.none();
  }

 private:
  void reduce(BitVec& v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k)
      if (v.get(leads_[k])) v ^= rows_[k];
  }

  std::size_t cols_;
  std::vector<BitVec> rows_;
  std::vector<std::size_t> leads_;
};

}  // namespace rareqec
