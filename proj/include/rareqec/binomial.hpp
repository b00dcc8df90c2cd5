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
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace rareqec {

inline double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Exact binomial coefficient; the result must fit in 64 bits.
inline std::uint64_t binomial_exact(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
  }
  assert(r <= std::numeric_limits<std::uint64_t>::max());
  return static_cast<std::uint64_t>(r);
}

inline double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 66 || log_binomial(n, k) < 62.0 * 0.6931471805599453)
    return static_cast<double>(binomial_exact(n, k));
  return std::exp(log_binomial(n, k));
}

// log of C(n,w) q^w (1-q)^(n-w).
inline double log_binomial_pmf(std::int64_t n, std::int64_t w, double q) {
  if (q <= 0.0) return w == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (q >= 1.0) return w == n ? 0.0 : -std::numeric_limits<double>::infinity();
  return log_binomial(n, w) + static_cast<double>(w) * std::log(q) +
         static_cast<double>(n - w) * std::log1p(-q);
}

// Sum over w of g(w) C(n,w) q^w (1-q)^(n-w) for g with values in [0,1].
//
// Accumulates in log scale so results far below 1e-300 in ordinary double
// terms still come out right, and walks w upward from `support_min` (the
// smallest w at which g may be nonzero) with an incremental pmf update, so
// no lgamma call appears in the loop.  Terminates once the remaining upper
// tail is provably below rel_tol of the accumulated value.
inline double binomial_transform(std::int64_t n, double q,
                                 const std::function<double(std::int64_t)>& g,
                                 std::int64_t support_min = 0,
                                 double rel_tol = 1e-14) {
  assert(n >= 0);
  if (q <= 0.0) return support_min <= 0 ? g(0) : 0.0;
  if (q >= 1.0) return g(n);
  const std::int64_t mode =
      std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(
                                   q * static_cast<double>(n + 1))),
                               0, n);
  std::int64_t w = std::clamp<std::int64_t>(support_min, 0, n);
  double lp = log_binomial_pmf(n, w, q);
  // Running total is acc * exp(lmax).
  double lmax = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  while (true) {
    const double gv = g(w);
    if (gv > 0.0) {
      if (lp > lmax) {
        acc = acc * std::exp(lmax - lp) + gv;
        lmax = lp;
      } else {
        acc += gv * std::exp(lp - lmax);
      }
    }
    if (w == n) break;
    const double ratio = static_cast<double>(n - w) / static_cast<double>(w + 1) *
                         q / (1.0 - q);
    const double lp_next = lp + std::log(ratio);
    if (w >= mode && acc > 0.0 && ratio < 1.0) {
      // Geometric bound on everything past w, using g <= 1.
      const double log_tail_bound = lp_next - std::log1p(-ratio);
      if (log_tail_bound < std::log(rel_tol * acc) + lmax) break;
    }
    lp = lp_next;
    ++w;
  }
  return acc == 0.0 ? 0.0 : acc * std::exp(lmax);
}

}  // namespace rareqec
