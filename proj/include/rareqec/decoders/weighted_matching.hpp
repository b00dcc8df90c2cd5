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
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rareqec {
namespace detail {

// Maximum-weight matching on a dense graph via the primal-dual blossom
// method, O(V^3).  Vertices are 1-based internally; vertex 0 means "none".
// Edge weights must be nonnegative; weight 0 marks a non-edge.
class BlossomMatcher {
 public:
  // weight(u, v) for 0-based u, v.  Returns 0-based mate per vertex, -1 if
  // the vertex ends up unmatched.
  std::vector<std::int32_t> solve(const std::vector<std::vector<std::int64_t>>& weight) {
    n_ = static_cast<int>(weight.size());
    const int cap = 2 * n_ + 1;
    g_.assign(static_cast<std::size_t>(cap) * cap, Edge{});
    lab_.assign(cap, 0);
    match_.assign(cap, 0);
    slack_.assign(cap, 0);
    st_.assign(cap, 0);
    pa_.assign(cap, 0);
    s_.assign(cap, -1);
    vis_.assign(cap, 0);
    flower_.assign(cap, {});
    flower_from_.assign(static_cast<std::size_t>(cap) * (n_ + 1), 0);
    vis_stamp_ = 0;

    std::int64_t w_max = 0;
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) {
        edge(u, v) = Edge{u, v, weight[u - 1][v - 1]};
        if (u != v && weight[u - 1][v - 1] < 0)
          throw std::invalid_argument("matching weights must be nonnegative");
        w_max = std::max(w_max, weight[u - 1][v - 1]);
      }
    n_x_ = n_;
    for (int u = 1; u <= n_; ++u) st_[u] = u, lab_[u] = w_max;
    for (int u = 1; u <= n_; ++u) flower_from(u, u) = u;
    while (grow_matchings()) {
    }
    std::vector<std::int32_t> mate(n_, -1);
    for (int u = 1; u <= n_; ++u)
      if (match_[u]) mate[u - 1] = match_[u] - 1;
    return mate;
  }

 private:
  struct Edge {
    int u = 0, v = 0;
    std::int64_t w = 0;
  };

  Edge& edge(int u, int v) { return g_[static_cast<std::size_t>(u) * (2 * n_ + 1) + v]; }
  int& flower_from(int b, int x) {
    return flower_from_[static_cast<std::size_t>(b) * (n_ + 1) + x];
  }

  std::int64_t slack_of(const Edge& e) { return lab_[e.u] + lab_[e.v] - e.w * 2; }

  void update_slack(int u, int x) {
    if (!slack_[x] || slack_of(edge(u, x)) < slack_of(edge(slack_[x], x)))
      slack_[x] = u;
  }

  void recompute_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (edge(u, x).w > 0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
  }

  void push_outer(int x) {
    if (x <= n_) {
      queue_.push_back(x);
    } else {
      for (int i : flower_[x]) push_outer(i);
    }
  }

  void set_root(int x, int b) {
    st_[x] = b;
    if (x > n_)
      for (int i : flower_[x]) set_root(i, b);
  }

  int rotate_index(int b, int xr) {
    int pr = static_cast<int>(std::find(flower_[b].begin(), flower_[b].end(), xr) -
                              flower_[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower_[b].begin() + 1, flower_[b].end());
      return static_cast<int>(flower_[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match_[u] = edge(u, v).v;
    if (u <= n_) return;
    const Edge e = edge(u, v);
    const int xr = flower_from(u, e.u);
    const int pr = rotate_index(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
  }

  void augment(int u, int v) {
    while (true) {
      const int xnv = st_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[pa_[xnv]]);
      v = xnv;
      u = st_[pa_[xnv]];
    }
  }

  int get_lca(int u, int v) {
    for (++vis_stamp_; u || v; std::swap(u, v)) {
      if (!u) continue;
      if (vis_[u] == vis_stamp_) return u;
      vis_[u] = vis_stamp_;
      u = st_[match_[u]];
      if (u) u = st_[pa_[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) ++b;
    if (b > n_x_) ++n_x_;
    lab_[b] = 0;
    s_[b] = 0;
    match_[b] = match_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      push_outer(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      push_outer(y);
    }
    set_root(b, b);
    for (int x = 1; x <= n_x_; ++x) edge(b, x).w = edge(x, b).w = 0;
    for (int x = 1; x <= n_; ++x) flower_from(b, x) = 0;
    for (int xs : flower_[b]) {
      for (int x = 1; x <= n_x_; ++x)
        if (edge(b, x).w == 0 || slack_of(edge(xs, x)) < slack_of(edge(b, x))) {
          edge(b, x) = edge(xs, x);
          edge(x, b) = edge(x, xs);
        }
      for (int x = 1; x <= n_; ++x)
        if (flower_from(xs, x)) flower_from(b, x) = xs;
    }
    recompute_slack(b);
  }

  void expand_blossom(int b) {
    for (int i : flower_[b]) set_root(i, i);
    const int xr = flower_from(b, edge(b, pa_[b]).u);
    const int pr = rotate_index(b, xr);
    for (int i = 0; i < pr; i += 2) {
      const int xs = flower_[b][static_cast<std::size_t>(i)];
      const int xns = flower_[b][static_cast<std::size_t>(i) + 1];
      pa_[xs] = edge(xns, xs).u;
      s_[xs] = 1;
      s_[xns] = 0;
      slack_[xs] = 0;
      recompute_slack(xns);
      push_outer(xns);
    }
    s_[xr] = 1;
    pa_[xr] = pa_[b];
    for (std::size_t i = static_cast<std::size_t>(pr) + 1; i < flower_[b].size(); ++i) {
      const int xs = flower_[b][i];
      s_[xs] = -1;
      recompute_slack(xs);
    }
    st_[b] = 0;
  }

  bool consider_edge(const Edge& e) {
    const int u = st_[e.u], v = st_[e.v];
    if (s_[v] == -1) {
      pa_[v] = e.u;
      s_[v] = 1;
      const int nu = st_[match_[v]];
      slack_[v] = slack_[nu] = 0;
      s_[nu] = 0;
      push_outer(nu);
    } else if (s_[v] == 0) {
      const int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  // One phase: grows alternating trees, adjusting duals until an augmenting
  // path appears.  Returns false when the matching is maximum.
  bool grow_matchings() {
    std::fill(s_.begin(), s_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
    queue_.clear();
    bool any_root = false;
    for (int x = 1; x <= n_x_; ++x)
      if (st_[x] == x && !match_[x]) {
        pa_[x] = 0;
        s_[x] = 0;
        push_outer(x);
        any_root = true;
      }
    if (!any_root) return false;
    while (true) {
      while (!queue_.empty()) {
        const int u = queue_.front();
        queue_.pop_front();
        if (s_[st_[u]] == 1) continue;
        for (int v = 1; v <= n_; ++v)
          if (edge(u, v).w > 0 && st_[u] != st_[v]) {
            if (slack_of(edge(u, v)) == 0) {
              if (consider_edge(edge(u, v))) return true;
            } else {
              update_slack(u, st_[v]);
            }
          }
      }
      std::int64_t d = std::numeric_limits<std::int64_t>::max();
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2);
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x]) {
          if (s_[x] == -1)
            d = std::min(d, slack_of(edge(slack_[x], x)));
          else if (s_[x] == 0)
            d = std::min(d, slack_of(edge(slack_[x], x)) / 2);
        }
      for (int u = 1; u <= n_; ++u) {
        if (s_[st_[u]] == 0) {
          if (lab_[u] <= d) return false;
          lab_[u] -= d;
        } else if (s_[st_[u]] == 1) {
          lab_[u] += d;
        }
      }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b) {
          if (s_[b] == 0)
            lab_[b] += d * 2;
          else if (s_[b] == 1)
            lab_[b] -= d * 2;
        }
      queue_.clear();
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
            slack_of(edge(slack_[x], x)) == 0)
          if (consider_edge(edge(slack_[x], x))) return true;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1 && lab_[b] == 0) expand_blossom(b);
    }
  }

  int n_ = 0;
  int n_x_ = 0;
  int vis_stamp_ = 0;
  std::vector<Edge> g_;
  std::vector<std::int64_t> lab_;
  std::vector<int> match_, slack_, st_, pa_, s_, vis_;
  std::vector<std::vector<int>> flower_;
  std::vector<int> flower_from_;
  std::deque<int> queue_;
};

}  // namespace detail

// Minimum-weight perfect matching on a complete graph with an even number of
// vertices.  weight[u][v] must be symmetric with zero diagonal.  Returns the
// 0-based mate of each vertex.
inline std::vector<std::int32_t> min_weight_perfect_matching(
    std::vector<std::vector<std::int64_t>> weight) {
  const std::size_t n = weight.size();
  if (n == 0) return {};
  if (n % 2 != 0)
    throw std::invalid_argument("perfect matching needs an even vertex count");
  std::int64_t w_max = 0;
  for (const auto& row : weight)
    for (auto w : row) w_max = std::max(w_max, w);
  // Flip to a maximization problem.  The offset makes every edge strictly
  // positive and dominant enough that maximum weight implies maximum
  // cardinality, hence a perfect matching.
  const std::int64_t base = static_cast<std::int64_t>(n) * (w_max + 1);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      weight[u][v] = (u == v) ? 0 : base + (w_max + 1 - weight[u][v]);
  detail::BlossomMatcher matcher;
  auto mate = matcher.solve(weight);
  for (std::size_t u = 0; u < n; ++u)
    if (mate[u] < 0) throw std::runtime_error("perfect matching not found");
  return mate;
}

}  // namespace rareqec
