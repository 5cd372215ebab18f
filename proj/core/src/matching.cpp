#include "qnetsim/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace qnet {

namespace {

// Dense O(n^3) maximum weight general matching with dual variables and
// blossom contraction. Vertices are 1-indexed; ids above n are blossoms.
// Weights are doubled internally so every dual stays integral.
struct Blossom {
  struct Edge {
    int u = 0, v = 0;
    long long w = 0;
  };

  static constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

  int n = 0, n_x = 0;
  std::vector<std::vector<Edge>> g;
  std::vector<long long> lab;
  std::vector<int> match, slack, st, pa, side, vis;
  std::vector<std::vector<int>> flower, flower_from;
  std::deque<int> q;
  int vis_time = 0;

  explicit Blossom(const std::vector<std::vector<long long>>& weight) {
    n = static_cast<int>(weight.size());
    const int cap = 2 * n + 2;
    g.assign(cap, std::vector<Edge>(cap));
    lab.assign(cap, 0);
    match.assign(cap, 0);
    slack.assign(cap, 0);
    st.assign(cap, 0);
    pa.assign(cap, 0);
    side.assign(cap, -1);
    vis.assign(cap, 0);
    flower.assign(cap, {});
    flower_from.assign(cap, std::vector<int>(n + 1, 0));
    for (int u = 1; u <= n; ++u) {
      for (int v = 1; v <= n; ++v) {
        g[u][v] = {u, v, 2 * weight[u - 1][v - 1]};
      }
    }
  }

  long long e_delta(const Edge& e) const { return lab[e.u] + lab[e.v] - g[e.u][e.v].w * 2; }

  void update_slack(int u, int x) {
    if (!slack[x] || e_delta(g[u][x]) < e_delta(g[slack[x]][x])) slack[x] = u;
  }

  void set_slack(int x) {
    slack[x] = 0;
    for (int u = 1; u <= n; ++u) {
      if (g[u][x].w > 0 && st[u] != x && side[st[u]] == 0) update_slack(u, x);
    }
  }

  void q_push(int x) {
    if (x <= n) {
      q.push_back(x);
    } else {
      for (int y : flower[x]) q_push(y);
    }
  }

  void set_st(int x, int b) {
    st[x] = b;
    if (x > n) {
      for (int y : flower[x]) set_st(y, b);
    }
  }

  int get_pr(int b, int xr) {
    int pr = static_cast<int>(std::find(flower[b].begin(), flower[b].end(), xr) -
                              flower[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower[b].begin() + 1, flower[b].end());
      return static_cast<int>(flower[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match[u] = g[u][v].v;
    if (u > n) {
      const Edge& e = g[u][v];
      const int xr = flower_from[u][e.u];
      const int pr = get_pr(u, xr);
      for (int i = 0; i < pr; ++i) set_match(flower[u][i], flower[u][i ^ 1]);
      set_match(xr, v);
      std::rotate(flower[u].begin(), flower[u].begin() + pr, flower[u].end());
    }
  }

  void augment(int u, int v) {
    for (;;) {
      const int xnv = st[match[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st[pa[xnv]]);
      u = st[pa[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++vis_time; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis[u] == vis_time) return u;
      vis[u] = vis_time;
      u = st[match[u]];
      if (u) u = st[pa[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n + 1;
    while (b <= n_x && st[b]) ++b;
    if (b > n_x) ++n_x;
    lab[b] = 0;
    side[b] = 0;
    match[b] = match[lca];
    flower[b].clear();
    flower[b].push_back(lca);
    for (int x = u, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    std::reverse(flower[b].begin() + 1, flower[b].end());
    for (int x = v, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x; ++x) g[b][x].w = g[x][b].w = 0;
    for (int x = 1; x <= n; ++x) flower_from[b][x] = 0;
    for (int xs : flower[b]) {
      for (int x = 1; x <= n_x; ++x) {
        if (g[b][x].w == 0 || e_delta(g[xs][x]) < e_delta(g[b][x])) {
          g[b][x] = g[xs][x];
          g[x][b] = g[x][xs];
        }
      }
      for (int x = 1; x <= n; ++x) {
        if (flower_from[xs][x]) flower_from[b][x] = xs;
      }
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int y : flower[b]) set_st(y, y);
    const int xr = flower_from[b][g[b][pa[b]].u];
    const int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      const int xs = flower[b][i];
      const int xns = flower[b][i + 1];
      pa[xs] = g[xns][xs].u;
      side[xs] = 1;
      side[xns] = 0;
      slack[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    side[xr] = 1;
    pa[xr] = pa[b];
    for (std::size_t i = pr + 1; i < flower[b].size(); ++i) {
      const int xs = flower[b][i];
      side[xs] = -1;
      set_slack(xs);
    }
    st[b] = 0;
  }

  bool on_found_edge(const Edge& e) {
    const int u = st[e.u];
    const int v = st[e.v];
    if (side[v] == -1) {
      pa[v] = e.u;
      side[v] = 1;
      const int nu = st[match[v]];
      slack[v] = slack[nu] = 0;
      side[nu] = 0;
      q_push(nu);
    } else if (side[v] == 0) {
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

  bool matching_round() {
    std::fill(side.begin(), side.begin() + n_x + 1, -1);
    std::fill(slack.begin(), slack.begin() + n_x + 1, 0);
    q.clear();
    for (int x = 1; x <= n_x; ++x) {
      if (st[x] == x && !match[x]) {
        pa[x] = 0;
        side[x] = 0;
        q_push(x);
      }
    }
    if (q.empty()) return false;
    for (;;) {
      while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        if (side[st[u]] == 1) continue;
        for (int v = 1; v <= n; ++v) {
          if (g[u][v].w > 0 && st[u] != st[v]) {
            if (e_delta(g[u][v]) == 0) {
              if (on_found_edge(g[u][v])) return true;
            } else {
              update_slack(u, st[v]);
            }
          }
        }
      }
      long long d = kInf;
      for (int b = n + 1; b <= n_x; ++b) {
        if (st[b] == b && side[b] == 1) d = std::min(d, lab[b] / 2);
      }
      for (int x = 1; x <= n_x; ++x) {
        if (st[x] == x && slack[x]) {
          if (side[x] == -1) d = std::min(d, e_delta(g[slack[x]][x]));
          else if (side[x] == 0) d = std::min(d, e_delta(g[slack[x]][x]) / 2);
        }
      }
      for (int u = 1; u <= n; ++u) {
        if (side[st[u]] == 0) {
          if (lab[u] <= d) return false;
          lab[u] -= d;
        } else if (side[st[u]] == 1) {
          lab[u] += d;
        }
      }
      for (int b = n + 1; b <= n_x; ++b) {
        if (st[b] == b) {
          if (side[st[b]] == 0) lab[b] += d * 2;
          else if (side[st[b]] == 1) lab[b] -= d * 2;
        }
      }
      q.clear();
      for (int x = 1; x <= n_x; ++x) {
        if (st[x] == x && slack[x] && st[slack[x]] != x && e_delta(g[slack[x]][x]) == 0) {
          if (on_found_edge(g[slack[x]][x])) return true;
        }
      }
      for (int b = n + 1; b <= n_x; ++b) {
        if (st[b] == b && side[b] == 1 && lab[b] == 0) expand_blossom(b);
      }
    }
  }

  std::vector<int> solve() {
    std::fill(match.begin(), match.begin() + n + 1, 0);
    n_x = n;
    long long w_max = 0;
    for (int u = 0; u <= n; ++u) {
      st[u] = u;
      flower[u].clear();
    }
    for (int u = 1; u <= n; ++u) {
      for (int v = 1; v <= n; ++v) {
        flower_from[u][v] = (u == v) ? u : 0;
        w_max = std::max(w_max, g[u][v].w);
      }
    }
    for (int u = 1; u <= n; ++u) lab[u] = w_max;
    while (matching_round()) {
    }
    std::vector<int> mate(n, -1);
    for (int u = 1; u <= n; ++u) {
      if (match[u]) mate[u - 1] = match[u] - 1;
    }
    return mate;
  }
};

void check_square_symmetric(const std::vector<std::vector<long long>>& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("matching: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][j] < 0) throw std::invalid_argument("matching: negative weight");
      if (m[i][j] != m[j][i]) throw std::invalid_argument("matching: matrix is not symmetric");
    }
  }
}

}  // namespace

std::vector<int> max_weight_matching(const std::vector<std::vector<long long>>& weight) {
  check_square_symmetric(weight);
  if (weight.empty()) return {};
  return Blossom(weight).solve();
}

std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<long long>>& dist) {
  check_square_symmetric(dist);
  const int n = static_cast<int>(dist.size());
  if (n % 2 != 0) throw std::invalid_argument("min_weight_perfect_matching: odd node count");
  if (n == 0) return {};
  long long max_d = 0;
  for (const auto& row : dist) {
    for (long long d : row) max_d = std::max(max_d, d);
  }
  // Any matching with more pairs beats any with fewer, so the maximum-weight
  // matching is perfect and minimizes the total distance.
  const long long big = max_d * (n / 2 + 1) + 1;
  std::vector<std::vector<long long>> w(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) w[i][j] = big - dist[i][j];
    }
  }
  std::vector<int> mate = max_weight_matching(w);
  for (int i = 0; i < n; ++i) {
    if (mate[i] < 0) throw std::logic_error("min_weight_perfect_matching: matching not perfect");
  }
  return mate;
}

}  // namespace qnet
