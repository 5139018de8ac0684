#include "bmlrp/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

namespace bmlrp::oracle {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 2;

std::pair<int32_t, int32_t> norm_edge(int32_t u, int32_t v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

std::vector<std::vector<int>> all_pairs_bfs(const std::vector<std::vector<int32_t>>& adj) {
  std::vector<std::vector<int>> d;
  d.reserve(adj.size());
  for (int32_t s = 0; s < static_cast<int32_t>(adj.size()); ++s) d.push_back(bfs_all(adj, s));
  return d;
}

// Every simple path starting with the given stem, visited in extension
// order; the callback sees the full path vector.
template <typename F>
void enumerate_simple_paths(const std::vector<std::vector<int32_t>>& adj,
                            std::vector<int32_t>& path, std::vector<char>& on_path, F&& visit) {
  const int32_t last = path.back();
  for (int32_t x : adj[last]) {
    if (on_path[x]) continue;
    path.push_back(x);
    on_path[x] = 1;
    visit(path);
    enumerate_simple_paths(adj, path, on_path, visit);
    on_path[x] = 0;
    path.pop_back();
  }
}

}  // namespace

int bfs_distance(const std::vector<std::vector<int32_t>>& adj, int32_t u, int32_t v) {
  const auto d = bfs_all(adj, u);
  return d[v] >= kInf ? -1 : d[v];
}

std::vector<int> bfs_all(const std::vector<std::vector<int32_t>>& adj, int32_t src) {
  std::vector<int> dist(adj.size(), kInf);
  std::deque<int32_t> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    const int32_t u = q.front();
    q.pop_front();
    for (int32_t v : adj[u]) {
      if (dist[v] > dist[u] + 1) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<std::vector<int32_t>> brute_connectivity(
    const std::vector<std::vector<int32_t>>& adj) {
  std::vector<std::vector<int32_t>> comps;
  std::vector<char> seen(adj.size(), 0);
  for (int32_t s = 0; s < static_cast<int32_t>(adj.size()); ++s) {
    if (seen[s]) continue;
    std::vector<int32_t> comp;
    std::deque<int32_t> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      const int32_t u = q.front();
      q.pop_front();
      comp.push_back(u);
      for (int32_t v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          q.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool is_connected(const std::vector<NodeId>& members, const std::vector<Link>& links) {
  if (members.empty()) return false;
  auto sorted = members;
  std::sort(sorted.begin(), sorted.end());
  AdjacencyIndex idx(sorted, links);
  return brute_connectivity(idx.adj).size() == 1;
}

GOut brute_g_out(const NeighborGraph& ng) {
  const ColoredGraph& g = ng.g;
  if (g.ids.size() > kMaxGOutNodes) {
    throw std::invalid_argument("brute_g_out is capped at 16 nodes");
  }
  const Color ca = g.colors[ng.center];
  const auto dist = all_pairs_bfs(g.adj);

  std::set<std::vector<int32_t>> paths;
  std::set<int32_t> nodes;
  std::set<std::pair<int32_t, int32_t>> edges;

  std::vector<int32_t> path{ng.excluded, ng.center};
  std::vector<char> on_path(g.ids.size(), 0);
  on_path[ng.excluded] = 1;
  on_path[ng.center] = 1;
  enumerate_simple_paths(g.adj, path, on_path, [&](const std::vector<int32_t>& p) {
    // p = excluded, center, x1..xm; terminal d = xm, interior c = x1..x(m-1).
    const int m = static_cast<int>(p.size()) - 2;
    if (m < 1) return;
    const int32_t d = p.back();
    if (g.colors[d] == ca) return;
    const int k = m - 1;
    for (int j = 1; j <= k; ++j) {
      if (g.colors[p[1 + j]] != ca) return;
    }
    for (int j = 1; j <= k; ++j) {
      const int32_t cj = p[1 + j];
      const int to_d = k + 1 - j;
      const int to_b = j + 1;
      for (int32_t f = 0; f < static_cast<int32_t>(g.ids.size()); ++f) {
        if (g.colors[f] == ca) continue;
        if (dist[f][cj] < to_d && dist[f][cj] < to_b) return;
      }
    }
    paths.insert(p);
    for (size_t i = 0; i + 1 < p.size(); ++i) {
      nodes.insert(p[i]);
      nodes.insert(p[i + 1]);
      edges.insert(norm_edge(p[i], p[i + 1]));
    }
  });

  GOut out;
  out.paths.assign(paths.begin(), paths.end());
  for (int32_t n : nodes) {
    if (n != ng.excluded) out.nodes.push_back(n);
  }
  for (const auto& e : edges) {
    if (e.first != ng.excluded && e.second != ng.excluded) out.edges.push_back(e);
  }
  return out;
}

namespace {

void reference_connect_inside(NodeId self, std::vector<NodeId> nodes, uint16_t level_depth, int l,
                              std::vector<NodeId>& out) {
  if (nodes.size() <= 1) return;
  const uint32_t bit = static_cast<uint32_t>(level_depth) + 1 + static_cast<uint32_t>(l);
  if (bit >= self.width) return;
  std::vector<NodeId> zero, one;
  for (NodeId x : nodes) {
    (address_bit(x, static_cast<uint16_t>(bit)) == 0 ? zero : one).push_back(x);
  }
  if (zero.empty() || one.empty()) {
    reference_connect_inside(self, std::move(nodes), level_depth, l + 1, out);
    return;
  }
  std::optional<std::pair<NodeId, NodeId>> best;
  for (NodeId w : zero) {
    for (NodeId b : one) {
      if (!best || xor_distance(w, b) < xor_distance(best->first, best->second) ||
          (xor_distance(w, b) == xor_distance(best->first, best->second) &&
           std::pair{w, b} < *best)) {
        best = {w, b};
      }
    }
  }
  if (address_bit(self, static_cast<uint16_t>(bit)) == 0) {
    if (best->first == self) out.push_back(best->second);
    reference_connect_inside(self, std::move(zero), level_depth, l + 1, out);
  } else {
    if (best->second == self) out.push_back(best->first);
    reference_connect_inside(self, std::move(one), level_depth, l + 1, out);
  }
}

}  // namespace

std::vector<NodeId> reference_select_connections(const SelectionView& view, ConnectTarget mode) {
  const ColoredGraph& g = view.g;
  if (g.ids.size() > kMaxSelectNodes) {
    throw std::invalid_argument("reference_select_connections is capped at 12 nodes");
  }
  const int32_t a = view.self;
  const Color own = g.colors[a];
  const auto dist = all_pairs_bfs(g.adj);

  std::set<NodeId> targets;
  auto take = [&](int32_t t) {
    if (t != a) targets.insert(g.ids[t]);
  };

  for (int32_t x : view.connected) {
    if (g.colors[x] == own) take(x);
  }

  for (int32_t w : view.connected) {
    if (g.colors[w] == own) continue;
    std::vector<NodeId> s;
    for (int32_t x : g.adj[w]) {
      if (g.colors[x] == own) s.push_back(g.ids[x]);
    }
    std::vector<NodeId> out;
    reference_connect_inside(g.ids[a], std::move(s), view.level_depth, 0, out);
    for (NodeId t : out) {
      if (t != g.ids[a]) targets.insert(t);
    }
  }

  std::vector<int32_t> path{a};
  std::vector<char> on_path(g.ids.size(), 0);
  on_path[a] = 1;
  enumerate_simple_paths(g.adj, path, on_path, [&](const std::vector<int32_t>& p) {
    // p = a, b, c1..ck, d with k >= 1.
    if (p.size() < 4) return;
    const int k = static_cast<int>(p.size()) - 3;
    const int32_t b = p[1];
    const int32_t d = p.back();
    if (g.colors[d] != own) return;
    if (g.colors[b] == own) return;
    for (int j = 1; j <= k; ++j) {
      if (g.colors[p[1 + j]] == own) return;
    }
    for (int j = 1; j < k; ++j) {
      for (int32_t x : g.adj[p[1 + j]]) {
        if (g.colors[x] == own) return;
      }
    }
    for (int j = 1; j <= k; ++j) {
      const int32_t cj = p[1 + j];
      const int to_d = k + 1 - j;
      const int to_a = j + 1;
      for (int32_t f = 0; f < static_cast<int32_t>(g.ids.size()); ++f) {
        if (g.colors[f] != own) continue;
        if (dist[f][cj] < to_d && dist[f][cj] < to_a) return;
      }
    }
    const int32_t ck = p[p.size() - 2];
    std::optional<std::pair<int32_t, int32_t>> best;
    for (int32_t x : g.adj[b]) {
      if (g.colors[x] != own) continue;
      for (int32_t y : g.adj[ck]) {
        if (g.colors[y] != own) continue;
        const uint64_t v = xor_distance(g.ids[x], g.ids[y]);
        if (!best || v < xor_distance(g.ids[best->first], g.ids[best->second]) ||
            (v == xor_distance(g.ids[best->first], g.ids[best->second]) &&
             std::pair{g.ids[x], g.ids[y]} < std::pair{g.ids[best->first], g.ids[best->second]})) {
          best = {x, y};
        }
      }
    }
    if (!best || best->first != a) return;
    take(mode == ConnectTarget::kPathEnd ? d : best->second);
  });

  return {targets.begin(), targets.end()};
}

}  // namespace bmlrp::oracle
