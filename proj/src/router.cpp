#include "bmlrp/router.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "bmlrp/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmlrp {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 2;

struct IdGraph {
  std::vector<NodeId> ids;  // sorted
  std::vector<std::vector<int32_t>> adj;

  int32_t index_of(NodeId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    return it != ids.end() && *it == id ? static_cast<int32_t>(it - ids.begin()) : -1;
  }
};

IdGraph graph_of_table(const RoutingTable& t) {
  IdGraph g;
  std::set<NodeId> nodes;
  nodes.insert(t.owner);
  const auto edges = t.visible_edges();
  for (const Link& e : edges) {
    nodes.insert(e.first);
    nodes.insert(e.second);
  }
  g.ids.assign(nodes.begin(), nodes.end());
  g.adj.resize(g.ids.size());
  for (const Link& e : edges) {
    const int32_t u = g.index_of(e.first), v = g.index_of(e.second);
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return g;
}

std::vector<int> bfs_from(const std::vector<std::vector<int32_t>>& adj, int32_t src) {
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

// Lexicographically least shortest path from..to; empty when unreachable.
std::vector<NodeId> lex_shortest_path(const IdGraph& g, NodeId from, NodeId to) {
  const int32_t fi = g.index_of(from), ti = g.index_of(to);
  if (fi < 0 || ti < 0) return {};
  const auto dist = bfs_from(g.adj, ti);
  if (dist[fi] >= kInf) return {};
  std::vector<NodeId> path{from};
  int32_t cur = fi;
  while (cur != ti) {
    int32_t next = -1;
    for (int32_t x : g.adj[cur]) {
      if (dist[x] == dist[cur] - 1) {
        next = x;
        break;
      }
    }
    assert(next >= 0);
    path.push_back(g.ids[next]);
    cur = next;
  }
  return path;
}

void append_collapsing(std::vector<NodeId>& out, const std::vector<NodeId>& seg) {
  for (NodeId n : seg) {
    if (out.empty() || out.back() != n) out.push_back(n);
  }
}

}  // namespace

NodeId next_hop(NodeId x, NodeId d, const RoutingTable& table) {
  if (x == d) throw std::invalid_argument("next_hop called with x == d");
  const IdGraph g = graph_of_table(table);
  const int32_t xi = g.index_of(x);
  if (xi < 0) throw RoutingError("owner not in its own table graph");
  const auto dist = bfs_from(g.adj, xi);

  const int32_t di = g.index_of(d);
  if (di >= 0 && dist[di] < kInf) return d;

  const uint16_t lx = common_prefix_len(x, d);
  NodeId best;
  int best_dist = kInf;
  uint64_t best_xor = 0;
  bool have = false;
  for (int32_t i = 0; i < static_cast<int32_t>(g.ids.size()); ++i) {
    if (i == xi || dist[i] >= kInf) continue;
    const NodeId b = g.ids[i];
    if (common_prefix_len(b, d) <= lx) continue;
    const uint64_t bx = xor_distance(b, d);
    if (!have || dist[i] < best_dist || (dist[i] == best_dist && bx < best_xor) ||
        (dist[i] == best_dist && bx == best_xor && b < best)) {
      have = true;
      best = b;
      best_dist = dist[i];
      best_xor = bx;
    }
  }
  if (!have) {
    throw RoutingError("no reachable node improves the prefix toward " + d.to_binary() +
                       " from " + x.to_binary());
  }
  return best;
}

std::vector<NodeId> expand_link(const MultiLevelNetwork& net, LevelRef level, NodeId u, NodeId v) {
  if (level.depth == 0) return {u, v};
  const LevelNet& ln = net.level(level);
  const Link l = make_link(u, v);
  auto it = ln.realizations.find(l);
  if (it == ln.realizations.end()) {
    throw std::logic_error("missing realization for level-" + std::to_string(level.depth) +
                           " link " + u.to_binary() + "-" + v.to_binary());
  }
  std::vector<NodeId> hops = it->second;
  if (hops.front() != u) std::reverse(hops.begin(), hops.end());
  if (hops.front() != u || hops.back() != v) {
    throw std::logic_error("realization endpoints do not match the link");
  }
  const LevelRef parent{level.prefix >> 1, static_cast<uint16_t>(level.depth - 1)};
  std::vector<NodeId> out;
  for (size_t i = 0; i + 1 < hops.size(); ++i) {
    append_collapsing(out, expand_link(net, parent, hops[i], hops[i + 1]));
  }
  return out;
}

RouteResult route(const MultiLevelNetwork& net, NodeId s, NodeId d) {
  RouteResult res;
  res.logical_hops.push_back(s);
  res.physical_path.push_back(s);
  if (s == d) return res;

  NodeId cur = s;
  uint16_t guard = 0;
  while (cur != d) {
    if (++guard > net.width() + 1) throw std::logic_error("route exceeded the level budget");
    const uint16_t depth = common_prefix_len(cur, d);
    const LevelRef ref = LevelRef::of(d, depth);
    const LevelNet& ln = net.level(ref);
    auto tit = ln.tables.find(cur);
    if (tit == ln.tables.end()) throw RoutingError("no table for " + cur.to_binary());
    const NodeId b = next_hop(cur, d, tit->second);
    if (common_prefix_len(b, d) <= depth) {
      throw LoopViolation("next hop " + b.to_binary() + " does not improve the prefix toward " +
                          d.to_binary());
    }

    const IdGraph g = graph_of_table(tit->second);
    const auto intra = lex_shortest_path(g, cur, b);
    if (intra.empty()) throw RoutingError("chosen hop unreachable in the table graph");
    for (size_t i = 0; i + 1 < intra.size(); ++i) {
      append_collapsing(res.physical_path, expand_link(net, ref, intra[i], intra[i + 1]));
    }
    res.levels_used.push_back(depth);
    res.logical_hops.push_back(b);
    cur = b;
  }
  res.hop_count = res.physical_path.size() - 1;
  return res;
}

StretchStats measure_stretch(const MultiLevelNetwork& net, size_t sample_count, uint64_t seed,
                             bool parallel) {
  StretchStats st;
  auto ids = net.physical.node_ids();
  std::sort(ids.begin(), ids.end());
  const size_t n = ids.size();
  if (n < 2 || sample_count == 0) return st;

  Rng rng = Rng(seed).substream(rng_tag::kStretchPairs);
  std::vector<std::pair<int32_t, int32_t>> pairs;
  pairs.reserve(sample_count);
  for (size_t k = 0; k < sample_count; ++k) {
    const auto i = static_cast<int32_t>(rng.next_below(n));
    auto j = static_cast<int32_t>(rng.next_below(n - 1));
    if (j >= i) ++j;
    pairs.emplace_back(i, j);
  }

  AdjacencyIndex phys(net.physical);
  std::vector<int32_t> sources;
  for (const auto& p : pairs) sources.push_back(p.first);
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  std::vector<std::vector<int>> source_dists(sources.size());
  const int32_t ns = static_cast<int32_t>(sources.size());
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int32_t k = 0; k < ns; ++k) source_dists[k] = bfs_from(phys.adj, sources[k]);
  } else {
    for (int32_t k = 0; k < ns; ++k) source_dists[k] = bfs_from(phys.adj, sources[k]);
  }
  std::unordered_map<int32_t, const std::vector<int>*> dist_from;
  dist_from.reserve(sources.size());
  for (size_t k = 0; k < sources.size(); ++k) dist_from.emplace(sources[k], &source_dists[k]);

  st.samples.resize(pairs.size());
  const int32_t np = static_cast<int32_t>(pairs.size());
  std::vector<std::string> errors(pairs.size());
  auto run_pair = [&](int32_t k) {
    const auto [i, j] = pairs[k];
    try {
      const RouteResult r = route(net, ids[i], ids[j]);
      const int bd = (*dist_from.at(i))[j];
      st.samples[k] = {ids[i], ids[j], r.hop_count, bd,
                       static_cast<double>(r.hop_count) / static_cast<double>(bd)};
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  };
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (int32_t k = 0; k < np; ++k) run_pair(k);
  } else {
    for (int32_t k = 0; k < np; ++k) run_pair(k);
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw RoutingError(e);
  }

  std::vector<double> stretches;
  stretches.reserve(st.samples.size());
  double hop_sum = 0, stretch_sum = 0;
  for (const auto& s : st.samples) {
    stretches.push_back(s.stretch);
    hop_sum += static_cast<double>(s.hops);
    stretch_sum += s.stretch;
  }
  std::sort(stretches.begin(), stretches.end());
  const size_t m = stretches.size();
  st.mean_stretch = stretch_sum / static_cast<double>(m);
  st.mean_hops = hop_sum / static_cast<double>(m);
  st.median_stretch = m % 2 ? stretches[m / 2] : 0.5 * (stretches[m / 2 - 1] + stretches[m / 2]);
  st.p95_stretch = stretches[std::min(m - 1, static_cast<size_t>(0.95 * static_cast<double>(m)))];
  return st;
}

}  // namespace bmlrp
