#include "bmlrp/ascent.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmlrp {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 2;

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

std::vector<int> dist_to_own_color(const ColoredGraph& g, Color c) {
  std::vector<int> dist(g.ids.size(), kInf);
  std::deque<int32_t> q;
  for (int32_t i = 0; i < static_cast<int32_t>(g.ids.size()); ++i) {
    if (g.colors[i] == c) {
      dist[i] = 0;
      q.push_back(i);
    }
  }
  while (!q.empty()) {
    const int32_t u = q.front();
    q.pop_front();
    for (int32_t v : g.adj[u]) {
      if (dist[v] > dist[u] + 1) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

void connect_inside_rec(NodeId self, std::vector<NodeId> nodes, uint16_t level_depth, int l,
                        std::vector<NodeId>& out) {
  if (nodes.size() <= 1) return;
  const uint32_t bit = static_cast<uint32_t>(level_depth) + 1 + static_cast<uint32_t>(l);
  if (bit >= self.width) return;
  std::vector<NodeId> zero, one;
  for (NodeId x : nodes) {
    (address_bit(x, static_cast<uint16_t>(bit)) == 0 ? zero : one).push_back(x);
  }
  if (zero.empty() || one.empty()) {
    // Every member agrees on this bit; discriminate on the next one.
    connect_inside_rec(self, std::move(nodes), level_depth, l + 1, out);
    return;
  }
  uint64_t best = 0;
  NodeId bw, bb;
  bool have = false;
  for (NodeId w : zero) {
    for (NodeId b : one) {
      const uint64_t x = xor_distance(w, b);
      if (!have || x < best || (x == best && std::pair{w, b} < std::pair{bw, bb})) {
        have = true;
        best = x;
        bw = w;
        bb = b;
      }
    }
  }
  if (address_bit(self, static_cast<uint16_t>(bit)) == 0) {
    if (bw == self) out.push_back(bb);
    connect_inside_rec(self, std::move(zero), level_depth, l + 1, out);
  } else {
    if (bb == self) out.push_back(bw);
    connect_inside_rec(self, std::move(one), level_depth, l + 1, out);
  }
}

struct CorridorDfs {
  const ColoredGraph& g;
  const std::vector<int>& samedist;
  Color own;
  int32_t self;
  ConnectTarget mode;
  int max_interior;

  std::vector<int32_t> cur;  // [self, b, c1..cm]
  std::vector<char> on_path;
  // target -> justifying path (kept shortest, then lexicographically least)
  std::map<int32_t, std::vector<int32_t>>* found = nullptr;

  void offer(int32_t target, std::vector<int32_t> path) {
    if (target == self) return;
    auto it = found->find(target);
    if (it == found->end()) {
      found->emplace(target, std::move(path));
      return;
    }
    auto& best = it->second;
    if (path.size() < best.size() || (path.size() == best.size() && path < best)) {
      best = std::move(path);
    }
  }

  // The XOR argmin over own-color neighbors of first and last corridor
  // nodes; the corridor fires only when the chosen first-end partner is
  // self.
  void try_terminals(int32_t b, int32_t ck, int m, int kcap) {
    if (m > kcap) return;
    bool any_d = false;
    for (int32_t d : g.adj[ck]) {
      if (g.colors[d] == own && !on_path[d]) {
        any_d = true;
        break;
      }
    }
    if (!any_d) return;
    uint64_t best = 0;
    int32_t e1 = -1, e2 = -1;
    for (int32_t x : g.adj[b]) {
      if (g.colors[x] != own) continue;
      for (int32_t y : g.adj[ck]) {
        if (g.colors[y] != own) continue;
        const uint64_t v = xor_distance(g.ids[x], g.ids[y]);
        if (e1 < 0 || v < best ||
            (v == best &&
             std::pair{g.ids[x], g.ids[y]} < std::pair{g.ids[e1], g.ids[e2]})) {
          best = v;
          e1 = x;
          e2 = y;
        }
      }
    }
    if (e1 != self) return;
    if (mode == ConnectTarget::kXorPartner) {
      if (on_path[e2]) return;
      auto path = cur;
      path.push_back(e2);
      offer(e2, std::move(path));
      return;
    }
    for (int32_t d : g.adj[ck]) {
      if (g.colors[d] != own || on_path[d]) continue;
      auto path = cur;
      path.push_back(d);
      offer(d, std::move(path));
    }
  }

  void run(int32_t last, int m, int kcap) {
    if (m >= 1) try_terminals(cur[1], last, m, kcap);
    // Interior nodes other than the final one must have no own-color
    // neighbor at all, which is exactly samedist == 1.
    if (m >= 1 && samedist[last] == 1) return;
    for (int32_t x : g.adj[last]) {
      if (on_path[x] || g.colors[x] == own) continue;
      const int j = m + 1;
      int cap = kcap;
      const int beta = samedist[x];
      if (beta < j + 1) cap = std::min(cap, j + beta - 1);
      if (cap < j || j > max_interior) continue;
      on_path[x] = 1;
      cur.push_back(x);
      run(x, j, cap);
      cur.pop_back();
      on_path[x] = 0;
    }
  }
};

std::vector<NodeId> to_id_path(const std::vector<int32_t>& p, const ColoredGraph& g) {
  std::vector<NodeId> out;
  out.reserve(p.size());
  for (int32_t x : p) out.push_back(g.ids[x]);
  return out;
}

// Lexicographically least shortest path self..target in the visible graph.
std::vector<int32_t> lex_shortest_path(const std::vector<std::vector<int32_t>>& adj, int32_t from,
                                       int32_t to) {
  const auto dist = bfs_from(adj, to);
  if (dist[from] >= kInf) return {};
  std::vector<int32_t> path{from};
  int32_t cur = from;
  while (cur != to) {
    int32_t next = -1;
    for (int32_t x : adj[cur]) {  // adjacency is sorted: first hit is least
      if (dist[x] == dist[cur] - 1) {
        next = x;
        break;
      }
    }
    assert(next >= 0);
    path.push_back(next);
    cur = next;
  }
  return path;
}

}  // namespace

std::vector<NodeId> connect_inside(NodeId self, const std::vector<NodeId>& nodes,
                                   uint16_t level_depth) {
  std::vector<NodeId> out;
  connect_inside_rec(self, nodes, level_depth, 0, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SelectionView selection_view_from_table(const RoutingTable& table) {
  SelectionView v;
  v.level_depth = table.level.depth;
  std::set<NodeId> nodes;
  nodes.insert(table.owner);
  const auto edges = table.visible_edges();
  for (const Link& e : edges) {
    nodes.insert(e.first);
    nodes.insert(e.second);
  }
  v.g.ids.assign(nodes.begin(), nodes.end());
  v.g.colors.reserve(v.g.ids.size());
  for (NodeId id : v.g.ids) v.g.colors.push_back(color_at(id, table.level.depth));
  v.g.adj.resize(v.g.ids.size());
  for (const Link& e : edges) {
    const int32_t u = v.g.index_of(e.first), w = v.g.index_of(e.second);
    v.g.adj[u].push_back(w);
    v.g.adj[w].push_back(u);
  }
  for (auto& a : v.g.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  v.self = v.g.index_of(table.owner);
  for (NodeId n : table.connected()) {
    const int32_t i = v.g.index_of(n);
    if (i >= 0) v.connected.push_back(i);
  }
  std::sort(v.connected.begin(), v.connected.end());
  return v;
}

std::vector<Selection> select_connections(const SelectionView& view, ConnectTarget mode,
                                          int extra_k) {
  const ColoredGraph& g = view.g;
  const int32_t a = view.self;
  const Color own = g.colors[a];
  const NodeId self_id = g.ids[a];

  std::map<int32_t, std::vector<int32_t>> found;
  auto offer = [&](int32_t target, std::vector<int32_t> path) {
    if (target == a) return;
    auto it = found.find(target);
    if (it == found.end()) {
      found.emplace(target, std::move(path));
    } else if (path.size() < it->second.size() ||
               (path.size() == it->second.size() && path < it->second)) {
      it->second = std::move(path);
    }
  };

  // Same-color direct neighbors.
  for (int32_t x : view.connected) {
    if (g.colors[x] == own) offer(x, {a, x});
  }

  // Trees over each opposite-color neighbor's same-color adjacency.
  for (int32_t w : view.connected) {
    if (g.colors[w] == own) continue;
    std::vector<NodeId> s;
    for (int32_t x : g.adj[w]) {
      if (g.colors[x] == own) s.push_back(g.ids[x]);
    }
    for (NodeId t : connect_inside(self_id, s, view.level_depth)) {
      offer(g.index_of(t), {a, w, g.index_of(t)});
    }
  }

  // Long-range corridors through opposite-color interiors.
  const auto samedist = dist_to_own_color(g, own);
  CorridorDfs dfs{g,   samedist, own, a, mode, /*max_interior=*/32, {a},
                  std::vector<char>(g.ids.size(), 0), &found};
  dfs.on_path[a] = 1;
  for (int32_t b : g.adj[a]) {
    if (g.colors[b] == own) continue;
    dfs.on_path[b] = 1;
    dfs.cur.push_back(b);
    dfs.run(b, 0, kInf);
    dfs.cur.pop_back();
    dfs.on_path[b] = 0;
  }

  if (extra_k > 0) {
    const auto dist = bfs_from(g.adj, a);
    std::vector<int32_t> cand;
    for (int32_t x = 0; x < static_cast<int32_t>(g.ids.size()); ++x) {
      if (x != a && g.colors[x] == own && dist[x] < kInf && !found.count(x)) cand.push_back(x);
    }
    std::sort(cand.begin(), cand.end(), [&](int32_t p, int32_t q) {
      if (dist[p] != dist[q]) return dist[p] < dist[q];
      const uint64_t xp = xor_distance(self_id, g.ids[p]), xq = xor_distance(self_id, g.ids[q]);
      if (xp != xq) return xp < xq;
      return g.ids[p] < g.ids[q];
    });
    for (int i = 0; i < extra_k && i < static_cast<int>(cand.size()); ++i) {
      offer(cand[i], lex_shortest_path(g.adj, a, cand[i]));
    }
  }

  std::vector<Selection> out;
  out.reserve(found.size());
  for (const auto& [t, p] : found) out.push_back({g.ids[t], to_id_path(p, g)});
  std::sort(out.begin(), out.end());
  return out;
}

double LevelNet::average_degree() const {
  if (members.empty()) return 0;
  return 2.0 * static_cast<double>(links.size()) / static_cast<double>(members.size());
}

const LevelNet& MultiLevelNetwork::level(LevelRef ref) const {
  auto it = levels.find(ref);
  if (it == levels.end()) {
    throw std::invalid_argument("no such level network: depth " + std::to_string(ref.depth) +
                                " prefix " + ref.to_string());
  }
  return it->second;
}

MultiLevelNetwork build_multilevel(const PhysicalNetwork& physical, BuildOptions opts) {
  if (physical.nodes.empty()) throw std::invalid_argument("empty network");
  {
    AdjacencyIndex idx(physical);
    std::vector<char> seen(idx.ids.size(), 0);
    std::deque<int32_t> q{0};
    seen[0] = 1;
    size_t reached = 1;
    while (!q.empty()) {
      const int32_t u = q.front();
      q.pop_front();
      for (int32_t v : idx.adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          q.push_back(v);
        }
      }
    }
    if (reached != idx.ids.size()) {
      throw std::invalid_argument("physical network is not connected; restrict to the largest "
                                  "component first");
    }
  }

  MultiLevelNetwork net;
  net.physical = physical;
  net.options = opts;

  struct Work {
    LevelRef ref;
    std::vector<NodeId> members;
    std::vector<Link> links;
    std::map<Link, std::vector<NodeId>> realizations;
  };
  std::deque<Work> todo;
  {
    auto ids = physical.node_ids();
    std::sort(ids.begin(), ids.end());
    todo.push_back({LevelRef{}, std::move(ids), physical.links, {}});
  }

  while (!todo.empty()) {
    Work w = std::move(todo.front());
    todo.pop_front();

    LevelNet ln;
    ln.ref = w.ref;
    ln.members = std::move(w.members);
    ln.links = std::move(w.links);
    ln.realizations = std::move(w.realizations);

    if (ln.members.size() <= 1 || ln.ref.depth >= physical.width_bits) {
      net.levels.emplace(ln.ref, std::move(ln));
      continue;
    }

    LevelEngine engine(ln.members, ln.links, /*color_bit=*/ln.ref.depth, opts.engine);
    try {
      ln.rounds = engine.run_to_fixed_point();
    } catch (const NonConvergence& e) {
      throw NonConvergence(std::string(e.what()) + " [level " + ln.ref.to_string() + "]");
    }
    for (const RoutingTable& t : engine.tables(ln.ref)) ln.tables.emplace(t.owner, t);

    const int32_t m = static_cast<int32_t>(ln.members.size());
    std::vector<std::vector<Selection>> selected(m);
    const bool par = opts.engine.parallel;
    if (par) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
      for (int32_t i = 0; i < m; ++i) {
        selected[i] = select_connections(selection_view_from_table(ln.tables.at(ln.members[i])),
                                         opts.connect_target, opts.extra_k);
      }
    } else {
      for (int32_t i = 0; i < m; ++i) {
        selected[i] = select_connections(selection_view_from_table(ln.tables.at(ln.members[i])),
                                         opts.connect_target, opts.extra_k);
      }
    }

    // A link exists when either endpoint selected the other; its realization
    // comes from the smaller endpoint when that side selected, otherwise the
    // larger endpoint's path reversed.
    std::map<Link, std::vector<NodeId>> child_real;
    for (int32_t i = 0; i < m; ++i) {
      const NodeId u = ln.members[i];
      for (const Selection& s : selected[i]) {
        if (color_at(u, ln.ref.depth) != color_at(s.target, ln.ref.depth)) {
          throw std::logic_error("selected target of the opposite color");
        }
        const Link l = make_link(u, s.target);
        auto path = s.via;
        if (l.first != u) std::reverse(path.begin(), path.end());
        auto it = child_real.find(l);
        if (it == child_real.end()) {
          child_real.emplace(l, std::move(path));
        } else if (l.first == u) {
          it->second = std::move(path);  // smaller endpoint wins
        }
      }
    }

    Work child0{ln.ref.child(0), {}, {}, {}};
    Work child1{ln.ref.child(1), {}, {}, {}};
    for (NodeId id : ln.members) {
      (address_bit(id, ln.ref.depth) == 0 ? child0 : child1).members.push_back(id);
    }
    for (auto& [link, path] : child_real) {
      auto& c = address_bit(link.first, ln.ref.depth) == 0 ? child0 : child1;
      c.links.push_back(link);
      c.realizations.emplace(link, std::move(path));
    }
    net.levels.emplace(ln.ref, std::move(ln));

    const bool deeper = opts.max_depth == 0 || child0.ref.depth <= opts.max_depth;
    if (deeper) {
      if (!child0.members.empty()) todo.push_back(std::move(child0));
      if (!child1.members.empty()) todo.push_back(std::move(child1));
    }
  }
  return net;
}

}  // namespace bmlrp
