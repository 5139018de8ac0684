#include "bmlrp/propagation.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <deque>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmlrp {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 2;

std::pair<int32_t, int32_t> norm_edge(int32_t u, int32_t v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

// Hop distance from every node to the nearest node of the given color.
std::vector<int> distance_to_color(const ColoredGraph& g, Color c) {
  std::vector<int> dist(g.ids.size(), kInf);
  std::deque<int32_t> queue;
  for (int32_t i = 0; i < static_cast<int32_t>(g.ids.size()); ++i) {
    if (g.colors[i] == c) {
      dist[i] = 0;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const int32_t u = queue.front();
    queue.pop_front();
    for (int32_t v : g.adj[u]) {
      if (dist[v] > dist[u] + 1) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

struct GOutDfs {
  const ColoredGraph& g;
  const std::vector<int>& oppdist;
  Color center_color;
  int max_interior;
  bool collect_paths;

  std::vector<int32_t> cur;  // [excluded, center, c1..cm]
  std::vector<char> on_path;
  std::set<int32_t> nodes;
  std::set<std::pair<int32_t, int32_t>> edges;
  std::vector<std::vector<int32_t>> paths;
  uint64_t truncated = 0;

  void emit(int32_t d) {
    cur.push_back(d);
    if (collect_paths) paths.push_back(cur);
    for (size_t i = 0; i + 1 < cur.size(); ++i) {
      nodes.insert(cur[i]);
      edges.insert(norm_edge(cur[i], cur[i + 1]));
    }
    nodes.insert(d);
    cur.pop_back();
  }

  // m interior nodes on the stack; kcap is the largest admissible final
  // interior count given the distance constraints seen so far.
  void run(int32_t last, int m, int kcap) {
    for (int32_t x : g.adj[last]) {
      if (on_path[x]) continue;
      if (g.colors[x] != center_color) {
        if (m <= kcap) emit(x);
      } else {
        const int j = m + 1;
        int cap = kcap;
        const int beta = oppdist[x];
        if (beta < j + 1) cap = std::min(cap, j + beta - 1);
        if (cap < j) continue;  // no completion length can satisfy x
        if (j > max_interior) {
          ++truncated;
          continue;
        }
        on_path[x] = 1;
        cur.push_back(x);
        run(x, j, cap);
        cur.pop_back();
        on_path[x] = 0;
      }
    }
  }
};

}  // namespace

int32_t ColoredGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return -1;
  return static_cast<int32_t>(it - ids.begin());
}

bool ColoredGraph::has_edge(int32_t u, int32_t v) const {
  return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

GOut compute_g_out(const NeighborGraph& ng, int max_interior, bool collect_paths) {
  const ColoredGraph& g = ng.g;
  assert(ng.center >= 0 && ng.excluded >= 0 && g.has_edge(ng.center, ng.excluded));

  const Color center_color = g.colors[ng.center];
  GOutDfs dfs{g,
              distance_to_color(g, opposite(center_color)),
              center_color,
              max_interior,
              collect_paths,
              {},
              std::vector<char>(g.ids.size(), 0),
              {},
              {},
              {},
              0};
  dfs.cur = {ng.excluded, ng.center};
  dfs.on_path[ng.excluded] = 1;
  dfs.on_path[ng.center] = 1;
  dfs.run(ng.center, 0, kInf);

  GOut out;
  out.truncated = dfs.truncated;
  if (collect_paths) {
    out.paths.assign(dfs.paths.begin(), dfs.paths.end());
    std::sort(out.paths.begin(), out.paths.end());
  }
  for (int32_t n : dfs.nodes) {
    if (n != ng.excluded) out.nodes.push_back(n);
  }
  for (const auto& e : dfs.edges) {
    if (e.first != ng.excluded && e.second != ng.excluded) out.edges.push_back(e);
  }
  return out;
}

std::vector<std::vector<NodeId>> paths_to_ids(const std::vector<std::vector<int32_t>>& paths,
                                              const ColoredGraph& g) {
  std::vector<std::vector<NodeId>> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    std::vector<NodeId> q;
    q.reserve(p.size());
    for (int32_t i : p) q.push_back(g.ids[i]);
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Link> edges_to_ids(const std::vector<std::pair<int32_t, int32_t>>& edges,
                               const ColoredGraph& g) {
  std::vector<Link> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back(make_link(g.ids[e.first], g.ids[e.second]));
  std::sort(out.begin(), out.end());
  return out;
}

LevelEngine::LevelEngine(const std::vector<NodeId>& members, const std::vector<Link>& links,
                         const std::vector<Color>& colors, EngineOptions opt)
    : opt_(opt) {
  if (members.size() != colors.size()) throw std::invalid_argument("colors/members size mismatch");
  init(members, links, colors);
}

LevelEngine::LevelEngine(const std::vector<NodeId>& members, const std::vector<Link>& links,
                         uint16_t color_bit, EngineOptions opt)
    : opt_(opt) {
  std::vector<Color> colors;
  colors.reserve(members.size());
  for (NodeId m : members) colors.push_back(color_at(m, color_bit));
  init(members, links, colors);
}

void LevelEngine::init(const std::vector<NodeId>& members, const std::vector<Link>& links,
                       const std::vector<Color>& colors) {
  std::vector<size_t> order(members.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return members[a] < members[b]; });
  base_.ids.reserve(members.size());
  base_.colors.reserve(members.size());
  for (size_t i : order) {
    base_.ids.push_back(members[i]);
    base_.colors.push_back(colors[i]);
  }
  for (size_t i = 1; i < base_.ids.size(); ++i) {
    if (base_.ids[i] == base_.ids[i - 1]) throw std::invalid_argument("duplicate member id");
  }
  base_.adj.resize(base_.ids.size());
  for (const Link& l : links) {
    const int32_t u = base_.index_of(l.first), v = base_.index_of(l.second);
    if (u < 0 || v < 0) throw std::invalid_argument("link endpoint outside the level");
    if (u == v) throw std::invalid_argument("self-link");
    base_.adj[u].push_back(v);
    base_.adj[v].push_back(u);
  }
  for (auto& a : base_.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  ns_.resize(base_.ids.size());
  for (size_t i = 0; i < ns_.size(); ++i) ns_[i].nbrs = base_.adj[i];
}

void LevelEngine::add_record(NodeState& st, int32_t sender, const Rec& r) {
  if (!st.from[sender].insert(r).second) return;
  st.edge_senders[r.edge][sender]++;
  auto wire = r.path;
  wire.push_back(sender);
  st.edge_wires[r.edge].insert(std::move(wire));
}

void LevelEngine::remove_record(NodeState& st, int32_t sender, const Rec& r) {
  auto fit = st.from.find(sender);
  if (fit == st.from.end() || fit->second.erase(r) == 0) return;
  if (fit->second.empty()) st.from.erase(fit);
  auto es = st.edge_senders.find(r.edge);
  if (es != st.edge_senders.end()) {
    auto cnt = es->second.find(sender);
    if (cnt != es->second.end() && --cnt->second == 0) es->second.erase(cnt);
    if (es->second.empty()) st.edge_senders.erase(es);
  }
  auto ew = st.edge_wires.find(r.edge);
  if (ew != st.edge_wires.end()) {
    auto wire = r.path;
    wire.push_back(sender);
    ew->second.erase(wire);
    if (ew->second.empty()) st.edge_wires.erase(ew);
  }
}

void LevelEngine::drop_sender(NodeState& st, int32_t sender) {
  auto fit = st.from.find(sender);
  if (fit == st.from.end()) return;
  const std::set<Rec> bucket = fit->second;  // copy: remove_record edits st.from
  for (const Rec& r : bucket) remove_record(st, sender, r);
}

NeighborGraph LevelEngine::assemble(int32_t a, int32_t b,
                                    std::vector<int32_t>& local_to_global) const {
  const NodeState& st = ns_[a];
  // Edge set: direct links of a (including a--b) plus every recorded edge
  // known through some sender other than b.
  std::vector<std::pair<int32_t, int32_t>> edges;
  edges.reserve(st.edge_senders.size() + st.nbrs.size());
  for (int32_t x : st.nbrs) edges.push_back(norm_edge(a, x));
  for (const auto& [edge, senders] : st.edge_senders) {
    const auto only = senders.size() == 1 ? senders.begin()->first : -1;
    if (only != b) edges.push_back(edge);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  local_to_global.clear();
  for (const auto& e : edges) {
    local_to_global.push_back(e.first);
    local_to_global.push_back(e.second);
  }
  std::sort(local_to_global.begin(), local_to_global.end());
  local_to_global.erase(std::unique(local_to_global.begin(), local_to_global.end()),
                        local_to_global.end());

  NeighborGraph ng;
  ng.g.ids.reserve(local_to_global.size());
  ng.g.colors.reserve(local_to_global.size());
  for (int32_t gidx : local_to_global) {
    ng.g.ids.push_back(base_.ids[gidx]);
    ng.g.colors.push_back(base_.colors[gidx]);
  }
  ng.g.adj.resize(local_to_global.size());
  auto local_of = [&](int32_t gidx) {
    return static_cast<int32_t>(
        std::lower_bound(local_to_global.begin(), local_to_global.end(), gidx) -
        local_to_global.begin());
  };
  for (const auto& e : edges) {
    const int32_t u = local_of(e.first), v = local_of(e.second);
    ng.g.adj[u].push_back(v);
    ng.g.adj[v].push_back(u);
  }
  for (auto& av : ng.g.adj) {
    std::sort(av.begin(), av.end());
    av.erase(std::unique(av.begin(), av.end()), av.end());
  }
  ng.center = local_of(a);
  ng.excluded = local_of(b);
  return ng;
}

void LevelEngine::compute_node_msgs(int32_t a, std::vector<Msg>& out, KernelCounts& counts) const {
  const NodeState& st = ns_[a];
  out.clear();
  for (int32_t b : st.nbrs) {
    if (!st.structural_change) {
      bool relevant = false;
      for (int32_t s : st.changed_senders) {
        if (s != b) {
          relevant = true;
          break;
        }
      }
      if (!relevant) continue;
    }
    std::vector<int32_t> local_to_global;
    const NeighborGraph ng = assemble(a, b, local_to_global);
    const GOut gout = compute_g_out(ng, opt_.max_interior, /*collect_paths=*/false);

    std::set<Rec> outset;
    for (const auto& le : gout.edges) {
      const auto e = norm_edge(local_to_global[le.first], local_to_global[le.second]);
      if (e.first == a || e.second == a) {
        // a's own link: the attached path is just the far endpoint.
        outset.insert(Rec{e, {e.first == a ? e.second : e.first}});
        continue;
      }
      auto ew = st.edge_wires.find(e);
      bool sent = false;
      if (ew != st.edge_wires.end()) {
        for (const auto& wire : ew->second) {  // ordered shortest-first
          if (std::find(wire.begin(), wire.end(), b) == wire.end()) {
            outset.insert(Rec{e, wire});
            sent = true;
            break;
          }
        }
      }
      if (!sent) {
        // Every transmission path for this edge passes through the
        // recipient; it cannot be forwarded legally.
        ++counts.unsendable;
      }
    }
    counts.truncated += gout.truncated;

    const std::set<Rec>* held = nullptr;
    static const std::set<Rec> kEmpty;
    auto hit = ns_[b].from.find(a);
    held = hit == ns_[b].from.end() ? &kEmpty : &hit->second;

    Msg msg;
    msg.to = b;
    std::set_difference(outset.begin(), outset.end(), held->begin(), held->end(),
                        std::back_inserter(msg.add));
    std::set_difference(held->begin(), held->end(), outset.begin(), outset.end(),
                        std::back_inserter(msg.remove));
    if (!msg.add.empty() || !msg.remove.empty()) out.push_back(std::move(msg));
  }
}

bool LevelEngine::round() {
  const int32_t n = static_cast<int32_t>(ns_.size());
  std::vector<int32_t> active;
  for (int32_t i = 0; i < n; ++i) {
    if (ns_[i].structural_change || !ns_[i].changed_senders.empty()) active.push_back(i);
  }
  if (active.empty()) return false;

  std::vector<std::vector<Msg>> msgs(active.size());
  std::vector<KernelCounts> counts(active.size());
  if (opt_.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
    for (size_t k = 0; k < active.size(); ++k) compute_node_msgs(active[k], msgs[k], counts[k]);
  } else {
    for (size_t k = 0; k < active.size(); ++k) compute_node_msgs(active[k], msgs[k], counts[k]);
  }
  for (const KernelCounts& c : counts) {
    stats_.unsendable_edges += c.unsendable;
    stats_.truncated_paths += c.truncated;
  }

  for (int32_t i = 0; i < n; ++i) {
    ns_[i].structural_change = false;
    ns_[i].changed_senders.clear();
  }

  bool changed = false;
  for (size_t k = 0; k < active.size(); ++k) {
    const int32_t a = active[k];
    for (const Msg& m : msgs[k]) {
      NodeState& dst = ns_[m.to];
      for (const Rec& r : m.remove) remove_record(dst, a, r);
      for (const Rec& r : m.add) add_record(dst, a, r);
      dst.changed_senders.push_back(a);
      stats_.records_delivered += m.add.size() + m.remove.size();
      stats_.removals_delivered += m.remove.size();
      changed = true;
      if (opt_.record_diffs) {
        DiffLogEntry e;
        e.round = stats_.rounds + 1;
        e.from = base_.ids[a];
        e.to = base_.ids[m.to];
        for (const Rec& r : m.add) {
          e.add.push_back(EdgeRecord{make_link(base_.ids[r.edge.first], base_.ids[r.edge.second]),
                                     [&] {
                                       std::vector<NodeId> p;
                                       for (int32_t x : r.path) p.push_back(base_.ids[x]);
                                       return p;
                                     }()});
        }
        for (const Rec& r : m.remove) {
          e.remove.push_back(
              EdgeRecord{make_link(base_.ids[r.edge.first], base_.ids[r.edge.second]), [&] {
                           std::vector<NodeId> p;
                           for (int32_t x : r.path) p.push_back(base_.ids[x]);
                           return p;
                         }()});
        }
        diff_log_.push_back(std::move(e));
      }
    }
  }
  return changed;
}

int LevelEngine::run_to_fixed_point() {
  const int limit = std::max(4, opt_.max_rounds_factor * static_cast<int>(ns_.size()));
  int rounds = 0;
  while (round()) {
    ++rounds;
    ++stats_.rounds;
    if (rounds > limit) {
      std::ostringstream os;
      os << "propagation did not converge after " << rounds << " rounds over " << ns_.size()
         << " members; records delivered " << stats_.records_delivered << ", removals "
         << stats_.removals_delivered;
      throw NonConvergence(os.str());
    }
  }
  ++stats_.rounds;  // the quiescent round that detected the fixed point
  return rounds + 1;
}

void LevelEngine::remove_link(NodeId u, NodeId v) {
  const int32_t ui = base_.index_of(u), vi = base_.index_of(v);
  if (ui < 0 || vi < 0) throw std::invalid_argument("link endpoint outside the level");
  auto drop = [&](int32_t x, int32_t y) {
    auto& a = base_.adj[x];
    a.erase(std::remove(a.begin(), a.end(), y), a.end());
    auto& nb = ns_[x].nbrs;
    nb.erase(std::remove(nb.begin(), nb.end(), y), nb.end());
    drop_sender(ns_[x], y);
    ns_[x].structural_change = true;
  };
  drop(ui, vi);
  drop(vi, ui);
}

RoutingTable LevelEngine::table(NodeId member, LevelRef ref) const {
  const int32_t a = base_.index_of(member);
  if (a < 0) throw std::invalid_argument("not a member: " + member.to_binary());
  std::vector<NodeId> connected;
  for (int32_t x : ns_[a].nbrs) connected.push_back(base_.ids[x]);
  RoutingTable t(member, ref, std::move(connected));
  for (const auto& [sender, bucket] : ns_[a].from) {
    TableUpdate up;
    up.from = base_.ids[sender];
    for (const Rec& r : bucket) {
      std::vector<NodeId> path;
      path.reserve(r.path.size());
      for (int32_t x : r.path) path.push_back(base_.ids[x]);
      up.add.push_back(
          EdgeRecord{make_link(base_.ids[r.edge.first], base_.ids[r.edge.second]), std::move(path)});
    }
    t.apply_update(up);
  }
  return t;
}

std::vector<RoutingTable> LevelEngine::tables(LevelRef ref) const {
  std::vector<RoutingTable> out;
  out.reserve(base_.ids.size());
  for (NodeId id : base_.ids) out.push_back(table(id, ref));
  return out;
}

LevelEngine::VisibleGraph LevelEngine::visible(int32_t node) const {
  VisibleGraph v;
  v.self = node;
  v.neighbors = ns_[node].nbrs;
  for (int32_t x : v.neighbors) v.edges.push_back(norm_edge(node, x));
  for (const auto& [edge, senders] : ns_[node].edge_senders) v.edges.push_back(edge);
  std::sort(v.edges.begin(), v.edges.end());
  v.edges.erase(std::unique(v.edges.begin(), v.edges.end()), v.edges.end());
  return v;
}

NeighborGraph LevelEngine::build_neighbor_graph(NodeId a, NodeId b) const {
  const int32_t ai = base_.index_of(a), bi = base_.index_of(b);
  if (ai < 0 || bi < 0) throw std::invalid_argument("node outside the level");
  if (!std::binary_search(ns_[ai].nbrs.begin(), ns_[ai].nbrs.end(), bi)) {
    throw std::invalid_argument("b is not a connected neighbor of a");
  }
  std::vector<int32_t> unused;
  return assemble(ai, bi, unused);
}

}  // namespace bmlrp
