#include <doctest.h>

#include <map>
#include <set>

#include "bmlrp/oracle.hpp"
#include "bmlrp/propagation.hpp"
#include "bmlrp/rng.hpp"

using namespace bmlrp;

namespace {

// Converged level-0 engine over the 12-node example.
LevelEngine converged12(const fixtures::LabeledNetwork& f, EngineOptions opt = {}) {
  auto ids = f.net.node_ids();
  std::sort(ids.begin(), ids.end());
  LevelEngine engine(ids, f.net.links, /*color_bit=*/0, opt);
  engine.run_to_fixed_point();
  return engine;
}

std::set<std::vector<int>> paths_as_labels(const GOut& g, const ColoredGraph& local,
                                           const fixtures::LabeledNetwork& f) {
  std::map<NodeId, int> rev;
  for (const auto& [label, id] : f.label_to_id) rev[id] = label;
  std::set<std::vector<int>> out;
  for (const auto& p : paths_to_ids(g.paths, local)) {
    std::vector<int> q;
    for (NodeId n : p) q.push_back(rev.at(n));
    out.insert(q);
  }
  return out;
}

std::set<std::pair<int, int>> edges_as_labels(const std::vector<Link>& edges,
                                              const fixtures::LabeledNetwork& f) {
  std::map<NodeId, int> rev;
  for (const auto& [label, id] : f.label_to_id) rev[id] = label;
  std::set<std::pair<int, int>> out;
  for (const Link& e : edges) {
    const int a = rev.at(e.first), b = rev.at(e.second);
    out.insert(std::minmax(a, b));
  }
  return out;
}

}  // namespace

TEST_CASE("12-node example: forwarded subsets match the drawn graphs") {
  const auto f = fixtures::propagation12();
  LevelEngine engine = converged12(f);

  SUBCASE("neighbor graph of node 1 toward node 0") {
    const NeighborGraph ng = engine.build_neighbor_graph(f.id(1), f.id(0));
    const auto edges = edges_as_labels(edges_to_ids(
        [&] {
          std::vector<std::pair<int32_t, int32_t>> es;
          for (int32_t u = 0; u < static_cast<int32_t>(ng.g.adj.size()); ++u) {
            for (int32_t v : ng.g.adj[u]) {
              if (u < v) es.emplace_back(u, v);
            }
          }
          return es;
        }(),
        ng.g), f);
    const std::set<std::pair<int, int>> expect = {{0, 1}, {1, 2}, {1, 5}, {2, 3}, {2, 6},
                                                  {3, 7}, {4, 5}, {5, 6}};
    CHECK(edges == expect);
  }

  SUBCASE("subset for node 0 from node 1") {
    const NeighborGraph ng = engine.build_neighbor_graph(f.id(1), f.id(0));
    const GOut g = compute_g_out(ng);
    const auto paths = paths_as_labels(g, ng.g, f);
    const std::set<std::vector<int>> expect = {{0, 1, 5, 4}, {0, 1, 5, 6}, {0, 1, 2, 6}};
    CHECK(paths == expect);
    const auto edges = edges_as_labels(edges_to_ids(g.edges, ng.g), f);
    const std::set<std::pair<int, int>> expect_edges = {{1, 2}, {1, 5}, {2, 6}, {4, 5}, {5, 6}};
    CHECK(edges == expect_edges);
  }

  SUBCASE("subset for node 0 from node 4") {
    const NeighborGraph ng = engine.build_neighbor_graph(f.id(4), f.id(0));
    const GOut g = compute_g_out(ng);
    CHECK(paths_as_labels(g, ng.g, f) == std::set<std::vector<int>>{{0, 4, 5}, {0, 4, 8}});
  }

  SUBCASE("node 0 converges to the drawn table") {
    const RoutingTable t = engine.table(f.id(0), LevelRef{});
    const auto edges = edges_as_labels(t.visible_edges(), f);
    const std::set<std::pair<int, int>> expect = {{0, 1}, {1, 2}, {0, 4}, {1, 5},
                                                  {2, 6}, {4, 5}, {5, 6}, {4, 8}};
    CHECK(edges == expect);
    std::map<NodeId, int> rev;
    for (const auto& [label, id] : f.label_to_id) rev[id] = label;
    std::set<int> nodes;
    for (NodeId n : t.visible_nodes()) nodes.insert(rev.at(n));
    CHECK(nodes == std::set<int>{0, 1, 2, 4, 5, 6, 8});
  }
}

TEST_CASE("degenerate level networks") {
  SUBCASE("single node converges in one round with an empty table") {
    LevelEngine engine({NodeId(5, 3)}, {}, 0);
    CHECK(engine.run_to_fixed_point() == 1);
    const RoutingTable t = engine.table(NodeId(5, 3), LevelRef{});
    CHECK(t.visible_edges().empty());
  }
  SUBCASE("single-color network keeps only direct links") {
    // a 6-cycle, everyone white
    std::vector<NodeId> ids;
    std::vector<Link> links;
    for (uint64_t k = 0; k < 6; ++k) ids.push_back(NodeId(5, k));
    for (uint64_t k = 0; k < 6; ++k) links.push_back(make_link(ids[k], ids[(k + 1) % 6]));
    LevelEngine engine(ids, links, 0);
    engine.run_to_fixed_point();
    for (NodeId n : ids) {
      const RoutingTable t = engine.table(n, LevelRef{});
      CHECK(t.visible_edges().size() == 2);  // its two ring links
      CHECK(t.records_by_sender().empty());
    }
  }
}

namespace {

struct RandomColored {
  std::vector<NodeId> ids;
  std::vector<Color> colors;
  std::vector<Link> links;
};

RandomColored random_colored_graph(Rng& rng, size_t max_nodes, double edge_factor = 1.3) {
  RandomColored g;
  const size_t n = 2 + rng.next_below(max_nodes - 1);
  std::set<uint64_t> used;
  for (size_t i = 0; i < n; ++i) {
    uint64_t v;
    do {
      v = rng.next_below(1u << 10);
    } while (!used.insert(v).second);
    g.ids.push_back(NodeId(10, v));
    g.colors.push_back(rng.next_below(2) ? Color::Black : Color::White);
  }
  // random spanning tree plus extra edges keeps it connected and sparse
  for (size_t i = 1; i < n; ++i) {
    g.links.push_back(make_link(g.ids[i], g.ids[rng.next_below(i)]));
  }
  const size_t extra = static_cast<size_t>(edge_factor * static_cast<double>(n)) - (n - 1);
  for (size_t e = 0; e < extra; ++e) {
    const size_t i = rng.next_below(n), j = rng.next_below(n);
    if (i != j) g.links.push_back(make_link(g.ids[i], g.ids[j]));
  }
  std::sort(g.links.begin(), g.links.end());
  g.links.erase(std::unique(g.links.begin(), g.links.end()), g.links.end());
  return g;
}

}  // namespace

TEST_CASE("forwarded subset equals the exhaustive reference on random graphs") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const RandomColored g = random_colored_graph(rng, 12);
    LevelEngine engine(g.ids, g.links, g.colors);
    engine.run_to_fixed_point();
    // pick a random connected pair
    const auto& cg = engine.graph();
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (int32_t u = 0; u < static_cast<int32_t>(cg.adj.size()); ++u) {
      for (int32_t v : cg.adj[u]) pairs.emplace_back(cg.ids[u], cg.ids[v]);
    }
    if (pairs.empty()) continue;
    for (int k = 0; k < 3 && !pairs.empty(); ++k) {
      const auto [a, b] = pairs[rng.next_below(pairs.size())];
      const NeighborGraph ng = engine.build_neighbor_graph(a, b);
      const GOut fast = compute_g_out(ng);
      const GOut brute = oracle::brute_g_out(ng);
      CHECK(fast.paths == brute.paths);
      CHECK(fast.nodes == brute.nodes);
      CHECK(fast.edges == brute.edges);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("every node sees the opposite color after convergence") {
  Rng rng(515);
  for (int trial = 0; trial < 40; ++trial) {
    const RandomColored g = random_colored_graph(rng, 24);
    if (!oracle::is_connected(g.ids, g.links)) continue;
    bool both = false, w = false, b = false;
    for (Color c : g.colors) (c == Color::White ? w : b) = true;
    both = w && b;
    if (!both) continue;
    LevelEngine engine(g.ids, g.links, g.colors);
    engine.run_to_fixed_point();
    const auto& cg = engine.graph();
    for (int32_t i = 0; i < static_cast<int32_t>(cg.ids.size()); ++i) {
      const RoutingTable t = engine.table(cg.ids[i], LevelRef{});
      bool sees_opposite = false;
      std::map<NodeId, Color> color_of;
      for (size_t k = 0; k < cg.ids.size(); ++k) color_of[cg.ids[k]] = cg.colors[k];
      for (NodeId n : t.visible_nodes()) {
        if (color_of.at(n) != cg.colors[i]) sees_opposite = true;
      }
      CHECK(sees_opposite);
    }
  }
}

TEST_CASE("replaying the emitted diffs reproduces the converged tables") {
  const auto f = fixtures::propagation12();
  EngineOptions opt;
  opt.record_diffs = true;
  LevelEngine engine = converged12(f, opt);

  std::map<NodeId, RoutingTable> replay;
  auto ids = f.net.node_ids();
  std::sort(ids.begin(), ids.end());
  AdjacencyIndex idx(ids, f.net.links);
  for (size_t i = 0; i < ids.size(); ++i) {
    std::vector<NodeId> nbrs;
    for (int32_t v : idx.adj[i]) nbrs.push_back(ids[v]);
    replay.emplace(ids[i], RoutingTable(ids[i], LevelRef{}, nbrs));
  }
  for (const DiffLogEntry& e : engine.diff_log()) {
    replay.at(e.to).apply_update(TableUpdate{e.from, e.add, e.remove});
  }
  for (NodeId n : ids) {
    const RoutingTable t = engine.table(n, LevelRef{});
    CHECK(replay.at(n).records_by_sender() == t.records_by_sender());
    CHECK(replay.at(n).connected() == t.connected());
  }
}

TEST_CASE("chain purge removes the record at every downstream holder") {
  // 1--2--3--4--5--6, only the far end black: edge knowledge travels the
  // whole chain, so every inner break exercises the removal cascade.
  std::vector<NodeId> ids;
  for (uint64_t k = 1; k <= 5; ++k) ids.push_back(NodeId(5, k));
  ids.push_back(NodeId(5, 16 + 6));  // black
  std::vector<Link> links;
  for (size_t k = 0; k + 1 < ids.size(); ++k) links.push_back(make_link(ids[k], ids[k + 1]));

  for (size_t broken = 0; broken + 1 < ids.size(); ++broken) {
    LevelEngine engine(ids, links, 0);
    engine.run_to_fixed_point();
    const Link gone = make_link(ids[broken], ids[broken + 1]);
    engine.remove_link(gone.first, gone.second);
    engine.run_to_fixed_point();
    for (NodeId n : ids) {
      const RoutingTable t = engine.table(n, LevelRef{});
      for (const auto& [from, bucket] : t.records_by_sender()) {
        for (const EdgeRecord& r : bucket) {
          CHECK(r.edge != gone);
          CHECK(!r.path_contains_link(gone));
          // the hidden hops of the custody chain are clean too
          CHECK(make_link(r.path.back(), from) != gone);
          CHECK(make_link(from, n) != gone);
        }
      }
    }
  }
}

TEST_CASE("static convergence grows tables monotonically") {
  // With a fixed link set no removal should ever be delivered.
  Rng rng(909);
  for (int trial = 0; trial < 30; ++trial) {
    const RandomColored g = random_colored_graph(rng, 32);
    LevelEngine engine(g.ids, g.links, g.colors);
    engine.run_to_fixed_point();
    CHECK(engine.stats().removals_delivered == 0);
  }
}
