#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmlrp/levels.hpp"

namespace bmlrp {

// Graph with per-node colors over a dense index space. ids[] gives the
// index -> address mapping; indices are assigned in ascending id order.
struct ColoredGraph {
  std::vector<NodeId> ids;
  std::vector<Color> colors;
  std::vector<std::vector<int32_t>> adj;

  int32_t index_of(NodeId id) const;
  bool has_edge(int32_t u, int32_t v) const;
};

// The graph a node assembles for one connected neighbor: everything received
// from the other neighbors, its own direct links, and the link to that
// neighbor itself.
struct NeighborGraph {
  ColoredGraph g;
  int32_t center = -1;    // the assembling node
  int32_t excluded = -1;  // the neighbor the subset is for
};

// Qualifying paths plus the node/edge subset forwarded to the excluded
// neighbor (which never includes that neighbor itself).
struct GOut {
  std::vector<std::vector<int32_t>> paths;  // each starts excluded, center, ...
  std::vector<int32_t> nodes;               // sorted
  std::vector<std::pair<int32_t, int32_t>> edges;  // normalized, sorted
  uint64_t truncated = 0;  // viable paths dropped by the interior cap
};

// Enumerates every simple path excluded--center--c1--...--ck--d of the
// neighbor graph in which d has the color opposite to the center, every c
// shares the center's color, and no opposite-color node sits strictly closer
// to some c (hop distance in the whole neighbor graph) than both that c's
// along-path distance to d and to the excluded neighbor. k = 0 paths always
// qualify. The union of path nodes and edges, minus the excluded neighbor,
// is the forwarded subset.
GOut compute_g_out(const NeighborGraph& ng, int max_interior = 32, bool collect_paths = true);

std::vector<std::vector<NodeId>> paths_to_ids(const std::vector<std::vector<int32_t>>& paths,
                                              const ColoredGraph& g);
std::vector<Link> edges_to_ids(const std::vector<std::pair<int32_t, int32_t>>& edges,
                               const ColoredGraph& g);

struct EngineOptions {
  bool parallel = true;
  int max_interior = 32;
  int max_rounds_factor = 4;
  bool record_diffs = false;
};

struct EngineStats {
  int rounds = 0;
  uint64_t records_delivered = 0;
  uint64_t removals_delivered = 0;
  uint64_t unsendable_edges = 0;
  uint64_t truncated_paths = 0;
};

struct DiffLogEntry {
  int round = 0;
  NodeId from, to;
  std::vector<EdgeRecord> add, remove;
};

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Synchronous-round fixed point driver for one level network. Each round
// every node whose inputs changed recomputes the per-neighbor subsets from
// its current table and the engine delivers the set differences. A round
// with no deliveries is the fixed point. Per-round computations for
// distinct nodes are independent; with the parallel option they fan out
// across OpenMP workers and results are merged in index order, so the
// outcome does not depend on the worker count.
class LevelEngine {
 public:
  LevelEngine(const std::vector<NodeId>& members, const std::vector<Link>& links,
              const std::vector<Color>& colors, EngineOptions opt = {});
  // Colors taken from the members' address bit at color_bit.
  LevelEngine(const std::vector<NodeId>& members, const std::vector<Link>& links,
              uint16_t color_bit, EngineOptions opt = {});

  // Runs rounds until nothing changes; returns the rounds executed by this
  // call. Throws NonConvergence past max_rounds_factor * member count.
  int run_to_fixed_point();

  // Severs a level link: both endpoints drop the adjacency and everything
  // learned from the lost neighbor. Propagation of the loss happens on the
  // next run_to_fixed_point().
  void remove_link(NodeId u, NodeId v);

  size_t member_count() const { return base_.ids.size(); }
  const ColoredGraph& graph() const { return base_; }
  const EngineStats& stats() const { return stats_; }
  const std::vector<DiffLogEntry>& diff_log() const { return diff_log_; }

  RoutingTable table(NodeId member, LevelRef ref) const;
  std::vector<RoutingTable> tables(LevelRef ref) const;

  // Merged per-node view used by connection selection and routing: visible
  // edges in engine index space, plus the node's direct neighbors.
  struct VisibleGraph {
    int32_t self = -1;
    std::vector<int32_t> neighbors;
    std::vector<std::pair<int32_t, int32_t>> edges;  // includes direct links
  };
  VisibleGraph visible(int32_t node) const;

  NeighborGraph build_neighbor_graph(NodeId a, NodeId b) const;

 private:
  struct Rec {
    std::pair<int32_t, int32_t> edge;
    std::vector<int32_t> path;
    auto operator<=>(const Rec&) const = default;
  };
  struct WireLess {
    bool operator()(const std::vector<int32_t>& a, const std::vector<int32_t>& b) const {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    }
  };
  struct NodeState {
    std::vector<int32_t> nbrs;
    std::map<int32_t, std::set<Rec>> from;
    std::map<std::pair<int32_t, int32_t>, std::map<int32_t, int>> edge_senders;
    std::map<std::pair<int32_t, int32_t>, std::set<std::vector<int32_t>, WireLess>> edge_wires;
    bool structural_change = true;
    std::vector<int32_t> changed_senders;
  };
  struct Msg {
    int32_t to = -1;
    std::vector<Rec> add, remove;
  };
  struct KernelCounts {
    uint64_t unsendable = 0;
    uint64_t truncated = 0;
  };

  void init(const std::vector<NodeId>& members, const std::vector<Link>& links,
            const std::vector<Color>& colors);
  NeighborGraph assemble(int32_t a, int32_t b, std::vector<int32_t>& local_to_global) const;
  void compute_node_msgs(int32_t a, std::vector<Msg>& out, KernelCounts& counts) const;
  void add_record(NodeState& st, int32_t sender, const Rec& r);
  void remove_record(NodeState& st, int32_t sender, const Rec& r);
  void drop_sender(NodeState& st, int32_t sender);
  bool round();

  ColoredGraph base_;
  std::vector<NodeState> ns_;
  EngineOptions opt_;
  EngineStats stats_;
  std::vector<DiffLogEntry> diff_log_;
};

}  // namespace bmlrp
