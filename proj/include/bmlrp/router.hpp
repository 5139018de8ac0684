#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bmlrp/ascent.hpp"

namespace bmlrp {

struct RoutingError : std::runtime_error {
  explicit RoutingError(const std::string& what) : std::runtime_error(what) {}
};

// The chosen hop failed to lengthen the common prefix with the destination.
struct LoopViolation : RoutingError {
  explicit LoopViolation(const std::string& what) : RoutingError(what) {}
};

struct RouteResult {
  std::vector<NodeId> logical_hops;    // source, each prefix-improving hop, destination
  std::vector<NodeId> physical_path;   // level-0 node sequence, source..destination
  size_t hop_count = 0;                // physical links traversed
  std::vector<uint16_t> levels_used;   // level depth of each logical step
};

// Greedy choice of the next prefix-improving hop. The destination itself is
// taken whenever it is visible and reachable; otherwise the reachable
// candidate closest by table hop distance wins, ties by XOR distance to the
// destination, then by id.
NodeId next_hop(NodeId x, NodeId d, const RoutingTable& table);

// Physical node sequence realizing one level link, by recursively replacing
// every realization hop with its own realization down to level 0.
std::vector<NodeId> expand_link(const MultiLevelNetwork& net, LevelRef level, NodeId u, NodeId v);

// Repeats next_hop at level l(current, destination), walks the intra-level
// shortest table path to the chosen hop expanding every link, until the
// destination is reached.
RouteResult route(const MultiLevelNetwork& net, NodeId s, NodeId d);

struct StretchSample {
  NodeId src, dst;
  size_t hops = 0;
  int bfs = 0;
  double stretch = 1.0;
};

struct StretchStats {
  std::vector<StretchSample> samples;
  double mean_stretch = 0;
  double median_stretch = 0;
  double p95_stretch = 0;
  double mean_hops = 0;
};

// Routes uniformly sampled distinct pairs and divides the physical hop count
// by the BFS shortest-path length over the physical graph.
StretchStats measure_stretch(const MultiLevelNetwork& net, size_t sample_count, uint64_t seed,
                             bool parallel = true);

}  // namespace bmlrp
