#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bmlrp/idspace.hpp"

namespace bmlrp {

using Link = std::pair<NodeId, NodeId>;

inline Link make_link(NodeId a, NodeId b) { return a < b ? Link{a, b} : Link{b, a}; }

struct NodeSite {
  NodeId id;
  double x = 0;
  double y = 0;

  bool operator==(const NodeSite&) const = default;
};

// Level-0 graph: nodes with plane coordinates and undirected links. Links are
// stored normalized (smaller id first) and sorted, so two structurally equal
// networks compare equal member-wise.
struct PhysicalNetwork {
  uint16_t width_bits = 0;
  std::vector<NodeSite> nodes;
  std::vector<Link> links;

  bool operator==(const PhysicalNetwork&) const = default;

  void normalize_links();
  bool has_node(NodeId id) const;
  std::vector<NodeId> node_ids() const;
};

struct GenConfig {
  uint64_t node_count = 1024;
  uint16_t width_bits = 16;
  double area_side = 1000.0;
  double radius = 0.0;  // 0 = default_radius(node_count, area_side)
  double random_link_fraction = 0.0;
  uint64_t seed = 1;
};

// Connectivity range giving an expected physical degree around
// kDefaultTargetDegree for node_count nodes in a square of the given side.
// Calibrated against a connected-component census over 100 seeds at 2^10
// nodes: degree 8 leaves 11/100 connected, 12 gives 75/100, 16 gives 97/100.
double default_radius(uint64_t node_count, double area_side);
constexpr double kDefaultTargetDegree = 16.0;

// N nodes placed independently uniformly in the square, identifiers drawn
// uniformly without replacement from the width-bit space, a link between
// every pair within Euclidean distance radius. Reproducible from cfg.seed.
PhysicalNetwork generate_geometric(const GenConfig& cfg);

// Picks floor(fraction * N) distinct nodes and pairs each with a uniformly
// random distinct partner regardless of coordinates. A drawn pair that
// already exists is re-drawn (bounded retries, then skipped).
PhysicalNetwork add_random_links(const PhysicalNetwork& net, double fraction, uint64_t seed);

// Subgraph induced by the largest connected component; ties go to the
// component containing the smallest NodeId.
PhysicalNetwork restrict_largest_component(const PhysicalNetwork& net);

// generate_geometric + add_random_links + optional largest-component
// restriction, the standard experiment pipeline.
PhysicalNetwork generate_network(const GenConfig& cfg, bool restrict_largest = true);

void save_network(const PhysicalNetwork& net, std::ostream& out);
void save_network(const PhysicalNetwork& net, const std::string& path);
PhysicalNetwork load_network(std::istream& in);
PhysicalNetwork load_network(const std::string& path);

// Adjacency over node indices, shared by several graph consumers.
struct AdjacencyIndex {
  std::vector<NodeId> ids;                // sorted
  std::vector<std::vector<int32_t>> adj;  // sorted neighbor indices

  explicit AdjacencyIndex(const PhysicalNetwork& net);
  AdjacencyIndex(std::vector<NodeId> sorted_ids, const std::vector<Link>& links);
  int32_t index_of(NodeId id) const;  // -1 when absent
};

}  // namespace bmlrp
