#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bmlrp/ascent.hpp"
#include "bmlrp/propagation.hpp"
#include "bmlrp/router.hpp"

namespace bmlrp::oracle {

// Exponential-but-tiny reference implementations. They enumerate
// exhaustively and apply the selection conditions literally, with no
// pruning, and exist only to check the production path on small instances.
constexpr size_t kMaxGOutNodes = 16;
constexpr size_t kMaxSelectNodes = 12;

// Same contract as compute_g_out, via full simple-path enumeration and
// all-pairs BFS distances.
GOut brute_g_out(const NeighborGraph& ng);

int bfs_distance(const std::vector<std::vector<int32_t>>& adj, int32_t u, int32_t v);  // -1 apart
std::vector<int> bfs_all(const std::vector<std::vector<int32_t>>& adj, int32_t src);

// Exact connected components, each sorted, ordered by smallest member.
std::vector<std::vector<int32_t>> brute_connectivity(
    const std::vector<std::vector<int32_t>>& adj);

bool is_connected(const std::vector<NodeId>& members, const std::vector<Link>& links);

// Same contract as select_connections (targets only), via literal
// enumeration under identical tie-breaks and target switch.
std::vector<NodeId> reference_select_connections(const SelectionView& view, ConnectTarget mode);

}  // namespace bmlrp::oracle

namespace bmlrp::fixtures {

// The committed example networks. Node labels follow the drawings the
// networks come from; addresses are the committed assignment.

struct LabeledNetwork {
  PhysicalNetwork net;
  std::map<int, NodeId> label_to_id;

  NodeId id(int label) const { return label_to_id.at(label); }
};

// 16-node 4x4 grid of 5-bit addresses used by the routing walkthrough.
LabeledNetwork grid16();
// Its drawn overlay adjacency per level and the known-graph tables of the
// three routing nodes, assembled into a routable structure.
MultiLevelNetwork grid16_multilevel();

// 12-node propagation example: 9 white nodes, 3 black, 15 links.
LabeledNetwork propagation12();

// 16-node connection example: 5 white hubs, 11 black leaves. The committed
// address assignment reproduces the expected next-level links below.
LabeledNetwork hubs16();
// Expected black-side next-level links (by label), 10 edges.
std::vector<std::pair<int, int>> hubs16_expected_black_links();

}  // namespace bmlrp::fixtures
