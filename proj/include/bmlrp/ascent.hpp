#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bmlrp/propagation.hpp"

namespace bmlrp {

// Which node a long-range qualifying path connects to: the path's terminal
// node, or the partner produced by the XOR argmin over the corridor's
// same-color endpoints.
enum class ConnectTarget : uint8_t { kPathEnd, kXorPartner };

// Recursive split of a same-color node set by successive address bits below
// the level's color bit. At every split the XOR-closest cross pair is
// connected and the recursion descends into the caller's side; a split where
// every node agrees on the bit just moves to the next one. Returns the
// targets recorded for `self`.
std::vector<NodeId> connect_inside(NodeId self, const std::vector<NodeId>& nodes,
                                   uint16_t level_depth);

// One node's input to the connection selection: its visible level graph,
// per-node colors, and its own direct neighbors.
struct SelectionView {
  ColoredGraph g;
  int32_t self = -1;
  std::vector<int32_t> connected;  // indices into g, sorted
  uint16_t level_depth = 0;
};

SelectionView selection_view_from_table(const RoutingTable& table);

struct Selection {
  NodeId target;
  std::vector<NodeId> via;  // justifying path at the current level, self..target

  auto operator<=>(const Selection&) const = default;
};

// All next-level neighbors the node must connect to: same-color direct
// neighbors, the connect_inside targets across every opposite-color
// neighbor's same-color adjacency, and the terminals of qualifying
// opposite-color corridors. extra_k additional nearest same-color visible
// nodes can be requested on top.
std::vector<Selection> select_connections(const SelectionView& view, ConnectTarget mode,
                                          int extra_k = 0);

struct BuildOptions {
  ConnectTarget connect_target = ConnectTarget::kPathEnd;
  int extra_k = 0;
  uint16_t max_depth = 0;  // 0 = until singleton
  EngineOptions engine;
};

// One level network of the recursive structure: members, the level's links
// with their parent-level realization paths, and every member's converged
// routing table.
struct LevelNet {
  LevelRef ref;
  std::vector<NodeId> members;
  std::vector<Link> links;
  std::map<Link, std::vector<NodeId>> realizations;  // parent-level path u..v
  std::map<NodeId, RoutingTable> tables;
  int rounds = 0;

  double average_degree() const;
};

struct MultiLevelNetwork {
  PhysicalNetwork physical;
  std::map<LevelRef, LevelNet> levels;
  BuildOptions options;

  const LevelNet& level(LevelRef ref) const;
  bool has_level(LevelRef ref) const { return levels.count(ref) != 0; }
  uint16_t width() const { return physical.width_bits; }
};

// Converges every level with the propagation engine, selects next-level
// neighbors at every member, symmetrizes the selections into links with
// recorded realization paths, splits by the next address bit and recurses
// until the member sets are singletons. Requires a connected input.
MultiLevelNetwork build_multilevel(const PhysicalNetwork& physical, BuildOptions opts = {});

}  // namespace bmlrp
