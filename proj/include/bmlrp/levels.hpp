#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bmlrp/idspace.hpp"
#include "bmlrp/topology.hpp"

namespace bmlrp {

// A level network is addressed by its bit prefix. Depth 0 with an empty
// prefix is the physical network.
struct LevelRef {
  uint64_t prefix = 0;  // value of the depth most significant bits
  uint16_t depth = 0;

  auto operator<=>(const LevelRef&) const = default;

  static LevelRef of(NodeId id, uint16_t depth);
  bool contains(NodeId id) const;
  LevelRef child(int bit) const;
  std::string to_string() const;  // "(root)" at depth 0
};

std::vector<NodeId> level_members(const std::vector<NodeId>& nodes, LevelRef ref);

// Knowledge of one level link together with the node sequence through which
// that knowledge traveled. The stored path starts with the two endpoints of
// the edge (first the far endpoint, then the one the transmission started
// from), or with the far endpoint alone when the sending neighbor is itself
// incident to the edge. The table owner never appears in a stored path.
struct EdgeRecord {
  Link edge;
  std::vector<NodeId> path;

  auto operator<=>(const EdgeRecord&) const = default;

  // Path a node attaches when forwarding this record on: the stored path
  // plus the neighbor it was learned from.
  std::vector<NodeId> wire_path(NodeId learned_from) const;
  bool path_contains_link(const Link& l) const;
};

// One propagation message: the record-set difference a neighbor announced.
struct TableUpdate {
  NodeId from;
  std::vector<EdgeRecord> add;
  std::vector<EdgeRecord> remove;
};

struct PurgeResult {
  std::optional<NodeId> dropped_neighbor;
  std::vector<std::pair<NodeId, EdgeRecord>> removed;  // (learned_from, record)
};

// One node's view of one level: connected neighbors (the node's own level
// links), plus edge records grouped by the neighbor they were learned from.
// An edge is visible iff some record mentions it or it is a direct link.
class RoutingTable {
 public:
  NodeId owner;
  LevelRef level;

  RoutingTable() = default;
  RoutingTable(NodeId owner, LevelRef level, std::vector<NodeId> connected);

  // Fixture/test helper: a table whose records are synthesized from a plain
  // visible-edge list.
  static RoutingTable from_visible(NodeId owner, LevelRef level, std::vector<NodeId> connected,
                                   const std::vector<Link>& visible_edges);

  const std::vector<NodeId>& connected() const { return connected_; }
  const std::map<NodeId, std::set<EdgeRecord>>& records_by_sender() const { return records_; }

  bool is_connected_to(NodeId n) const;
  void connect(NodeId n);

  // Set-union/difference merge. Removing an absent record is ignored and
  // counted; adding a present one likewise.
  void apply_update(const TableUpdate& update);
  uint64_t ignored_removals() const { return ignored_removals_; }

  // Drops every record invalidated by the broken link: records of the edge
  // itself, records whose stored path crosses it, and, when the owner is an
  // endpoint, the disconnected neighbor with everything learned from it.
  PurgeResult purge_stale(const Link& broken);

  std::vector<Link> visible_edges() const;
  std::vector<NodeId> visible_nodes() const;

  // Debug dump, one record per line: edge=<id>-<id> path=<id>,<id>,...
  void dump(std::ostream& out) const;

 private:
  std::vector<NodeId> connected_;
  std::map<NodeId, std::set<EdgeRecord>> records_;
  uint64_t ignored_removals_ = 0;
};

}  // namespace bmlrp
