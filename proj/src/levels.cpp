#include "bmlrp/levels.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <stdexcept>

namespace bmlrp {

LevelRef LevelRef::of(NodeId id, uint16_t depth) {
  if (depth > id.width) throw std::invalid_argument("level depth exceeds id width");
  return LevelRef{depth == 0 ? 0 : id.value >> (id.width - depth), depth};
}

bool LevelRef::contains(NodeId id) const {
  if (depth > id.width) return false;
  return LevelRef::of(id, depth).prefix == prefix;
}

LevelRef LevelRef::child(int bit) const {
  return LevelRef{(prefix << 1) | static_cast<uint64_t>(bit & 1), static_cast<uint16_t>(depth + 1)};
}

std::string LevelRef::to_string() const {
  if (depth == 0) return "(root)";
  std::string s(depth, '0');
  for (uint16_t i = 0; i < depth; ++i) {
    if ((prefix >> (depth - 1 - i)) & 1ull) s[i] = '1';
  }
  return s;
}

std::vector<NodeId> level_members(const std::vector<NodeId>& nodes, LevelRef ref) {
  std::vector<NodeId> out;
  for (NodeId n : nodes) {
    if (ref.contains(n)) out.push_back(n);
  }
  return out;
}

std::vector<NodeId> EdgeRecord::wire_path(NodeId learned_from) const {
  std::vector<NodeId> w = path;
  w.push_back(learned_from);
  return w;
}

bool EdgeRecord::path_contains_link(const Link& l) const {
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    if (make_link(path[i], path[i + 1]) == l) return true;
  }
  return false;
}

RoutingTable::RoutingTable(NodeId owner_, LevelRef level_, std::vector<NodeId> connected)
    : owner(owner_), level(level_), connected_(std::move(connected)) {
  std::sort(connected_.begin(), connected_.end());
  connected_.erase(std::unique(connected_.begin(), connected_.end()), connected_.end());
}

RoutingTable RoutingTable::from_visible(NodeId owner, LevelRef level, std::vector<NodeId> connected,
                                        const std::vector<Link>& visible_edges) {
  RoutingTable t(owner, level, std::move(connected));
  if (t.connected_.empty()) {
    if (!visible_edges.empty()) throw std::invalid_argument("visible edges without any neighbor");
    return t;
  }
  const NodeId carrier = t.connected_.front();
  for (const Link& e : visible_edges) {
    if (e.first == owner || e.second == owner) continue;  // direct links are adjacency
    t.records_[carrier].insert(EdgeRecord{e, {e.first, e.second}});
  }
  return t;
}

bool RoutingTable::is_connected_to(NodeId n) const {
  return std::binary_search(connected_.begin(), connected_.end(), n);
}

void RoutingTable::connect(NodeId n) {
  auto it = std::lower_bound(connected_.begin(), connected_.end(), n);
  if (it == connected_.end() || *it != n) connected_.insert(it, n);
}

void RoutingTable::apply_update(const TableUpdate& update) {
  if (!is_connected_to(update.from)) {
    throw std::invalid_argument("update from a node that is not a connected neighbor");
  }
  for (const EdgeRecord& r : update.add) {
    for (const EdgeRecord& q : update.remove) {
      if (q == r) throw std::invalid_argument("update adds and removes the same record");
    }
  }
  auto& bucket = records_[update.from];
  for (const EdgeRecord& r : update.remove) {
    if (bucket.erase(r) == 0) ++ignored_removals_;
  }
  for (const EdgeRecord& r : update.add) bucket.insert(r);
  if (bucket.empty()) records_.erase(update.from);
}

PurgeResult RoutingTable::purge_stale(const Link& broken) {
  PurgeResult res;
  if (broken.first == owner || broken.second == owner) {
    const NodeId gone = broken.first == owner ? broken.second : broken.first;
    auto it = std::lower_bound(connected_.begin(), connected_.end(), gone);
    if (it != connected_.end() && *it == gone) {
      connected_.erase(it);
      res.dropped_neighbor = gone;
    }
    auto rec = records_.find(gone);
    if (rec != records_.end()) {
      for (const EdgeRecord& r : rec->second) res.removed.emplace_back(gone, r);
      records_.erase(rec);
    }
  }
  for (auto it = records_.begin(); it != records_.end();) {
    auto& bucket = it->second;
    for (auto rit = bucket.begin(); rit != bucket.end();) {
      if (rit->edge == broken || rit->path_contains_link(broken)) {
        res.removed.emplace_back(it->first, *rit);
        rit = bucket.erase(rit);
      } else {
        ++rit;
      }
    }
    it = bucket.empty() ? records_.erase(it) : std::next(it);
  }
  return res;
}

std::vector<Link> RoutingTable::visible_edges() const {
  std::set<Link> out;
  for (NodeId n : connected_) out.insert(make_link(owner, n));
  for (const auto& [from, bucket] : records_) {
    for (const EdgeRecord& r : bucket) out.insert(r.edge);
  }
  return {out.begin(), out.end()};
}

std::vector<NodeId> RoutingTable::visible_nodes() const {
  std::set<NodeId> out;
  out.insert(owner);
  for (NodeId n : connected_) out.insert(n);
  for (const auto& [from, bucket] : records_) {
    for (const EdgeRecord& r : bucket) {
      out.insert(r.edge.first);
      out.insert(r.edge.second);
      out.insert(r.path.begin(), r.path.end());
    }
  }
  return {out.begin(), out.end()};
}

void RoutingTable::dump(std::ostream& out) const {
  out << "# owner " << owner.to_binary() << "\n# level " << level.to_string() << "\n# neighbors";
  for (NodeId n : connected_) out << ' ' << n.to_binary();
  out << '\n';
  std::set<EdgeRecord> all;
  for (const auto& [from, bucket] : records_) all.insert(bucket.begin(), bucket.end());
  for (const EdgeRecord& r : all) {
    out << "edge=" << r.edge.first.to_binary() << '-' << r.edge.second.to_binary() << " path=";
    for (size_t i = 0; i < r.path.size(); ++i) {
      if (i) out << ',';
      out << r.path[i].to_binary();
    }
    out << '\n';
  }
}

}  // namespace bmlrp
