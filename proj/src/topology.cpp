#include "bmlrp/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "bmlrp/rng.hpp"

namespace bmlrp {

namespace {

struct LinkHash {
  size_t operator()(const Link& l) const noexcept {
    return std::hash<NodeId>{}(l.first) * 1315423911u ^ std::hash<NodeId>{}(l.second);
  }
};

[[noreturn]] void parse_fail(size_t line_no, const std::string& what) {
  throw std::runtime_error("network file parse error at line " + std::to_string(line_no) + ": " +
                           what);
}

}  // namespace

void PhysicalNetwork::normalize_links() {
  for (auto& l : links) l = make_link(l.first, l.second);
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
}

bool PhysicalNetwork::has_node(NodeId id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return true;
  }
  return false;
}

std::vector<NodeId> PhysicalNetwork::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.id);
  return out;
}

double default_radius(uint64_t node_count, double area_side) {
  return area_side * std::sqrt(kDefaultTargetDegree / (std::numbers::pi * static_cast<double>(node_count)));
}

PhysicalNetwork generate_geometric(const GenConfig& cfg) {
  if (cfg.node_count == 0) throw std::invalid_argument("node_count must be positive");
  if (cfg.width_bits == 0 || cfg.width_bits > 64) {
    throw std::invalid_argument("width_bits must be in [1, 64]");
  }
  if (cfg.width_bits < 64 && (1ull << cfg.width_bits) < cfg.node_count) {
    throw std::invalid_argument("identifier space 2^" + std::to_string(cfg.width_bits) +
                                " smaller than node count");
  }
  if (cfg.area_side <= 0) throw std::invalid_argument("area_side must be positive");
  const double radius = cfg.radius > 0 ? cfg.radius : default_radius(cfg.node_count, cfg.area_side);

  Rng master(cfg.seed);
  Rng place = master.substream(rng_tag::kPlacement);
  Rng ids = master.substream(rng_tag::kNodeIds);

  PhysicalNetwork net;
  net.width_bits = cfg.width_bits;
  net.nodes.reserve(cfg.node_count);

  std::unordered_set<uint64_t> used;
  used.reserve(cfg.node_count * 2);
  for (uint64_t k = 0; k < cfg.node_count; ++k) {
    const double x = place.next_double() * cfg.area_side;
    const double y = place.next_double() * cfg.area_side;
    uint64_t v;
    do {
      v = cfg.width_bits >= 64 ? ids.next() : ids.next_below(1ull << cfg.width_bits);
    } while (!used.insert(v).second);
    net.nodes.push_back({NodeId(cfg.width_bits, v), x, y});
  }

  // Cell grid of side = radius; all candidate pairs live in the 3x3
  // neighborhood. Emitted links are normalized afterwards, so the cell
  // traversal order does not matter.
  const int cells = std::max(1, static_cast<int>(cfg.area_side / radius));
  const double cell_side = cfg.area_side / cells;
  std::unordered_map<int64_t, std::vector<int32_t>> grid;
  auto cell_key = [&](double x, double y) {
    int cx = std::min(cells - 1, std::max(0, static_cast<int>(x / cell_side)));
    int cy = std::min(cells - 1, std::max(0, static_cast<int>(y / cell_side)));
    return static_cast<int64_t>(cx) * (cells + 1) + cy;
  };
  for (int32_t i = 0; i < static_cast<int32_t>(net.nodes.size()); ++i) {
    grid[cell_key(net.nodes[i].x, net.nodes[i].y)].push_back(i);
  }
  const double r2 = radius * radius;
  for (int32_t i = 0; i < static_cast<int32_t>(net.nodes.size()); ++i) {
    const auto& a = net.nodes[i];
    const int cx = std::min(cells - 1, std::max(0, static_cast<int>(a.x / cell_side)));
    const int cy = std::min(cells - 1, std::max(0, static_cast<int>(a.y / cell_side)));
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const int nx = cx + dx, ny = cy + dy;
        if (nx < 0 || ny < 0 || nx >= cells || ny >= cells) continue;
        auto it = grid.find(static_cast<int64_t>(nx) * (cells + 1) + ny);
        if (it == grid.end()) continue;
        for (int32_t j : it->second) {
          if (j <= i) continue;
          const auto& b = net.nodes[j];
          const double ddx = a.x - b.x, ddy = a.y - b.y;
          if (ddx * ddx + ddy * ddy <= r2) net.links.push_back(make_link(a.id, b.id));
        }
      }
    }
  }
  net.normalize_links();
  return net;
}

PhysicalNetwork add_random_links(const PhysicalNetwork& net, double fraction, uint64_t seed) {
  if (fraction < 0 || fraction > 1) throw std::invalid_argument("fraction must be in [0, 1]");
  PhysicalNetwork out = net;
  const uint64_t n = net.nodes.size();
  const uint64_t count = static_cast<uint64_t>(fraction * static_cast<double>(n));
  if (count == 0 || n < 2) return out;

  Rng rng = Rng(seed).substream(rng_tag::kLongRange);

  std::unordered_set<Link, LinkHash> existing(net.links.begin(), net.links.end());

  // Partial Fisher-Yates selects the long-range sources without replacement.
  std::vector<uint64_t> order(n);
  for (uint64_t i = 0; i < n; ++i) order[i] = i;
  for (uint64_t i = 0; i < count; ++i) {
    const uint64_t j = i + rng.next_below(n - i);
    std::swap(order[i], order[j]);
  }

  constexpr int kMaxRetries = 64;
  for (uint64_t i = 0; i < count; ++i) {
    const NodeId src = net.nodes[order[i]].id;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
      const uint64_t pick = rng.next_below(n - 1);
      const uint64_t idx = pick < order[i] ? pick : pick + 1;
      const Link l = make_link(src, net.nodes[idx].id);
      if (existing.insert(l).second) {
        out.links.push_back(l);
        break;
      }
    }
  }
  out.normalize_links();
  return out;
}

AdjacencyIndex::AdjacencyIndex(std::vector<NodeId> sorted_ids, const std::vector<Link>& links)
    : ids(std::move(sorted_ids)) {
  adj.resize(ids.size());
  for (const auto& l : links) {
    const int32_t u = index_of(l.first), v = index_of(l.second);
    if (u < 0 || v < 0) throw std::invalid_argument("link endpoint not in node set");
    if (u == v) throw std::invalid_argument("self-link");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
}

AdjacencyIndex::AdjacencyIndex(const PhysicalNetwork& net)
    : AdjacencyIndex(
          [&] {
            auto v = net.node_ids();
            std::sort(v.begin(), v.end());
            return v;
          }(),
          net.links) {}

int32_t AdjacencyIndex::index_of(NodeId id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return -1;
  return static_cast<int32_t>(it - ids.begin());
}

PhysicalNetwork restrict_largest_component(const PhysicalNetwork& net) {
  if (net.nodes.empty()) throw std::invalid_argument("empty network");
  AdjacencyIndex g(net);
  std::vector<int32_t> comp(g.ids.size(), -1);
  int32_t ncomp = 0;
  std::vector<int32_t> stack;
  for (int32_t s = 0; s < static_cast<int32_t>(g.ids.size()); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = ncomp;
    stack.push_back(s);
    while (!stack.empty()) {
      const int32_t u = stack.back();
      stack.pop_back();
      for (int32_t v : g.adj[u]) {
        if (comp[v] < 0) {
          comp[v] = ncomp;
          stack.push_back(v);
        }
      }
    }
    ++ncomp;
  }
  std::vector<size_t> size(ncomp, 0);
  for (int32_t c : comp) ++size[c];
  // Largest component; ties go to the component holding the smallest id.
  // g.ids is sorted, so scanning nodes in order visits each component first
  // at its smallest member.
  int32_t best = comp[0];
  for (int32_t i = 1; i < static_cast<int32_t>(comp.size()); ++i) {
    if (size[comp[i]] > size[best]) best = comp[i];
  }

  std::unordered_set<uint64_t> keep;
  for (size_t i = 0; i < comp.size(); ++i) {
    if (comp[i] == best) keep.insert(g.ids[i].value);
  }
  PhysicalNetwork out;
  out.width_bits = net.width_bits;
  for (const auto& n : net.nodes) {
    if (keep.count(n.id.value)) out.nodes.push_back(n);
  }
  for (const auto& l : net.links) {
    if (keep.count(l.first.value) && keep.count(l.second.value)) out.links.push_back(l);
  }
  out.normalize_links();
  return out;
}

PhysicalNetwork generate_network(const GenConfig& cfg, bool restrict_largest) {
  PhysicalNetwork net = generate_geometric(cfg);
  if (cfg.random_link_fraction > 0) {
    net = add_random_links(net, cfg.random_link_fraction, cfg.seed);
  }
  return restrict_largest ? restrict_largest_component(net) : net;
}

void save_network(const PhysicalNetwork& net, std::ostream& out) {
  out << "bmlrp-net v1 " << net.nodes.size() << ' ' << net.width_bits << '\n';
  char buf[64];
  for (const auto& n : net.nodes) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g", n.x, n.y);
    out << n.id.to_binary() << ' ' << buf << '\n';
  }
  out << "#links\n";
  for (const auto& l : net.links) {
    out << l.first.to_binary() << ' ' << l.second.to_binary() << '\n';
  }
}

void save_network(const PhysicalNetwork& net, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  save_network(net, f);
}

PhysicalNetwork load_network(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) parse_fail(1, "missing header");
  ++line_no;
  std::istringstream hdr(line);
  std::string magic, version;
  size_t n = 0;
  int width = 0;
  if (!(hdr >> magic >> version >> n >> width) || magic != "bmlrp-net" || version != "v1") {
    parse_fail(line_no, "bad header, expected 'bmlrp-net v1 <N> <n_bits>'");
  }
  if (width <= 0 || width > 64) parse_fail(line_no, "bad width");

  PhysicalNetwork net;
  net.width_bits = static_cast<uint16_t>(width);
  net.nodes.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) parse_fail(line_no + 1, "unexpected end of file in node list");
    ++line_no;
    std::istringstream ls(line);
    std::string bits;
    double x, y;
    if (!(ls >> bits >> x >> y)) parse_fail(line_no, "bad node line");
    if (bits.size() != static_cast<size_t>(width)) parse_fail(line_no, "id width mismatch");
    NodeId id;
    try {
      id = NodeId::parse_binary(bits);
    } catch (const std::exception& e) {
      parse_fail(line_no, e.what());
    }
    net.nodes.push_back({id, x, y});
  }
  if (!std::getline(in, line)) parse_fail(line_no + 1, "missing '#links'");
  ++line_no;
  if (line != "#links") parse_fail(line_no, "expected '#links'");
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a >> b)) parse_fail(line_no, "bad link line");
    NodeId ia, ib;
    try {
      ia = NodeId::parse_binary(a);
      ib = NodeId::parse_binary(b);
    } catch (const std::exception& e) {
      parse_fail(line_no, e.what());
    }
    if (!net.has_node(ia) || !net.has_node(ib)) parse_fail(line_no, "link references unknown node");
    if (ia == ib) parse_fail(line_no, "self-link");
    net.links.push_back(make_link(ia, ib));
  }
  net.normalize_links();
  return net;
}

PhysicalNetwork load_network(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return load_network(f);
}

}  // namespace bmlrp
