#include <algorithm>
#include <array>

#include "bmlrp/oracle.hpp"

namespace bmlrp::fixtures {

namespace {

LabeledNetwork build(uint16_t width, const std::vector<std::pair<int, std::string>>& nodes,
                     const std::vector<std::pair<double, double>>& coords,
                     const std::vector<std::pair<int, int>>& links) {
  LabeledNetwork f;
  f.net.width_bits = width;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const NodeId id = NodeId::parse_binary(nodes[i].second);
    f.label_to_id[nodes[i].first] = id;
    f.net.nodes.push_back({id, coords[i].first, coords[i].second});
  }
  for (auto [a, b] : links) f.net.links.push_back(make_link(f.id(a), f.id(b)));
  f.net.normalize_links();
  return f;
}

}  // namespace

LabeledNetwork grid16() {
  const std::vector<std::pair<int, std::string>> nodes = {
      {0, "11100"},  {1, "01100"},  {2, "10010"},  {3, "11001"},
      {4, "10001"},  {5, "11111"},  {6, "01010"},  {7, "00110"},
      {8, "10110"},  {9, "01011"},  {10, "11010"}, {11, "01001"},
      {12, "11011"}, {13, "11000"}, {14, "00111"}, {15, "01000"}};
  std::vector<std::pair<double, double>> coords;
  for (int k = 0; k < 16; ++k) coords.emplace_back(k % 4, k / 4);
  std::vector<std::pair<int, int>> links;
  for (int k = 0; k < 16; ++k) {
    if (k % 4 < 3) links.emplace_back(k, k + 1);
    if (k < 12) links.emplace_back(k, k + 4);
  }
  return build(5, nodes, coords, links);
}

MultiLevelNetwork grid16_multilevel() {
  const LabeledNetwork f = grid16();
  auto id = [&](const char* bits) { return NodeId::parse_binary(bits); };

  MultiLevelNetwork net;
  net.physical = f.net;

  auto links_of = [](const std::vector<std::pair<const char*, const char*>>& pairs) {
    std::vector<Link> out;
    for (auto [a, b] : pairs) {
      out.push_back(make_link(NodeId::parse_binary(a), NodeId::parse_binary(b)));
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  // Per-level adjacency as drawn. Later levels restrict the drawn graph to
  // the members of the prefix.
  const std::vector<Link> l1 = links_of({{"01100", "01010"},
                                         {"01100", "00110"},
                                         {"01100", "01011"},
                                         {"01010", "00110"},
                                         {"01010", "01011"},
                                         {"00110", "01001"},
                                         {"01011", "01001"},
                                         {"01011", "00111"},
                                         {"01001", "01000"},
                                         {"00111", "01000"}});
  const std::vector<Link> l2 = links_of({{"01100", "01010"},
                                         {"01100", "01011"},
                                         {"01010", "01011"},
                                         {"01011", "01001"},
                                         {"01001", "01000"}});
  const std::vector<Link> l3 = links_of({{"01010", "01011"},
                                         {"01010", "01001"},
                                         {"01011", "01001"},
                                         {"01011", "01000"},
                                         {"01001", "01000"}});

  auto adjacency_of = [](const std::vector<Link>& links, NodeId n) {
    std::vector<NodeId> out;
    for (const Link& l : links) {
      if (l.first == n) out.push_back(l.second);
      if (l.second == n) out.push_back(l.first);
    }
    return out;
  };

  auto default_tables = [&](LevelNet& ln) {
    for (NodeId m : ln.members) {
      if (!ln.tables.count(m)) {
        ln.tables.emplace(m, RoutingTable::from_visible(m, ln.ref, adjacency_of(ln.links, m), {}));
      }
    }
  };

  {  // level 0: the physical grid; the walkthrough source knows the bold subgraph
    LevelNet ln;
    ln.ref = LevelRef{};
    ln.members = f.net.node_ids();
    std::sort(ln.members.begin(), ln.members.end());
    ln.links = f.net.links;
    const std::vector<Link> bold = links_of({{"11100", "01100"},
                                             {"01100", "10010"},
                                             {"10001", "11111"},
                                             {"11111", "01010"},
                                             {"10110", "01011"},
                                             {"11100", "10001"},
                                             {"01100", "11111"},
                                             {"10001", "10110"},
                                             {"11111", "01011"}});
    ln.tables.emplace(id("11100"), RoutingTable::from_visible(id("11100"), ln.ref,
                                                              {id("01100"), id("10001")}, bold));
    default_tables(ln);
    net.levels.emplace(ln.ref, std::move(ln));
  }

  auto path_of = [&](std::initializer_list<const char*> hops) {
    std::vector<NodeId> p;
    for (const char* h : hops) p.push_back(id(h));
    return p;
  };

  {  // level 1, prefix 0
    LevelNet ln;
    ln.ref = LevelRef{0, 1};
    ln.members = {id("01100"), id("01010"), id("00110"), id("01011"),
                  id("01001"), id("00111"), id("01000")};
    std::sort(ln.members.begin(), ln.members.end());
    ln.links = l1;
    ln.realizations[make_link(id("01100"), id("01010"))] = path_of({"01100", "11111", "01010"});
    ln.realizations[make_link(id("01100"), id("00110"))] =
        path_of({"01100", "10010", "11001", "00110"});
    ln.realizations[make_link(id("01100"), id("01011"))] = path_of({"01100", "11111", "01011"});
    ln.realizations[make_link(id("01010"), id("00110"))] = path_of({"01010", "00110"});
    ln.realizations[make_link(id("01010"), id("01011"))] = path_of({"01010", "11111", "01011"});
    ln.realizations[make_link(id("00110"), id("01001"))] = path_of({"00110", "01001"});
    ln.realizations[make_link(id("01011"), id("01001"))] = path_of({"01011", "11010", "01001"});
    ln.realizations[make_link(id("01011"), id("00111"))] = path_of({"01011", "11000", "00111"});
    ln.realizations[make_link(id("01001"), id("01000"))] = path_of({"01001", "01000"});
    ln.realizations[make_link(id("00111"), id("01000"))] = path_of({"00111", "01000"});
    default_tables(ln);
    net.levels.emplace(ln.ref, std::move(ln));
  }
  {  // level 1, prefix 1: not part of the drawn walkthrough
    LevelNet ln;
    ln.ref = LevelRef{1, 1};
    for (const auto& n : f.net.nodes) {
      if (address_bit(n.id, 0) == 1) ln.members.push_back(n.id);
    }
    std::sort(ln.members.begin(), ln.members.end());
    default_tables(ln);
    net.levels.emplace(ln.ref, std::move(ln));
  }
  {  // level 2, prefix 01: the second routing step consults this view
    LevelNet ln;
    ln.ref = LevelRef{1, 2};
    ln.members = {id("01100"), id("01010"), id("01011"), id("01001"), id("01000")};
    std::sort(ln.members.begin(), ln.members.end());
    ln.links = l2;
    for (const Link& l : l2) ln.realizations[l] = {l.first, l.second};
    const std::vector<Link> known = links_of({{"01100", "01010"},
                                              {"01100", "01011"},
                                              {"01010", "01011"},
                                              {"01011", "01001"}});
    ln.tables.emplace(id("01100"), RoutingTable::from_visible(id("01100"), ln.ref,
                                                              {id("01010"), id("01011")}, known));
    default_tables(ln);
    net.levels.emplace(ln.ref, std::move(ln));
  }
  {  // level 2, prefix 00
    LevelNet ln;
    ln.ref = LevelRef{0, 2};
    ln.members = {id("00110"), id("00111")};
    std::sort(ln.members.begin(), ln.members.end());
    default_tables(ln);
    net.levels.emplace(ln.ref, std::move(ln));
  }
  {  // level 3, prefix 010
    LevelNet ln;
    ln.ref = LevelRef{2, 3};
    ln.members = {id("01010"), id("01011"), id("01001"), id("01000")};
    std::sort(ln.members.begin(), ln.members.end());
    ln.links = l3;
    ln.realizations[make_link(id("01010"), id("01011"))] = path_of({"01010", "01011"});
    ln.realizations[make_link(id("01010"), id("01001"))] =
        path_of({"01010", "01011", "01001"});
    ln.realizations[make_link(id("01011"), id("01001"))] = path_of({"01011", "01001"});
    ln.realizations[make_link(id("01011"), id("01000"))] =
        path_of({"01011", "01001", "01000"});
    ln.realizations[make_link(id("01001"), id("01000"))] = path_of({"01001", "01000"});
    const std::vector<Link> known = links_of({{"01010", "01011"},
                                              {"01010", "01001"},
                                              {"01011", "01001"},
                                              {"01011", "01000"}});
    ln.tables.emplace(id("01010"), RoutingTable::from_visible(id("01010"), ln.ref,
                                                              {id("01011"), id("01001")}, known));
    default_tables(ln);
    net.levels.emplace(ln.ref, std::move(ln));
  }
  {  // level 4, prefix 0100
    LevelNet ln;
    ln.ref = LevelRef{4, 4};
    ln.members = {id("01001"), id("01000")};
    std::sort(ln.members.begin(), ln.members.end());
    ln.links = {make_link(id("01001"), id("01000"))};
    ln.realizations[ln.links[0]] = path_of({"01001", "01000"});
    default_tables(ln);
    net.levels.emplace(ln.ref, std::move(ln));
  }
  {  // level 4, prefix 0101
    LevelNet ln;
    ln.ref = LevelRef{5, 4};
    ln.members = {id("01010"), id("01011")};
    std::sort(ln.members.begin(), ln.members.end());
    ln.links = {make_link(id("01010"), id("01011"))};
    ln.realizations[ln.links[0]] = path_of({"01010", "01011"});
    default_tables(ln);
    net.levels.emplace(ln.ref, std::move(ln));
  }
  return net;
}

LabeledNetwork propagation12() {
  std::vector<std::pair<int, std::string>> nodes;
  const std::array<int, 3> blacks = {4, 6, 7};
  for (int k = 0; k < 12; ++k) {
    const bool black = std::find(blacks.begin(), blacks.end(), k) != blacks.end();
    const NodeId id(5, static_cast<uint64_t>(k) | (black ? 16u : 0u));
    nodes.emplace_back(k, id.to_binary());
  }
  std::vector<std::pair<double, double>> coords;
  for (int k = 0; k < 12; ++k) coords.emplace_back(k % 4, k / 4);
  const std::vector<std::pair<int, int>> links = {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {2, 6},
                                                  {5, 6}, {6, 7}, {4, 8}, {7, 11}, {8, 9},
                                                  {9, 10}, {10, 11}, {1, 5}, {3, 7}, {4, 5}};
  return build(5, nodes, coords, links);
}

LabeledNetwork hubs16() {
  // Addresses constructed so that the in-tree splits and the cross-corridor
  // XOR argmins land exactly on the expected links; verified against the
  // brute-force reference in the tests.
  const std::vector<std::pair<int, std::string>> nodes = {
      {0, "00000"},  {1, "10000"},  {2, "10100"},  {3, "11110"},
      {4, "11000"},  {5, "00001"},  {6, "11001"},  {7, "10111"},
      {8, "00010"},  {9, "11101"},  {10, "10110"}, {11, "00011"},
      {12, "00100"}, {13, "11010"}, {14, "10101"}, {15, "10010"}};
  const std::vector<std::pair<double, double>> coords = {
      {0, 0},  {1, 1},  {1, -1}, {-1, -1}, {-1, 1}, {-2, 0}, {-3, 1},  {-3, -1},
      {-4, 0}, {-5, 1}, {-5, -1}, {2, 0},  {4, 0},  {5, 1},  {5, -1}, {6, 0}};
  const std::vector<std::pair<int, int>> links = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5},
                                                  {5, 6}, {5, 7}, {5, 8}, {8, 9}, {8, 10},
                                                  {0, 11}, {11, 12}, {12, 13}, {12, 14}, {12, 15}};
  return build(5, nodes, coords, links);
}

std::vector<std::pair<int, int>> hubs16_expected_black_links() {
  return {{1, 2}, {1, 4}, {3, 4}, {4, 6}, {6, 7}, {7, 10}, {9, 10}, {2, 14}, {13, 15}, {14, 15}};
}

}  // namespace bmlrp::fixtures
