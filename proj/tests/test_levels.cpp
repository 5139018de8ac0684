#include <doctest.h>

#include <sstream>

#include "bmlrp/levels.hpp"
#include "bmlrp/oracle.hpp"

using namespace bmlrp;

namespace {
NodeId id(const char* bits) { return NodeId::parse_binary(bits); }
}  // namespace

TEST_CASE("level membership") {
  const auto f = fixtures::grid16();
  const auto all = f.net.node_ids();

  SUBCASE("empty prefix is everyone") {
    CHECK(level_members(all, LevelRef{}).size() == all.size());
  }
  SUBCASE("prefix 01 matches the drawn level") {
    const auto got = level_members(all, LevelRef::of(id("01000"), 2));
    std::vector<NodeId> expect = {id("01100"), id("01010"), id("01011"), id("01001"), id("01000")};
    std::sort(expect.begin(), expect.end());
    auto sorted = got;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == expect);
  }
  SUBCASE("deep prefixes shrink to singletons") {
    CHECK(level_members(all, LevelRef::of(id("01000"), 5)) == std::vector<NodeId>{id("01000")});
  }
  SUBCASE("membership partitions by the next bit") {
    for (uint16_t depth = 0; depth < 4; ++depth) {
      const LevelRef ref = LevelRef::of(id("01000"), depth);
      const auto parent = level_members(all, ref);
      const auto c0 = level_members(all, ref.child(0));
      const auto c1 = level_members(all, ref.child(1));
      CHECK(parent.size() == c0.size() + c1.size());
    }
  }
}

TEST_CASE("merge semantics") {
  const LevelRef ref{};
  RoutingTable t(id("00000"), ref, {id("00001"), id("00100")});

  SUBCASE("empty update is a no-op") {
    RoutingTable before = t;
    t.apply_update(TableUpdate{id("00001"), {}, {}});
    CHECK(t.visible_edges() == before.visible_edges());
  }
  SUBCASE("added record makes the edge visible") {
    EdgeRecord rec{make_link(id("00101"), id("10110")), {id("00101"), id("10110")}};
    t.apply_update(TableUpdate{id("00001"), {rec}, {}});
    const auto edges = t.visible_edges();
    CHECK(std::find(edges.begin(), edges.end(), rec.edge) != edges.end());
    const auto nodes = t.visible_nodes();
    CHECK(std::find(nodes.begin(), nodes.end(), id("10110")) != nodes.end());
  }
  SUBCASE("add then remove restores the table") {
    const auto before = t.visible_edges();
    EdgeRecord rec{make_link(id("00101"), id("10110")), {id("00101"), id("10110")}};
    t.apply_update(TableUpdate{id("00001"), {rec}, {}});
    t.apply_update(TableUpdate{id("00001"), {}, {rec}});
    CHECK(t.visible_edges() == before);
  }
  SUBCASE("removing an absent record is ignored but counted") {
    EdgeRecord rec{make_link(id("00101"), id("10110")), {id("00101"), id("10110")}};
    t.apply_update(TableUpdate{id("00001"), {}, {rec}});
    CHECK(t.ignored_removals() == 1);
  }
  SUBCASE("conflicting update rejected") {
    EdgeRecord rec{make_link(id("00101"), id("10110")), {id("00101"), id("10110")}};
    CHECK_THROWS_AS(t.apply_update(TableUpdate{id("00001"), {rec}, {rec}}),
                    std::invalid_argument);
  }
}

TEST_CASE("purge semantics") {
  const LevelRef ref{};

  SUBCASE("unrelated break changes nothing") {
    RoutingTable t(id("00000"), ref, {id("00001")});
    EdgeRecord rec{make_link(id("00101"), id("00110")), {id("00101"), id("00110")}};
    t.apply_update(TableUpdate{id("00001"), {rec}, {}});
    const auto res = t.purge_stale(make_link(id("01000"), id("01001")));
    CHECK(res.removed.empty());
    CHECK(!res.dropped_neighbor.has_value());
  }

  SUBCASE("a-b-c chain: breaking b-c drops everything learned from b") {
    // c holds edge a-b via path (a, b); the broken link is not inside the
    // stored path but disconnects the teacher.
    const NodeId a = id("00001"), b = id("00010"), c = id("00100");
    RoutingTable t(c, ref, {b});
    EdgeRecord rec{make_link(a, b), {a, b}};
    t.apply_update(TableUpdate{b, {rec}, {}});
    const auto res = t.purge_stale(make_link(b, c));
    CHECK(res.dropped_neighbor == b);
    REQUIRE(res.removed.size() == 1);
    CHECK(res.removed[0].second == rec);
    CHECK(t.connected().empty());
    CHECK(t.visible_edges().empty());
  }

  SUBCASE("records whose stored path crosses the break are dropped") {
    const NodeId a = id("00001"), b = id("00010"), w = id("00100"), v = id("01000");
    RoutingTable t(v, ref, {w});
    EdgeRecord crossing{make_link(a, b), {a, b, w}};   // path uses link b-w
    EdgeRecord safe{make_link(a, w), {a, w}};
    t.apply_update(TableUpdate{w, {crossing, safe}, {}});
    const auto res = t.purge_stale(make_link(b, w));
    REQUIRE(res.removed.size() == 1);
    CHECK(res.removed[0].second == crossing);
    const auto edges = t.visible_edges();
    CHECK(std::find(edges.begin(), edges.end(), safe.edge) != edges.end());
  }

  SUBCASE("records of the broken edge itself are dropped") {
    const NodeId a = id("00001"), b = id("00010"), w = id("00100");
    RoutingTable t(id("01000"), ref, {w});
    EdgeRecord rec{make_link(a, b), {a, b}};
    t.apply_update(TableUpdate{w, {rec}, {}});
    const auto res = t.purge_stale(make_link(a, b));
    REQUIRE(res.removed.size() == 1);
  }
}

TEST_CASE("dump format") {
  RoutingTable t(id("00000"), LevelRef{}, {id("00001")});
  t.apply_update(TableUpdate{
      id("00001"),
      {EdgeRecord{make_link(id("00001"), id("00010")), {id("00010")}},
       EdgeRecord{make_link(id("00101"), id("00110")), {id("00110"), id("00101")}}},
      {}});
  std::ostringstream out;
  t.dump(out);
  CHECK(out.str() ==
        "# owner 00000\n"
        "# level (root)\n"
        "# neighbors 00001\n"
        "edge=00001-00010 path=00010\n"
        "edge=00101-00110 path=00110,00101\n");
}
