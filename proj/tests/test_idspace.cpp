#include <doctest.h>

#include <stdexcept>

#include "bmlrp/idspace.hpp"
#include "bmlrp/rng.hpp"

using namespace bmlrp;

namespace {
NodeId id(const char* bits) { return NodeId::parse_binary(bits); }
}  // namespace

TEST_CASE("common prefix length") {
  CHECK(common_prefix_len(id("01100"), id("01000")) == 2);
  CHECK(common_prefix_len(id("01100"), id("01100")) == 5);
  CHECK(common_prefix_len(id("10000"), id("00000")) == 0);
  CHECK_THROWS_AS(common_prefix_len(id("0110"), id("01100")), std::invalid_argument);
}

TEST_CASE("xor distance") {
  CHECK(xor_distance(id("01100"), id("01100")) == 0);
  CHECK(xor_distance(id("01100"), id("01000")) == id("00100").value);
  CHECK_THROWS_AS(xor_distance(id("011"), id("01100")), std::invalid_argument);
}

TEST_CASE("address bits and colors") {
  CHECK(address_bit(id("11100"), 0) == 1);
  CHECK(color_at(id("11100"), 0) == Color::Black);
  CHECK(address_bit(id("01100"), 0) == 0);
  CHECK(color_at(id("01100"), 0) == Color::White);
  CHECK(address_bit(id("01010"), 1) == 1);
  CHECK(color_at(id("01010"), 1) == Color::Black);
  CHECK_THROWS_AS(address_bit(id("01010"), 5), std::invalid_argument);
}

TEST_CASE("binary text form round trips") {
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const uint16_t w = static_cast<uint16_t>(1 + rng.next_below(64));
    const NodeId a(w, w >= 64 ? rng.next() : rng.next_below(1ull << w));
    CHECK(NodeId::parse_binary(a.to_binary()) == a);
    CHECK(a.to_binary().size() == w);
  }
  CHECK_THROWS_AS(NodeId::parse_binary("01x0"), std::invalid_argument);
  CHECK_THROWS_AS(NodeId::parse_binary(""), std::invalid_argument);
}

TEST_CASE("prefix and xor properties over random pairs") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const uint16_t w = 16;
    const NodeId a(w, rng.next_below(1u << w));
    const NodeId b(w, rng.next_below(1u << w));
    const NodeId c(w, rng.next_below(1u << w));

    CHECK(common_prefix_len(a, b) == common_prefix_len(b, a));
    CHECK(xor_distance(a, b) == xor_distance(b, a));

    // l(a,b) >= k iff the top k bits agree
    const uint16_t l = common_prefix_len(a, b);
    for (uint16_t k = 0; k <= w; ++k) {
      const bool agree = k == 0 || (a.value >> (w - k)) == (b.value >> (w - k));
      CHECK(agree == (l >= k));
    }

    // XOR metric triangle inequality
    CHECK(xor_distance(a, c) <= xor_distance(a, b) + xor_distance(b, c));
  }
}

TEST_CASE("color is constant per child prefix") {
  Rng rng(11);
  const uint16_t w = 12;
  for (int trial = 0; trial < 50; ++trial) {
    const uint16_t depth = static_cast<uint16_t>(rng.next_below(w - 1));
    const uint64_t prefix = rng.next_below(1ull << (depth + 1));  // depth+1 bits
    const Color expected = (prefix & 1) ? Color::Black : Color::White;
    for (int i = 0; i < 20; ++i) {
      const uint64_t suffix = rng.next_below(1ull << (w - depth - 1));
      const NodeId n(w, (prefix << (w - depth - 1)) | suffix);
      CHECK(color_at(n, depth) == expected);
    }
  }
}
