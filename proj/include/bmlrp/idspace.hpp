#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace bmlrp {

// Fixed-width node address. Bits are numbered 0-based from the most
// significant bit of the width-bit string, so the "governing bit" of the
// depth-i split is address_bit(id, i). All identifiers of one network
// instance share the same width; mixed-width arithmetic is a usage error.
struct NodeId {
  uint16_t width = 0;
  uint64_t value = 0;

  NodeId() = default;
  NodeId(uint16_t w, uint64_t v);

  auto operator<=>(const NodeId&) const = default;

  std::string to_binary() const;
  static NodeId parse_binary(const std::string& bits);
};

// Role of a node inside its current level network: White when the governing
// address bit is 0, Black when it is 1.
enum class Color : uint8_t { White, Black };

inline Color opposite(Color c) { return c == Color::White ? Color::Black : Color::White; }

// Length of the longest common prefix of a and b, counted from the most
// significant bit. Returns the full width iff a == b.
uint16_t common_prefix_len(NodeId a, NodeId b);

// Bitwise exclusive or of two same-width addresses, as an unsigned value.
uint64_t xor_distance(NodeId a, NodeId b);

// The idx-th address bit, 0-based from the most significant bit.
int address_bit(NodeId a, uint16_t idx);

inline Color color_at(NodeId a, uint16_t level) {
  return address_bit(a, level) == 0 ? Color::White : Color::Black;
}

}  // namespace bmlrp

template <>
struct std::hash<bmlrp::NodeId> {
  size_t operator()(const bmlrp::NodeId& id) const noexcept {
    return std::hash<uint64_t>{}(id.value * 0x9E3779B97F4A7C15ull + id.width);
  }
};
