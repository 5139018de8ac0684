#include "bmlrp/idspace.hpp"

#include <bit>
#include <stdexcept>

namespace bmlrp {

namespace {

uint64_t width_mask(uint16_t width) {
  return width >= 64 ? ~0ull : ((1ull << width) - 1);
}

void require_same_width(NodeId a, NodeId b) {
  if (a.width != b.width) {
    throw std::invalid_argument("NodeId width mismatch: " + std::to_string(a.width) + " vs " +
                                std::to_string(b.width));
  }
}

}  // namespace

NodeId::NodeId(uint16_t w, uint64_t v) : width(w), value(v) {
  if (w == 0 || w > 64) throw std::invalid_argument("NodeId width must be in [1, 64]");
  if ((v & ~width_mask(w)) != 0) throw std::invalid_argument("NodeId value exceeds width");
}

std::string NodeId::to_binary() const {
  std::string out(width, '0');
  for (uint16_t i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1ull) out[i] = '1';
  }
  return out;
}

NodeId NodeId::parse_binary(const std::string& bits) {
  if (bits.empty() || bits.size() > 64) throw std::invalid_argument("bad NodeId literal: " + bits);
  uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad NodeId literal: " + bits);
    v = (v << 1) | static_cast<uint64_t>(c - '0');
  }
  return NodeId(static_cast<uint16_t>(bits.size()), v);
}

uint16_t common_prefix_len(NodeId a, NodeId b) {
  require_same_width(a, b);
  const uint64_t x = a.value ^ b.value;
  if (x == 0) return a.width;
  return static_cast<uint16_t>(a.width - std::bit_width(x));
}

uint64_t xor_distance(NodeId a, NodeId b) {
  require_same_width(a, b);
  return a.value ^ b.value;
}

int address_bit(NodeId a, uint16_t idx) {
  if (idx >= a.width) {
    throw std::invalid_argument("address bit " + std::to_string(idx) + " out of range for width " +
                                std::to_string(a.width));
  }
  return static_cast<int>((a.value >> (a.width - 1 - idx)) & 1ull);
}

}  // namespace bmlrp
