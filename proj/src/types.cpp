#include "cteg/types.hpp"

namespace cteg {

namespace detail {

std::string bytes_to_hex(const std::uint8_t* data, std::size_t size) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(kDigits[data[i] >> 4]);
    out.push_back(kDigits[data[i] & 0x0f]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

bool hex_to_bytes(std::string_view hex, std::uint8_t* out, std::size_t size) {
  if (hex.size() != size * 2) return false;
  for (std::size_t i = 0; i < size; ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return false;
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return true;
}

}  // namespace detail

IdGenerator::IdGenerator() {
  std::random_device rd;
  std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
  engine_.seed(seq);
}

IdGenerator::IdGenerator(std::uint64_t seed) : engine_(seed) {}

std::array<std::uint8_t, 16> IdGenerator::draw() {
  std::lock_guard lock(mutex_);
  std::array<std::uint8_t, 16> out{};
  for (int half = 0; half < 2; ++half) {
    std::uint64_t v = engine_();
    for (int i = 0; i < 8; ++i) out[half * 8 + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  return out;
}

ActionId IdGenerator::next_action() { return ActionId(draw()); }

SessionId IdGenerator::next_session() { return SessionId(draw()); }

}  // namespace cteg
