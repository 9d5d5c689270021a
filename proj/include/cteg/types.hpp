#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cteg {

using Payload = std::vector<std::uint8_t>;

namespace detail {

std::string bytes_to_hex(const std::uint8_t* data, std::size_t size);
bool hex_to_bytes(std::string_view hex, std::uint8_t* out, std::size_t size);

}  // namespace detail

/// 128-bit opaque identifier. Ordered lexicographically on its bytes.
template <typename Tag>
class Id128 {
 public:
  using Bytes = std::array<std::uint8_t, 16>;

  constexpr Id128() = default;
  constexpr explicit Id128(const Bytes& bytes) : bytes_(bytes) {}

  /// Big-endian packing of two 64-bit halves. Handy for fixtures.
  static constexpr Id128 from_u64(std::uint64_t hi, std::uint64_t lo) {
    Bytes b{};
    for (int i = 0; i < 8; ++i) {
      b[i] = static_cast<std::uint8_t>(hi >> (56 - 8 * i));
      b[8 + i] = static_cast<std::uint8_t>(lo >> (56 - 8 * i));
    }
    return Id128(b);
  }

  /// Throws std::invalid_argument unless `hex` is exactly 32 hex digits.
  static Id128 from_hex(std::string_view hex) {
    Bytes b{};
    if (!detail::hex_to_bytes(hex, b.data(), b.size())) {
      throw std::invalid_argument("malformed 128-bit id: '" + std::string(hex) + "'");
    }
    return Id128(b);
  }

  std::string to_hex() const { return detail::bytes_to_hex(bytes_.data(), bytes_.size()); }
  const Bytes& bytes() const { return bytes_; }

  friend constexpr auto operator<=>(const Id128&, const Id128&) = default;

 private:
  Bytes bytes_{};
};

struct ActionTag {};
struct SessionTag {};

/// Node identity; an element of the action pool.
using ActionId = Id128<ActionTag>;
using SessionId = Id128<SessionTag>;

/// Microseconds since epoch. Integer so that strict ordering along causal
/// paths is decidable exactly.
struct Timestamp {
  std::int64_t micros = 0;

  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

/// Member of a flat, finite type set. Never empty.
class EventType {
 public:
  explicit EventType(std::string name) : name_(std::move(name)) {
    if (name_.empty()) throw std::invalid_argument("event type name must be non-empty");
  }

  const std::string& name() const { return name_; }

  friend auto operator<=>(const EventType&, const EventType&) = default;

 private:
  std::string name_;
};

/// Source of fresh identifiers. Seeded instances are reproducible; the
/// default constructor seeds from std::random_device. Thread-safe.
class IdGenerator {
 public:
  IdGenerator();
  explicit IdGenerator(std::uint64_t seed);

  ActionId next_action();
  SessionId next_session();

 private:
  std::array<std::uint8_t, 16> draw();

  std::mutex mutex_;
  std::mt19937_64 engine_;
};

}  // namespace cteg

template <typename Tag>
struct std::hash<cteg::Id128<Tag>> {
  std::size_t operator()(const cteg::Id128<Tag>& id) const noexcept {
    std::size_t h = 0;
    for (auto b : id.bytes()) h = h * 131 + b;
    return h;
  }
};
