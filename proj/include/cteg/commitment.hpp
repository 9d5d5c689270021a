#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "cteg/cteg.hpp"

namespace cteg {

/// SHA-256 output.
class Digest {
 public:
  using Bytes = std::array<std::uint8_t, 32>;

  Digest() = default;
  explicit Digest(const Bytes& bytes) : bytes_(bytes) {}

  /// Throws std::invalid_argument unless `hex` is 64 hex digits.
  static Digest from_hex(std::string_view hex);
  /// Lowercase, 64 characters.
  std::string to_hex() const;
  const Bytes& bytes() const { return bytes_; }

  friend auto operator<=>(const Digest&, const Digest&) = default;

 private:
  Bytes bytes_{};
};

inline constexpr std::string_view kNodeDomainTag = "CTEG-NODE-V1";

Digest sha256(std::span<const std::uint8_t> data);

/// SHA-256 over
///   tag || u32le(len(type)) || type || i64le(timestamp) || SHA-256(payload)
///       || u32le(#children) || child digests
/// Children must already be in canonical (timestamp, ActionId) order.
/// Node identifiers are not part of the preimage.
Digest node_digest(const EventType& type, Timestamp time, std::span<const std::uint8_t> payload,
                   std::span<const Digest> child_digests);

/// Bottom-up node_digest of the root.
Digest merkle_root(const Cteg& c);

bool verify_commitment(const Cteg& c, const Digest& expected);

}  // namespace cteg
