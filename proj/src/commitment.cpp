#include "cteg/commitment.hpp"

#include <openssl/sha.h>

#include <map>
#include <stdexcept>
#include <vector>

namespace cteg {

Digest Digest::from_hex(std::string_view hex) {
  Bytes b{};
  if (!detail::hex_to_bytes(hex, b.data(), b.size())) {
    throw std::invalid_argument("malformed digest: '" + std::string(hex) + "'");
  }
  return Digest(b);
}

std::string Digest::to_hex() const { return detail::bytes_to_hex(bytes_.data(), bytes_.size()); }

Digest sha256(std::span<const std::uint8_t> data) {
  Digest::Bytes out{};
  SHA256(data.data(), data.size(), out.data());
  return Digest(out);
}

Digest node_digest(const EventType& type, Timestamp time, std::span<const std::uint8_t> payload,
                   std::span<const Digest> child_digests) {
  std::vector<std::uint8_t> pre(kNodeDomainTag.begin(), kNodeDomainTag.end());
  auto put_le = [&pre](std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) pre.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  const auto& name = type.name();
  put_le(name.size(), 4);
  pre.insert(pre.end(), name.begin(), name.end());
  put_le(static_cast<std::uint64_t>(time.micros), 8);
  const Digest payload_hash = sha256(payload);
  pre.insert(pre.end(), payload_hash.bytes().begin(), payload_hash.bytes().end());
  put_le(child_digests.size(), 4);
  for (const auto& d : child_digests) pre.insert(pre.end(), d.bytes().begin(), d.bytes().end());
  return sha256(pre);
}

Digest merkle_root(const Cteg& c) {
  // Reverse temporal projection visits every child before its parent.
  auto order = temporal_projection(c);
  std::map<ActionId, Digest> done;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::vector<Digest> kids;
    for (ActionId child : c.children(*it)) kids.push_back(done.at(child));
    const auto& attrs = c.graph().node(*it);
    done.emplace(*it, node_digest(attrs.type, attrs.time, attrs.payload, kids));
  }
  return done.at(c.root());
}

bool verify_commitment(const Cteg& c, const Digest& expected) { return merkle_root(c) == expected; }

}  // namespace cteg
