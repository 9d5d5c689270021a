#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <random>
#include <string>
#include <vector>

#include "cteg/cteg.hpp"
#include "cteg/types.hpp"
#include "cteg/validate.hpp"

namespace cteg::testing {

inline ActionId id(std::uint64_t n) { return ActionId::from_u64(0, n); }
inline Timestamp ts(std::int64_t us) { return Timestamp{us}; }
inline EventType ty(const std::string& name = "event") { return EventType(name); }

/// Builds a typed temporal graph from (id, time) nodes and id edges.
inline TypedTemporalGraph make_graph(const std::vector<std::pair<std::uint64_t, std::int64_t>>& nodes,
                                     const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges,
                                     const std::string& type = "event") {
  TypedTemporalGraph g;
  for (auto [n, t] : nodes) g.add_node(id(n), ts(t), ty(type));
  for (auto [a, b] : edges) g.add_edge(id(a), id(b));
  return g;
}

/// Projection counterexample pair: r→a, a→b, a→c versus the chain r→a→b→c, t = 0,1,2,3.
inline TypedTemporalGraph fork_graph() { return make_graph({{1, 0}, {2, 1}, {3, 2}, {4, 3}}, {{1, 2}, {2, 3}, {2, 4}}); }
inline TypedTemporalGraph chain_graph() {
  return make_graph({{1, 0}, {2, 1}, {3, 2}, {4, 3}}, {{1, 2}, {2, 3}, {3, 4}});
}

struct RandomCtegOptions {
  std::size_t min_nodes = 1;
  std::size_t max_nodes = 12;
  std::int64_t base_time = 0;
  bool payloads = true;
  std::vector<std::string> types{"plan", "tool", "result"};
};

/// Random valid CTEG: each new node hangs under a uniformly chosen earlier
/// node with a strictly later timestamp; siblings may share timestamps.
inline Cteg random_cteg(std::mt19937_64& rng, IdGenerator& ids, const RandomCtegOptions& opt = {}) {
  auto pick = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  const auto n = static_cast<std::size_t>(pick(static_cast<std::int64_t>(opt.min_nodes),
                                               static_cast<std::int64_t>(opt.max_nodes)));
  TypedTemporalGraph g;
  std::vector<ActionId> order;
  auto payload = [&] {
    Payload p(opt.payloads ? static_cast<std::size_t>(pick(0, 6)) : 0);
    for (auto& b : p) b = static_cast<std::uint8_t>(pick(0, 255));
    return p;
  };
  auto type = [&] { return EventType(opt.types[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(opt.types.size()) - 1))]); };

  ActionId root = ids.next_action();
  g.add_node(root, Timestamp{opt.base_time + pick(0, 5)}, type(), payload());
  order.push_back(root);
  for (std::size_t i = 1; i < n; ++i) {
    ActionId parent = order[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(order.size()) - 1))];
    ActionId node = ids.next_action();
    g.add_node(node, Timestamp{g.time(parent).micros + pick(1, 3)}, type(), payload());
    g.add_edge(parent, node);
    order.push_back(node);
  }
  return Cteg::make(std::move(g), root);
}

/// Encoding of a rooted labelled tree that ignores node ids. Two CTEGs get
/// the same string exactly when they differ only by a renaming.
inline std::string shape_key(const Cteg& c, ActionId n) {
  const auto& a = c.graph().node(n);
  std::vector<std::string> kids;
  for (ActionId k : c.children(n)) kids.push_back(shape_key(c, k));
  std::sort(kids.begin(), kids.end());
  std::string out = "(" + a.type.name() + "," + std::to_string(a.time.micros) + "," +
                    detail::bytes_to_hex(a.payload.data(), a.payload.size()) + "[";
  for (const auto& k : kids) out += k;
  return out + "])";
}

enum class Mutation { Timestamp, Type, PayloadBit, AddLeaf, RemoveLeaf, Reparent };
inline constexpr Mutation kAllMutations[] = {Mutation::Timestamp, Mutation::Type,       Mutation::PayloadBit,
                                             Mutation::AddLeaf,   Mutation::RemoveLeaf, Mutation::Reparent};

inline const char* to_string(Mutation m) {
  switch (m) {
    case Mutation::Timestamp: return "timestamp";
    case Mutation::Type: return "type";
    case Mutation::PayloadBit: return "payload-bit";
    case Mutation::AddLeaf: return "add-leaf";
    case Mutation::RemoveLeaf: return "remove-leaf";
    case Mutation::Reparent: return "reparent";
  }
  return "?";
}

namespace detail_mut {

// Copies c, letting `attrs` rewrite node attributes and `parent` rewrite
// parenthood. Nodes mapped to a null parent other than the root are dropped.
inline std::optional<Cteg> rebuild(const Cteg& c, const std::function<NodeAttrs(ActionId, NodeAttrs)>& attrs,
                                   const std::function<std::optional<ActionId>(ActionId)>& parent,
                                   const std::optional<ActionId>& drop = std::nullopt) {
  TypedTemporalGraph g;
  for (const auto& [n, a] : c.graph().nodes()) {
    if (n == drop) continue;
    NodeAttrs b = attrs(n, a);
    g.add_node(n, b.time, b.type, b.payload);
  }
  for (const auto& [n, a] : c.graph().nodes()) {
    if (n == drop || n == c.root()) continue;
    g.add_edge(*parent(n), n);
  }
  if (!validate_cteg(g, c.root()).ok()) return std::nullopt;
  return Cteg::make(std::move(g), c.root());
}

inline std::set<ActionId> subtree(const Cteg& c, ActionId n) {
  std::set<ActionId> out{n};
  for (ActionId k : c.children(n)) out.merge(subtree(c, k));
  return out;
}

}  // namespace detail_mut

/// Applies one mutation of the given kind, or nullopt if `c` admits none
/// (no payload bytes, no leaf to remove, no reparenting that changes the
/// shape). Every result is a valid CTEG.
inline std::optional<Cteg> try_mutate(const Cteg& c, Mutation kind, std::mt19937_64& rng, IdGenerator& ids) {
  auto nodes = temporal_projection(c);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  auto same = [](ActionId, NodeAttrs a) { return a; };
  auto parent_of = [&c](ActionId n) { return c.parent(n); };

  switch (kind) {
    case Mutation::Timestamp:
      for (ActionId n : nodes) {
        std::int64_t first = (rng() & 1) ? 1 : -1;
        for (std::int64_t delta : {first, -first}) {
          auto r = detail_mut::rebuild(
              c, [&](ActionId m, NodeAttrs a) { if (m == n) a.time.micros += delta; return a; }, parent_of);
          if (r) return r;
        }
      }
      return std::nullopt;
    case Mutation::Type: {
      ActionId n = nodes.front();
      static const std::vector<std::string> pool{"plan", "tool", "result", "other"};
      std::string name;
      do name = pool[rng() % pool.size()]; while (name == c.graph().type(n).name());
      return detail_mut::rebuild(c, [&](ActionId m, NodeAttrs a) { if (m == n) a.type = EventType(name); return a; },
                                 parent_of);
    }
    case Mutation::PayloadBit:
      for (ActionId n : nodes) {
        const auto& p = c.graph().node(n).payload;
        if (p.empty()) continue;
        std::size_t bit = rng() % (p.size() * 8);
        return detail_mut::rebuild(c, [&](ActionId m, NodeAttrs a) {
          if (m == n) a.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
          return a;
        }, parent_of);
      }
      return std::nullopt;
    case Mutation::AddLeaf: {
      ActionId p = nodes.front();
      TypedTemporalGraph g = c.graph();
      ActionId leaf = ids.next_action();
      g.add_node(leaf, Timestamp{c.time(p).micros + 1 + static_cast<std::int64_t>(rng() % 3)}, EventType("tool"));
      g.add_edge(p, leaf);
      return Cteg::make(std::move(g), c.root());
    }
    case Mutation::RemoveLeaf:
      for (ActionId n : nodes) {
        if (n == c.root() || !c.children(n).empty()) continue;
        return detail_mut::rebuild(c, same, parent_of, n);
      }
      return std::nullopt;
    case Mutation::Reparent: {
      const std::string before = shape_key(c, c.root());
      for (ActionId n : nodes) {
        if (n == c.root()) continue;
        auto below = detail_mut::subtree(c, n);
        for (ActionId p : nodes) {
          if (below.contains(p) || p == *c.parent(n) || !(c.time(p) < c.time(n))) continue;
          auto r = detail_mut::rebuild(c, same, [&](ActionId m) { return m == n ? std::optional(p) : c.parent(m); });
          if (r && shape_key(*r, r->root()) != before) return r;
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

/// A random applicable mutation. Falls back through the other kinds when the
/// drawn one does not apply; a timestamp shift always applies.
inline std::pair<Cteg, Mutation> mutate(const Cteg& c, std::mt19937_64& rng, IdGenerator& ids) {
  std::size_t start = rng() % std::size(kAllMutations);
  for (std::size_t i = 0; i < std::size(kAllMutations); ++i) {
    Mutation m = kAllMutations[(start + i) % std::size(kAllMutations)];
    if (auto r = try_mutate(c, m, rng, ids)) return {*r, m};
  }
  throw std::logic_error("no mutation applies");
}

}  // namespace cteg::testing
