#include "cteg/cteg.hpp"

#include <algorithm>

#include "cteg/errors.hpp"
#include "cteg/sequence.hpp"

namespace cteg {

Cteg::Cteg(TypedTemporalGraph graph, ActionId root, std::map<ActionId, ActionId> parents)
    : graph_(std::move(graph)), root_(root), parent_(std::move(parents)) {}

Cteg Cteg::make(TypedTemporalGraph graph, ActionId root) {
  Diagnostics diag = validate_cteg(graph, root);
  if (!diag.ok()) throw InvalidCtegError("not a CTEG:\n" + diag.to_string());
  std::map<ActionId, ActionId> parents;
  for (const auto& [from, to] : graph.edges()) parents.emplace(to, from);
  return Cteg(std::move(graph), root, std::move(parents));
}

Cteg Cteg::trivial(ActionId root, Timestamp time, EventType type, Payload payload) {
  TypedTemporalGraph g;
  g.add_node(root, time, std::move(type), std::move(payload));
  return Cteg(std::move(g), root, {});
}

std::optional<ActionId> Cteg::parent(ActionId id) const {
  if (!contains(id)) throw UnknownNodeError("unknown node " + id.to_hex());
  auto it = parent_.find(id);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

std::vector<ActionId> Cteg::children(ActionId id) const {
  auto out = graph_.successors(id);
  std::sort(out.begin(), out.end(), [this](ActionId a, ActionId b) {
    return std::pair(graph_.time(a), a) < std::pair(graph_.time(b), b);
  });
  return out;
}

std::vector<ActionId> causal_path(const Cteg& c, ActionId n) {
  std::vector<ActionId> path{n};
  for (auto p = c.parent(n); p; p = c.parent(*p)) path.push_back(*p);
  std::reverse(path.begin(), path.end());
  return path;
}

TypedTemporalGraph graft(const TypedTemporalGraph& g1, ActionId p, const TypedTemporalGraph& g2,
                         ActionId r2) {
  if (!g1.contains(p)) throw UnknownNodeError("attach point " + p.to_hex() + " is not in the host graph");
  if (!g2.contains(r2)) throw UnknownNodeError("graft root " + r2.to_hex() + " is not in the grafted graph");
  for (const auto& [id, attrs] : g2.nodes()) {
    if (g1.contains(id)) throw DisjointnessError("node " + id.to_hex() + " occurs in both graphs");
  }
  TypedTemporalGraph out = g1;
  for (const auto& t : g2.type_set()) out.declare_type(t);
  for (const auto& [id, attrs] : g2.nodes()) out.add_node(id, attrs.time, attrs.type, attrs.payload);
  for (const auto& [from, to] : g2.edges()) out.add_edge(from, to);
  out.add_edge(p, r2);
  return out;
}

Cteg graft_cteg(const Cteg& c1, ActionId p, const Cteg& c2) {
  TypedTemporalGraph g = graft(c1.graph(), p, c2.graph(), c2.root());
  if (!(c1.time(p) < c2.time(c2.root()))) {
    throw CompatibilityError("graft at " + p.to_hex() + " needs t(p)=" +
                             std::to_string(c1.time(p).micros) + " < t(root)=" +
                             std::to_string(c2.time(c2.root()).micros));
  }
  auto parents = c1.parent_;
  parents.insert(c2.parent_.begin(), c2.parent_.end());
  parents.emplace(c2.root(), p);
  return Cteg(std::move(g), c1.root(), std::move(parents));
}

std::vector<ActionId> temporal_projection(const Cteg& c) {
  std::vector<std::pair<Timestamp, ActionId>> keyed;
  keyed.reserve(c.size());
  for (const auto& [id, attrs] : c.graph().nodes()) keyed.emplace_back(attrs.time, id);
  std::sort(keyed.begin(), keyed.end());
  std::vector<ActionId> out;
  out.reserve(keyed.size());
  for (const auto& [t, id] : keyed) out.push_back(id);
  return out;
}

std::size_t height(const Cteg& c) {
  std::map<ActionId, std::size_t> depth;
  std::size_t best = 0;
  for (ActionId n : temporal_projection(c)) {
    auto p = c.parent(n);
    std::size_t d = p ? depth.at(*p) + 1 : 0;
    depth.emplace(n, d);
    best = std::max(best, d);
  }
  return best;
}

ExecutionSequence e0_normalize(const Cteg& c) {
  const auto& g = c.graph();
  const auto& root_attrs = g.node(c.root());
  TypedTemporalGraph current;
  for (const auto& t : g.type_set()) current.declare_type(t);
  current.add_node(c.root(), root_attrs.time, root_attrs.type, root_attrs.payload);

  ExecutionSequence seq(current);
  for (ActionId n : temporal_projection(c)) {
    if (n == c.root()) continue;
    ActionId p = *c.parent(n);
    const auto& attrs = g.node(n);
    current.add_node(n, attrs.time, attrs.type, attrs.payload);
    current.add_edge(p, n);
    seq.push(EmissionStep{p, {n}}, current);
  }
  return seq;
}

}  // namespace cteg
