#include "cteg/graph.hpp"

#include "cteg/errors.hpp"

namespace cteg {

void TypedTemporalGraph::add_node(ActionId id, Timestamp time, EventType type, Payload payload) {
  if (contains(id)) throw DisjointnessError("node " + id.to_hex() + " already present");
  type_set_.insert(type);
  nodes_.emplace(id, NodeAttrs{time, std::move(type), std::move(payload)});
}

void TypedTemporalGraph::add_edge(ActionId from, ActionId to) {
  if (!contains(from)) throw UnknownNodeError("edge source " + from.to_hex() + " is not a node");
  if (!contains(to)) throw UnknownNodeError("edge target " + to.to_hex() + " is not a node");
  if (from == to) throw InvalidGraphError("self-loop at " + from.to_hex());
  edges_.emplace(from, to);
}

void TypedTemporalGraph::declare_type(EventType type) { type_set_.insert(std::move(type)); }

const NodeAttrs& TypedTemporalGraph::node(ActionId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw UnknownNodeError("unknown node " + id.to_hex());
  return it->second;
}

std::vector<ActionId> TypedTemporalGraph::successors(ActionId id) const {
  std::vector<ActionId> out;
  for (auto it = edges_.lower_bound({id, ActionId{}}); it != edges_.end() && it->first == id; ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::size_t TypedTemporalGraph::in_degree(ActionId id) const {
  std::size_t n = 0;
  for (const auto& [from, to] : edges_) n += (to == id);
  return n;
}

std::map<ActionId, std::size_t> TypedTemporalGraph::in_degrees() const {
  std::map<ActionId, std::size_t> out;
  for (const auto& [id, attrs] : nodes_) out.emplace(id, 0);
  for (const auto& [from, to] : edges_) ++out[to];
  return out;
}

TypedTemporalGraph TypedTemporalGraph::induced(const std::set<ActionId>& keep) const {
  TypedTemporalGraph out;
  out.type_set_ = type_set_;
  for (const auto& [id, attrs] : nodes_) {
    if (keep.count(id)) out.nodes_.emplace(id, attrs);
  }
  for (const auto& e : edges_) {
    if (keep.count(e.first) && keep.count(e.second)) out.edges_.insert(e);
  }
  return out;
}

bool is_extension(const TypedTemporalGraph& g, const TypedTemporalGraph& g2) {
  for (const auto& [id, attrs] : g.nodes()) {
    auto it = g2.nodes().find(id);
    if (it == g2.nodes().end() || !(it->second == attrs)) return false;
  }
  for (const auto& e : g.edges()) {
    if (!g2.edges().count(e)) return false;
  }
  return true;
}

bool is_trivial(const TypedTemporalGraph& g) { return g.size() == 1 && g.edges().empty(); }

}  // namespace cteg
