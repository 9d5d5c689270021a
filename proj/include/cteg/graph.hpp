#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cteg/types.hpp"

namespace cteg {

struct NodeAttrs {
  Timestamp time;
  EventType type;
  Payload payload;

  friend bool operator==(const NodeAttrs&, const NodeAttrs&) = default;
};

using Edge = std::pair<ActionId, ActionId>;

/// Directed graph over actions carrying a timestamp, a type and an opaque
/// payload per node. No rootedness or temporal compatibility is assumed.
///
/// Construction-time invariants: edge endpoints are nodes, there are no
/// self-loops, every node type is in the declared type set.
class TypedTemporalGraph {
 public:
  TypedTemporalGraph() = default;

  /// Adds a node and declares its type. Throws DisjointnessError if present.
  void add_node(ActionId id, Timestamp time, EventType type, Payload payload = {});
  /// Throws UnknownNodeError for a missing endpoint, InvalidGraphError for a self-loop.
  void add_edge(ActionId from, ActionId to);
  void declare_type(EventType type);

  bool contains(ActionId id) const { return nodes_.count(id) != 0; }
  bool has_edge(ActionId from, ActionId to) const { return edges_.count({from, to}) != 0; }

  /// Throws UnknownNodeError.
  const NodeAttrs& node(ActionId id) const;
  Timestamp time(ActionId id) const { return node(id).time; }
  const EventType& type(ActionId id) const { return node(id).type; }

  const std::map<ActionId, NodeAttrs>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  const std::set<EventType>& type_set() const { return type_set_; }

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// Out-neighbours in ActionId order.
  std::vector<ActionId> successors(ActionId id) const;
  std::size_t in_degree(ActionId id) const;
  /// In-degree of every node, including zeros.
  std::map<ActionId, std::size_t> in_degrees() const;

  /// Subgraph induced by `keep` (declared types are carried over).
  TypedTemporalGraph induced(const std::set<ActionId>& keep) const;

  friend bool operator==(const TypedTemporalGraph&, const TypedTemporalGraph&) = default;

 private:
  std::map<ActionId, NodeAttrs> nodes_;
  std::set<Edge> edges_;
  std::set<EventType> type_set_;
};

/// G ⊑ G': nodes and edges of `g` are in `g2` and node attributes agree on `g`.
bool is_extension(const TypedTemporalGraph& g, const TypedTemporalGraph& g2);

/// Single node, no edges.
bool is_trivial(const TypedTemporalGraph& g);

}  // namespace cteg
