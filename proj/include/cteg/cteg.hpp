#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "cteg/graph.hpp"
#include "cteg/validate.hpp"

namespace cteg {

class ExecutionSequence;

/// Causal-temporal event graph: a typed temporal graph that is an
/// arborescence rooted at `root()` with timestamps strictly increasing along
/// every edge. Instances are immutable and always valid.
class Cteg {
 public:
  /// Validates and wraps. Throws InvalidCtegError carrying the diagnostics.
  static Cteg make(TypedTemporalGraph graph, ActionId root);
  /// The single-node graph {root}.
  static Cteg trivial(ActionId root, Timestamp time, EventType type, Payload payload = {});

  const TypedTemporalGraph& graph() const { return graph_; }
  ActionId root() const { return root_; }
  std::size_t size() const { return graph_.size(); }
  bool contains(ActionId id) const { return graph_.contains(id); }
  Timestamp time(ActionId id) const { return graph_.time(id); }

  /// Unique causal parent; nullopt for the root. Throws UnknownNodeError.
  std::optional<ActionId> parent(ActionId id) const;
  /// Children in canonical (timestamp, ActionId) order.
  std::vector<ActionId> children(ActionId id) const;

  friend Cteg graft_cteg(const Cteg& c1, ActionId p, const Cteg& c2);

  friend bool operator==(const Cteg& a, const Cteg& b) {
    return a.root_ == b.root_ && a.graph_ == b.graph_;
  }

 private:
  Cteg(TypedTemporalGraph graph, ActionId root, std::map<ActionId, ActionId> parents);

  TypedTemporalGraph graph_;
  ActionId root_;
  std::map<ActionId, ActionId> parent_;
};

/// The unique directed path root, ..., n. Throws UnknownNodeError.
std::vector<ActionId> causal_path(const Cteg& c, ActionId n);

/// g1 ⊕_p (g2, r2): union of two node-disjoint graphs plus the edge (p, r2).
/// Throws UnknownNodeError if p ∉ g1 or r2 ∉ g2, DisjointnessError on overlap.
TypedTemporalGraph graft(const TypedTemporalGraph& g1, ActionId p, const TypedTemporalGraph& g2,
                         ActionId r2);

/// Grafts c2 under p. The result is a CTEG rooted at root(c1) over the union
/// of both type sets iff t1(p) < t2(root(c2)); otherwise CompatibilityError.
Cteg graft_cteg(const Cteg& c1, ActionId p, const Cteg& c2);

/// Nodes ordered by (timestamp, ActionId). Parents precede children.
std::vector<ActionId> temporal_projection(const Cteg& c);

/// Edge count of the longest root-to-leaf path.
std::size_t height(const Cteg& c);

/// Rebuilds `c` from its root by single-node emissions in temporal
/// projection order. The final element equals `c`.
ExecutionSequence e0_normalize(const Cteg& c);

}  // namespace cteg
