#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cteg/graph.hpp"

namespace cteg {

enum class ViolationKind {
  MissingRoot,         // root is not a node of the graph
  EdgeIntoRoot,        // root has an incoming edge
  InDegree,            // non-root node without exactly one incoming edge
  Unreachable,         // non-root node not reachable from the root
  Cycle,               // node lies on a directed cycle
  NonStrictTimestamp,  // edge (m, n) with t(m) >= t(n)
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::optional<ActionId> node;
  std::optional<Edge> edge;
  std::string message;
};

/// Result of a validation pass. Empty means valid.
class Diagnostics {
 public:
  bool ok() const { return violations_.empty(); }
  explicit operator bool() const { return ok(); }

  const std::vector<Violation>& violations() const { return violations_; }
  bool has(ViolationKind kind) const;
  /// One violation per line.
  std::string to_string() const;

  void add(Violation v) { violations_.push_back(std::move(v)); }

 private:
  std::vector<Violation> violations_;
};

/// Checks that `g` is an arborescence rooted at `root`: no edge into the
/// root, in-degree exactly one elsewhere, everything reachable, acyclic.
/// Never throws; every problem is reported.
Diagnostics validate_causal_graph(const TypedTemporalGraph& g, ActionId root);

/// validate_causal_graph plus t(m) < t(n) on every edge.
Diagnostics validate_cteg(const TypedTemporalGraph& g, ActionId root);

}  // namespace cteg
