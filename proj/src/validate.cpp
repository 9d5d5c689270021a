#include "cteg/validate.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace cteg {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MissingRoot: return "missing-root";
    case ViolationKind::EdgeIntoRoot: return "edge-into-root";
    case ViolationKind::InDegree: return "in-degree";
    case ViolationKind::Unreachable: return "unreachable";
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::NonStrictTimestamp: return "non-strict-timestamp";
  }
  return "unknown";
}

bool Diagnostics::has(ViolationKind kind) const {
  return std::any_of(violations_.begin(), violations_.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string Diagnostics::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations_) os << cteg::to_string(v.kind) << ": " << v.message << '\n';
  return os.str();
}

namespace {

std::string edge_text(const Edge& e) {
  return "(" + e.first.to_hex() + ", " + e.second.to_hex() + ")";
}

// Nodes lying on some directed cycle. Kahn's algorithm first; only the
// residue (nodes on or downstream of a cycle) gets the quadratic check.
std::vector<ActionId> cycle_nodes(const TypedTemporalGraph& g) {
  auto indeg = g.in_degrees();
  std::deque<ActionId> ready;
  for (const auto& [id, d] : indeg) {
    if (d == 0) ready.push_back(id);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    ActionId n = ready.front();
    ready.pop_front();
    ++removed;
    for (ActionId s : g.successors(n)) {
      if (--indeg[s] == 0) ready.push_back(s);
    }
  }
  std::vector<ActionId> out;
  if (removed == g.size()) return out;

  for (const auto& [start, d] : indeg) {
    if (d == 0) continue;
    // start is on a cycle iff it is reachable from itself.
    std::set<ActionId> seen;
    std::vector<ActionId> stack = g.successors(start);
    bool found = false;
    while (!stack.empty() && !found) {
      ActionId n = stack.back();
      stack.pop_back();
      if (n == start) found = true;
      if (!seen.insert(n).second) continue;
      for (ActionId s : g.successors(n)) stack.push_back(s);
    }
    if (found) out.push_back(start);
  }
  return out;
}

}  // namespace

Diagnostics validate_causal_graph(const TypedTemporalGraph& g, ActionId root) {
  Diagnostics diag;
  if (!g.contains(root)) {
    diag.add({ViolationKind::MissingRoot, root, std::nullopt,
              "root " + root.to_hex() + " is not a node of the graph"});
    return diag;
  }

  for (const auto& e : g.edges()) {
    if (e.second == root) {
      diag.add({ViolationKind::EdgeIntoRoot, root, e, "edge " + edge_text(e) + " enters the root"});
    }
  }

  for (const auto& [id, d] : g.in_degrees()) {
    if (id == root || d == 1) continue;
    diag.add({ViolationKind::InDegree, id, std::nullopt,
              "node " + id.to_hex() + " has in-degree " + std::to_string(d) + ", expected 1"});
  }

  auto on_cycle = cycle_nodes(g);
  if (!on_cycle.empty()) {
    std::string msg = "directed cycle through";
    for (ActionId n : on_cycle) msg += " " + n.to_hex();
    diag.add({ViolationKind::Cycle, on_cycle.front(), std::nullopt, msg});
  }

  std::set<ActionId> reached{root};
  std::vector<ActionId> stack{root};
  while (!stack.empty()) {
    ActionId n = stack.back();
    stack.pop_back();
    for (ActionId s : g.successors(n)) {
      if (reached.insert(s).second) stack.push_back(s);
    }
  }
  for (const auto& [id, attrs] : g.nodes()) {
    if (!reached.count(id)) {
      diag.add({ViolationKind::Unreachable, id, std::nullopt,
                "node " + id.to_hex() + " is not reachable from root " + root.to_hex()});
    }
  }
  return diag;
}

Diagnostics validate_cteg(const TypedTemporalGraph& g, ActionId root) {
  Diagnostics diag = validate_causal_graph(g, root);
  for (const auto& e : g.edges()) {
    Timestamp tm = g.time(e.first);
    Timestamp tn = g.time(e.second);
    if (!(tm < tn)) {
      diag.add({ViolationKind::NonStrictTimestamp, std::nullopt, e,
                "edge " + edge_text(e) + " has t=" + std::to_string(tm.micros) +
                    " >= " + std::to_string(tn.micros)});
    }
  }
  return diag;
}

}  // namespace cteg
