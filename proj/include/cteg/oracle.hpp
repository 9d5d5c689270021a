#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "cteg/graph.hpp"
#include "cteg/sequence.hpp"

// Bounded-universe enumeration of the execution hierarchy.
//
// Everything here is relative to a finite universe: a pool of actions, an
// ascending list of timestamps, a type set, a maximum sequence length (in
// graphs) and a cap on how many nodes one emission may introduce. Graphs are
// stored as bitmasks over the action pool so that whole sets of sequences can
// be compared exactly.

namespace cteg {

inline constexpr std::size_t kMaxUniverseActions = 16;

struct UniverseBounds {
  std::vector<ActionId> actions;
  std::vector<Timestamp> timestamps;  // strictly ascending
  std::vector<EventType> types;
  std::size_t max_len = 1;
  std::size_t max_step_emit = kMaxUniverseActions;

  /// Actions 1..n, timestamps 0..n-1, types "t0".."t{n-1}".
  static UniverseBounds make(std::size_t actions, std::size_t timestamps, std::size_t types,
                             std::size_t max_len);

  /// Throws std::invalid_argument when no trivial graph fits or limits are exceeded.
  void validate() const;
};

/// Typed temporal graph over the universe. Node i is bounds.actions[i];
/// `time` and `type` index into the bounds. Unused slots stay zero.
struct BoundedGraph {
  std::uint16_t nodes = 0;
  std::array<std::uint16_t, kMaxUniverseActions> out{};
  std::array<std::uint8_t, kMaxUniverseActions> time{};
  std::array<std::uint8_t, kMaxUniverseActions> type{};

  bool has(std::size_t i) const { return (nodes >> i) & 1u; }

  friend auto operator<=>(const BoundedGraph&, const BoundedGraph&) = default;
};

using BoundedSequence = std::vector<BoundedGraph>;
using SequenceSet = std::set<BoundedSequence>;

/// Caps the number of states an enumeration may touch.
class Budget {
 public:
  explicit Budget(std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()) : limit_(limit) {}

  /// Throws BudgetExceededError once the running total passes the limit.
  void charge(std::uint64_t n = 1);
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

/// All bounded sequences that start at a trivial root and advance by direct
/// emissions or by grafting the final graph of a member of `e` (renamed
/// injectively onto unused actions) through one of its in-degree-zero nodes.
SequenceSet phi(const SequenceSet& e, const UniverseBounds& bounds, Budget* budget = nullptr);

struct HierarchyResult {
  std::vector<SequenceSet> levels;  // levels[d] = E_d within bounds
  bool budget_exceeded = false;
};

/// Iterates phi from the empty set d_max + 1 times. Stops early, keeping the
/// completed levels, if the budget runs out.
HierarchyResult hierarchy(const UniverseBounds& bounds, std::size_t d_max, Budget* budget = nullptr);

/// Every bounded typed temporal graph (any edge set without self-loops).
std::vector<BoundedGraph> all_bounded_graphs(const UniverseBounds& bounds);

TypedTemporalGraph to_graph(const BoundedGraph& g, const UniverseBounds& bounds);
/// Throws std::invalid_argument if `g` does not fit the universe or carries payloads.
BoundedGraph from_graph(const TypedTemporalGraph& g, const UniverseBounds& bounds);

/// Lifts a bounded sequence, reconstructing step labels by delta analysis.
/// Invocation labels carry a one-graph subtrace holding the grafted part.
ExecutionSequence to_execution_sequence(const BoundedSequence& seq, const UniverseBounds& bounds);
BoundedSequence from_execution_sequence(const ExecutionSequence& seq, const UniverseBounds& bounds);

/// One sequence per line, graphs in canonical text separated by " | ".
std::string canonical_listing(const SequenceSet& set, const UniverseBounds& bounds);

}  // namespace cteg
