#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <variant>
#include <vector>

#include "cteg/graph.hpp"

namespace cteg {

class ExecutionSequence;

/// Direct emission of `emitted` (non-empty) under `root`.
struct EmissionStep {
  ActionId root;
  std::set<ActionId> emitted;
};

/// Graft of the final graph of `subtrace` at `root`, attached through the
/// in-degree-zero node `attach` of that final graph.
struct InvocationStep {
  ActionId root;
  std::shared_ptr<const ExecutionSequence> subtrace;
  ActionId attach;
};

using StepLabel = std::variant<EmissionStep, InvocationStep>;

/// A finite chain G0 ⊑ G1 ⊑ ... ⊑ Gn of typed temporal graphs together with
/// the step label that produced each successor.
class ExecutionSequence {
 public:
  explicit ExecutionSequence(TypedTemporalGraph initial);

  /// Appends `next` produced by `label`. Throws InvalidStepError unless the
  /// current final graph ⊑ `next`. The label itself is not re-checked.
  void push(StepLabel label, TypedTemporalGraph next);

  const std::vector<TypedTemporalGraph>& graphs() const { return graphs_; }
  const std::vector<StepLabel>& steps() const { return steps_; }
  const TypedTemporalGraph& initial() const { return graphs_.front(); }
  const TypedTemporalGraph& final_graph() const { return graphs_.back(); }
  std::size_t size() const { return graphs_.size(); }

  /// Prefix made of the first `length` graphs (1 <= length <= size()).
  ExecutionSequence prefix(std::size_t length) const;

 private:
  std::vector<TypedTemporalGraph> graphs_;
  std::vector<StepLabel> steps_;
};

}  // namespace cteg
