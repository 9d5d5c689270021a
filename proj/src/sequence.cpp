#include "cteg/sequence.hpp"

#include "cteg/errors.hpp"

namespace cteg {

ExecutionSequence::ExecutionSequence(TypedTemporalGraph initial) {
  graphs_.push_back(std::move(initial));
}

void ExecutionSequence::push(StepLabel label, TypedTemporalGraph next) {
  if (!is_extension(graphs_.back(), next)) {
    throw InvalidStepError("step " + std::to_string(steps_.size()) +
                           " does not extend the previous graph");
  }
  steps_.push_back(std::move(label));
  graphs_.push_back(std::move(next));
}

ExecutionSequence ExecutionSequence::prefix(std::size_t length) const {
  if (length == 0 || length > graphs_.size()) {
    throw std::out_of_range("prefix length " + std::to_string(length) + " out of range");
  }
  ExecutionSequence out(graphs_.front());
  for (std::size_t i = 1; i < length; ++i) {
    out.steps_.push_back(steps_[i - 1]);
    out.graphs_.push_back(graphs_[i]);
  }
  return out;
}

}  // namespace cteg
