#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cteg/cteg.hpp"
#include "cteg/sequence.hpp"

namespace cteg {

struct SimulationConfig {
  std::uint64_t seed = 1;
  std::size_t max_depth = 2;
  std::size_t branching = 2;  // max events per emission
  std::size_t steps = 6;      // scripted steps per agent
  double fail_prob = 0.0;     // chance that a subagent fails part-way
  std::vector<EventType> types{EventType("step")};

  /// Throws std::invalid_argument.
  void validate() const;
};

struct SimulationResult {
  Cteg trace;
  SessionId session;
  std::size_t invocations = 0;
  std::size_t failures = 0;
  std::optional<ExecutionSequence> history;  // root session, when requested
};

/// Scripted recursive agent run on a deterministic clock. Each agent takes
/// `steps` actions, each either an emission of 1..branching events or, below
/// max_depth, a subagent invocation. A failing subagent stops early and its
/// partial trace is grafted. Identical configs give identical results.
SimulationResult simulate(const SimulationConfig& config, bool record_history = false);

}  // namespace cteg
