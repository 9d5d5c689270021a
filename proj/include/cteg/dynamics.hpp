#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cteg/cteg.hpp"
#include "cteg/sequence.hpp"

namespace cteg {

/// Attributes of a node introduced by an emission.
struct NewNode {
  Timestamp time;
  EventType type;
  Payload payload{};
};

/// g ⊕_p A: adds every key of `emitted` as a child of `p`.
///
/// Throws InvalidStepError for an empty emission or t(p) >= t'(a),
/// UnknownNodeError if p ∉ g and DisjointnessError on an id collision.
TypedTemporalGraph apply_emission(const TypedTemporalGraph& g, ActionId p,
                                  const std::map<ActionId, NewNode>& emitted);

/// g ⊕_p (H, q) where H is the final graph of `subtrace`. Only that final
/// graph is consulted. `attach` picks q; when omitted, H must have exactly
/// one in-degree-zero node.
///
/// Throws DisjointnessError, InvalidStepError (no usable attach node) or
/// CompatibilityError when t(p) >= t_H(q).
TypedTemporalGraph apply_invocation(const TypedTemporalGraph& g, ActionId p,
                                    const ExecutionSequence& subtrace,
                                    std::optional<ActionId> attach = std::nullopt);

struct EmissionWitness {
  ActionId root;
  std::set<ActionId> emitted;
};

struct InvocationWitness {
  ActionId root;
  TypedTemporalGraph grafted;  // induced subgraph on the new nodes
  ActionId attach;
};

/// Delta analysis: g2 arises from g by a single direct emission.
std::optional<EmissionWitness> is_emission_step(const TypedTemporalGraph& g,
                                                const TypedTemporalGraph& g2);

/// Delta analysis: the new nodes D form a graph attached to g by exactly one
/// crossing edge (p, q), q has in-degree zero inside D and t(p) < t(q).
/// Whether D is itself a CTEG is not checked here.
std::optional<InvocationWitness> is_invocation_step(const TypedTemporalGraph& g,
                                                    const TypedTemporalGraph& g2);

struct MembershipResult {
  bool member = false;
  std::vector<std::string> diagnostics;

  explicit operator bool() const { return member; }
};

/// Decides membership in the recursive closure of emissions and invocations
/// from a trivial root, without consulting step labels. Each step must be an
/// emission or graft a delta that is a valid CTEG rooted at the attach node.
MembershipResult is_member_e_infinity(const ExecutionSequence& seq);

/// Same root and attach node, subtrace replaced by the emission-only
/// reconstruction of its final graph. Throws InvalidCtegError if that final
/// graph is not a CTEG rooted at `attach`.
InvocationStep replicate_as_e0_invocation(const InvocationStep& step);

}  // namespace cteg
