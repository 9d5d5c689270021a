#include "cteg/dynamics.hpp"

#include <memory>

#include "cteg/errors.hpp"

namespace cteg {

TypedTemporalGraph apply_emission(const TypedTemporalGraph& g, ActionId p,
                                  const std::map<ActionId, NewNode>& emitted) {
  if (!g.contains(p)) throw UnknownNodeError("emission root " + p.to_hex() + " is not a node");
  if (emitted.empty()) throw InvalidStepError("emission set is empty");
  const Timestamp tp = g.time(p);
  for (const auto& [id, node] : emitted) {
    if (g.contains(id)) throw DisjointnessError("emitted node " + id.to_hex() + " already exists");
    if (!(tp < node.time)) {
      throw InvalidStepError("emitted node " + id.to_hex() + " has t=" +
                             std::to_string(node.time.micros) + " not after its parent's t=" +
                             std::to_string(tp.micros));
    }
  }
  TypedTemporalGraph out = g;
  for (const auto& [id, node] : emitted) {
    out.add_node(id, node.time, node.type, node.payload);
    out.add_edge(p, id);
  }
  return out;
}

TypedTemporalGraph apply_invocation(const TypedTemporalGraph& g, ActionId p,
                                    const ExecutionSequence& subtrace,
                                    std::optional<ActionId> attach) {
  const TypedTemporalGraph& h = subtrace.final_graph();
  if (!g.contains(p)) throw UnknownNodeError("invocation root " + p.to_hex() + " is not a node");
  for (const auto& [id, attrs] : h.nodes()) {
    if (g.contains(id)) throw DisjointnessError("subtrace node " + id.to_hex() + " already exists");
  }

  ActionId q;
  if (attach) {
    if (!h.contains(*attach)) throw InvalidStepError("attach node " + attach->to_hex() + " is not in the subtrace");
    if (h.in_degree(*attach) != 0) throw InvalidStepError("attach node " + attach->to_hex() + " has incoming edges");
    q = *attach;
  } else {
    std::vector<ActionId> sources;
    for (const auto& [id, d] : h.in_degrees()) {
      if (d == 0) sources.push_back(id);
    }
    if (sources.size() != 1) {
      throw InvalidStepError("subtrace final graph has " + std::to_string(sources.size()) +
                             " in-degree-zero nodes; an attach node must be named");
    }
    q = sources.front();
  }

  if (!(g.time(p) < h.time(q))) {
    throw CompatibilityError("invocation at " + p.to_hex() + " needs t(p)=" +
                             std::to_string(g.time(p).micros) + " < t(q)=" +
                             std::to_string(h.time(q).micros));
  }
  return graft(g, p, h, q);
}

namespace {

struct Delta {
  std::set<ActionId> nodes;
  std::vector<Edge> edges;
};

std::optional<Delta> delta_of(const TypedTemporalGraph& g, const TypedTemporalGraph& g2) {
  if (!is_extension(g, g2)) return std::nullopt;
  Delta d;
  for (const auto& [id, attrs] : g2.nodes()) {
    if (!g.contains(id)) d.nodes.insert(id);
  }
  if (d.nodes.empty()) return std::nullopt;
  for (const auto& e : g2.edges()) {
    if (!g.edges().count(e)) d.edges.push_back(e);
  }
  return d;
}

}  // namespace

std::optional<EmissionWitness> is_emission_step(const TypedTemporalGraph& g,
                                                const TypedTemporalGraph& g2) {
  auto delta = delta_of(g, g2);
  if (!delta || delta->edges.size() != delta->nodes.size()) return std::nullopt;

  const ActionId p = delta->edges.front().first;
  if (!g.contains(p)) return std::nullopt;
  std::set<ActionId> hit;
  for (const auto& [from, to] : delta->edges) {
    if (from != p || !delta->nodes.count(to) || !hit.insert(to).second) return std::nullopt;
    if (!(g.time(p) < g2.time(to))) return std::nullopt;
  }
  return EmissionWitness{p, std::move(delta->nodes)};
}

std::optional<InvocationWitness> is_invocation_step(const TypedTemporalGraph& g,
                                                    const TypedTemporalGraph& g2) {
  auto delta = delta_of(g, g2);
  if (!delta) return std::nullopt;

  std::optional<Edge> crossing;
  for (const auto& e : delta->edges) {
    if (!delta->nodes.count(e.second)) return std::nullopt;  // new edge into an old node
    if (delta->nodes.count(e.first)) continue;
    if (crossing) return std::nullopt;
    crossing = e;
  }
  if (!crossing) return std::nullopt;

  const auto [p, q] = *crossing;
  TypedTemporalGraph h = g2.induced(delta->nodes);
  if (h.in_degree(q) != 0) return std::nullopt;
  if (!(g.time(p) < g2.time(q))) return std::nullopt;
  return InvocationWitness{p, std::move(h), q};
}

MembershipResult is_member_e_infinity(const ExecutionSequence& seq) {
  MembershipResult result;
  result.member = true;
  if (!is_trivial(seq.initial())) {
    result.member = false;
    result.diagnostics.push_back("initial graph is not a single root without edges");
  }
  const auto& graphs = seq.graphs();
  for (std::size_t k = 0; k + 1 < graphs.size(); ++k) {
    if (is_emission_step(graphs[k], graphs[k + 1])) continue;
    auto inv = is_invocation_step(graphs[k], graphs[k + 1]);
    if (!inv) {
      result.member = false;
      result.diagnostics.push_back("step " + std::to_string(k) +
                                   ": neither a direct emission nor a graft");
      continue;
    }
    Diagnostics diag = validate_cteg(inv->grafted, inv->attach);
    if (!diag.ok()) {
      result.member = false;
      result.diagnostics.push_back("step " + std::to_string(k) + ": grafted subgraph is not a CTEG:\n" +
                                   diag.to_string());
    }
  }
  return result;
}

InvocationStep replicate_as_e0_invocation(const InvocationStep& step) {
  if (!step.subtrace) throw InvalidStepError("invocation step has no subtrace");
  Cteg h = Cteg::make(step.subtrace->final_graph(), step.attach);
  return InvocationStep{step.root, std::make_shared<const ExecutionSequence>(e0_normalize(h)),
                        step.attach};
}

}  // namespace cteg
