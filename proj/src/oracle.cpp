#include "cteg/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cteg/dynamics.hpp"
#include "cteg/errors.hpp"
#include "cteg/trace_format.hpp"

namespace cteg {

UniverseBounds UniverseBounds::make(std::size_t actions, std::size_t timestamps, std::size_t types,
                                    std::size_t max_len) {
  UniverseBounds b;
  for (std::size_t i = 0; i < actions; ++i) b.actions.push_back(ActionId::from_u64(0, i + 1));
  for (std::size_t i = 0; i < timestamps; ++i) b.timestamps.push_back(Timestamp{static_cast<std::int64_t>(i)});
  for (std::size_t i = 0; i < types; ++i) b.types.emplace_back("t" + std::to_string(i));
  b.max_len = max_len;
  return b;
}

void UniverseBounds::validate() const {
  if (actions.empty() || timestamps.empty() || types.empty()) {
    throw std::invalid_argument("bounds admit no trivial graph: actions, timestamps and types must be non-empty");
  }
  if (actions.size() > kMaxUniverseActions) {
    throw std::invalid_argument("at most " + std::to_string(kMaxUniverseActions) + " actions supported");
  }
  if (timestamps.size() > 255 || types.size() > 255) {
    throw std::invalid_argument("at most 255 timestamps and 255 types supported");
  }
  if (max_len < 1) throw std::invalid_argument("max_len must be at least 1");
  if (max_step_emit < 1) throw std::invalid_argument("max_step_emit must be at least 1");
  if (std::set<ActionId>(actions.begin(), actions.end()).size() != actions.size()) {
    throw std::invalid_argument("actions must be distinct");
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i - 1] < timestamps[i])) throw std::invalid_argument("timestamps must be strictly ascending");
  }
}

void Budget::charge(std::uint64_t n) {
  used_ += n;
  if (used_ > limit_) {
    throw BudgetExceededError("state budget of " + std::to_string(limit_) + " exceeded");
  }
}

namespace {

using Mask = std::uint16_t;

std::vector<std::size_t> bits_of(Mask m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; m; ++i, m >>= 1) {
    if (m & 1u) out.push_back(i);
  }
  return out;
}

std::size_t in_degree(const BoundedGraph& g, std::size_t i) {
  std::size_t d = 0;
  for (std::size_t j : bits_of(g.nodes)) d += (g.out[j] >> i) & 1u;
  return d;
}

// Copies `src` into `dst` with node i of src becoming node map[i].
void relabel_into(const BoundedGraph& src, const std::vector<std::size_t>& map, BoundedGraph& dst) {
  for (std::size_t i : bits_of(src.nodes)) {
    const std::size_t to = map[i];
    dst.nodes |= static_cast<Mask>(1u << to);
    dst.time[to] = src.time[i];
    dst.type[to] = src.type[i];
    Mask out = 0;
    for (std::size_t j : bits_of(src.out[i])) out |= static_cast<Mask>(1u << map[j]);
    dst.out[to] = out;
  }
}

// Representative of the renaming class of `g`, packed onto nodes 0..k-1.
// Nodes are ordered by an isomorphism-invariant key and only permuted within
// equal-key blocks; the minimum over those orders is canonical.
BoundedGraph canonical_shape(const BoundedGraph& g, Budget* budget) {
  auto nodes = bits_of(g.nodes);
  auto key = [&](std::size_t i) {
    return std::make_tuple(g.time[i], g.type[i], in_degree(g, i), std::popcount(g.out[i]));
  };
  std::sort(nodes.begin(), nodes.end(), [&](std::size_t a, std::size_t b) {
    return std::make_pair(key(a), a) < std::make_pair(key(b), b);
  });
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end)
  for (std::size_t i = 0; i < nodes.size();) {
    std::size_t j = i;
    while (j < nodes.size() && key(nodes[j]) == key(nodes[i])) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }

  std::optional<BoundedGraph> best;
  std::vector<std::size_t> map(kMaxUniverseActions, 0);
  while (true) {
    if (budget) budget->charge();
    for (std::size_t pos = 0; pos < nodes.size(); ++pos) map[nodes[pos]] = pos;
    BoundedGraph candidate;
    relabel_into(g, map, candidate);
    if (!best || candidate < *best) best = candidate;

    std::size_t b = blocks.size();
    bool advanced = false;
    while (b > 0) {
      --b;
      auto first = nodes.begin() + static_cast<std::ptrdiff_t>(blocks[b].first);
      auto last = nodes.begin() + static_cast<std::ptrdiff_t>(blocks[b].second);
      if (std::next_permutation(first, last)) {
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return best.value_or(BoundedGraph{});
}

struct Shape {
  BoundedGraph graph;
  std::size_t size;
  std::vector<std::size_t> sources;  // in-degree-zero nodes
};

class SuccessorEnumerator {
 public:
  SuccessorEnumerator(const UniverseBounds& bounds, std::vector<Shape> shapes, Budget* budget)
      : bounds_(bounds), shapes_(std::move(shapes)), budget_(budget) {
    full_ = static_cast<Mask>((1u << bounds.actions.size()) - 1u);
  }

  const std::vector<BoundedGraph>& successors(const BoundedGraph& g) {
    auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    std::set<BoundedGraph> out;
    for (std::size_t p : bits_of(g.nodes)) {
      emissions(g, p, out);
      invocations(g, p, out);
    }
    if (budget_) budget_->charge(out.size());
    return cache_.emplace(g, std::vector<BoundedGraph>(out.begin(), out.end())).first->second;
  }

 private:
  void emissions(const BoundedGraph& g, std::size_t p, std::set<BoundedGraph>& out) const {
    const Mask free = full_ & static_cast<Mask>(~g.nodes);
    const std::size_t first_time = g.time[p] + 1u;
    if (first_time >= bounds_.timestamps.size()) return;
    const std::size_t n_time = bounds_.timestamps.size() - first_time;
    const std::size_t n_type = bounds_.types.size();
    const std::size_t choices = n_time * n_type;

    // Non-empty submasks of the free set.
    for (Mask sub = free; sub; sub = static_cast<Mask>((sub - 1u) & free)) {
      auto emitted = bits_of(sub);
      if (emitted.size() > bounds_.max_step_emit) continue;
      std::vector<std::size_t> digit(emitted.size(), 0);
      while (true) {
        BoundedGraph next = g;
        next.nodes |= sub;
        next.out[p] |= sub;
        for (std::size_t k = 0; k < emitted.size(); ++k) {
          next.time[emitted[k]] = static_cast<std::uint8_t>(first_time + digit[k] / n_type);
          next.type[emitted[k]] = static_cast<std::uint8_t>(digit[k] % n_type);
        }
        out.insert(next);
        std::size_t k = 0;
        while (k < digit.size() && ++digit[k] == choices) digit[k++] = 0;
        if (k == digit.size()) break;
      }
    }
  }

  void invocations(const BoundedGraph& g, std::size_t p, std::set<BoundedGraph>& out) const {
    const auto free = bits_of(full_ & static_cast<Mask>(~g.nodes));
    for (const Shape& shape : shapes_) {
      if (shape.size > free.size()) continue;
      bool any_source = std::any_of(shape.sources.begin(), shape.sources.end(),
                                    [&](std::size_t q) { return g.time[p] < shape.graph.time[q]; });
      if (!any_source) continue;

      // Ordered selections of shape.size distinct free actions.
      std::vector<std::size_t> map(kMaxUniverseActions, 0);
      std::vector<bool> used(free.size(), false);
      inject(g, p, shape, free, 0, map, used, out);
    }
  }

  void inject(const BoundedGraph& g, std::size_t p, const Shape& shape, const std::vector<std::size_t>& free,
              std::size_t pos, std::vector<std::size_t>& map, std::vector<bool>& used,
              std::set<BoundedGraph>& out) const {
    if (pos == shape.size) {
      BoundedGraph next = g;
      relabel_into(shape.graph, map, next);
      for (std::size_t q : shape.sources) {
        if (!(g.time[p] < shape.graph.time[q])) continue;
        BoundedGraph grafted = next;
        grafted.out[p] |= static_cast<Mask>(1u << map[q]);
        out.insert(grafted);
      }
      return;
    }
    for (std::size_t i = 0; i < free.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      map[pos] = free[i];
      inject(g, p, shape, free, pos + 1, map, used, out);
      used[i] = false;
    }
  }

  const UniverseBounds& bounds_;
  std::vector<Shape> shapes_;
  Budget* budget_;
  Mask full_;
  std::map<BoundedGraph, std::vector<BoundedGraph>> cache_;
};

}  // namespace

SequenceSet phi(const SequenceSet& e, const UniverseBounds& bounds, Budget* budget) {
  bounds.validate();

  std::set<BoundedGraph> distinct_shapes;
  std::set<BoundedGraph> seen_finals;
  for (const auto& seq : e) {
    if (seq.empty() || !seen_finals.insert(seq.back()).second) continue;
    distinct_shapes.insert(canonical_shape(seq.back(), budget));
  }
  std::vector<Shape> shapes;
  for (const auto& s : distinct_shapes) {
    Shape shape{s, static_cast<std::size_t>(std::popcount(s.nodes)), {}};
    for (std::size_t q : bits_of(s.nodes)) {
      if (in_degree(s, q) == 0) shape.sources.push_back(q);
    }
    if (!shape.sources.empty()) shapes.push_back(std::move(shape));
  }

  SuccessorEnumerator enumerator(bounds, std::move(shapes), budget);
  SequenceSet result;
  std::vector<BoundedSequence> frontier;
  for (std::size_t a = 0; a < bounds.actions.size(); ++a) {
    for (std::size_t t = 0; t < bounds.timestamps.size(); ++t) {
      for (std::size_t ty = 0; ty < bounds.types.size(); ++ty) {
        BoundedGraph g;
        g.nodes = static_cast<Mask>(1u << a);
        g.time[a] = static_cast<std::uint8_t>(t);
        g.type[a] = static_cast<std::uint8_t>(ty);
        frontier.push_back({g});
      }
    }
  }
  for (std::size_t len = 1;; ++len) {
    if (budget) budget->charge(frontier.size());
    result.insert(frontier.begin(), frontier.end());
    if (len == bounds.max_len) break;
    std::vector<BoundedSequence> next;
    for (const auto& seq : frontier) {
      for (const auto& succ : enumerator.successors(seq.back())) {
        BoundedSequence extended = seq;
        extended.push_back(succ);
        next.push_back(std::move(extended));
      }
    }
    frontier = std::move(next);
  }
  return result;
}

HierarchyResult hierarchy(const UniverseBounds& bounds, std::size_t d_max, Budget* budget) {
  HierarchyResult result;
  SequenceSet current;
  try {
    for (std::size_t d = 0; d <= d_max; ++d) {
      current = phi(current, bounds, budget);
      result.levels.push_back(current);
    }
  } catch (const BudgetExceededError&) {
    result.budget_exceeded = true;
  }
  return result;
}

std::vector<BoundedGraph> all_bounded_graphs(const UniverseBounds& bounds) {
  bounds.validate();
  const std::size_t n = bounds.actions.size();
  const std::size_t n_time = bounds.timestamps.size();
  const std::size_t n_type = bounds.types.size();
  std::vector<BoundedGraph> out;
  for (Mask nodes = 1; nodes < (1u << n); ++nodes) {
    auto members = bits_of(nodes);
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t a : members) {
      for (std::size_t b : members) {
        if (a != b) slots.emplace_back(a, b);
      }
    }
    const std::size_t labelings = n_time * n_type;
    std::vector<std::size_t> digit(members.size(), 0);
    while (true) {
      for (std::uint64_t edges = 0; edges < (std::uint64_t{1} << slots.size()); ++edges) {
        BoundedGraph g;
        g.nodes = nodes;
        for (std::size_t k = 0; k < members.size(); ++k) {
          g.time[members[k]] = static_cast<std::uint8_t>(digit[k] / n_type);
          g.type[members[k]] = static_cast<std::uint8_t>(digit[k] % n_type);
        }
        for (std::size_t s = 0; s < slots.size(); ++s) {
          if ((edges >> s) & 1u) g.out[slots[s].first] |= static_cast<Mask>(1u << slots[s].second);
        }
        out.push_back(g);
      }
      std::size_t k = 0;
      while (k < digit.size() && ++digit[k] == labelings) digit[k++] = 0;
      if (k == digit.size()) break;
    }
  }
  return out;
}

TypedTemporalGraph to_graph(const BoundedGraph& g, const UniverseBounds& bounds) {
  TypedTemporalGraph out;
  for (const auto& t : bounds.types) out.declare_type(t);
  for (std::size_t i : bits_of(g.nodes)) {
    out.add_node(bounds.actions.at(i), bounds.timestamps.at(g.time[i]), bounds.types.at(g.type[i]));
  }
  for (std::size_t i : bits_of(g.nodes)) {
    for (std::size_t j : bits_of(g.out[i])) out.add_edge(bounds.actions[i], bounds.actions[j]);
  }
  return out;
}

BoundedGraph from_graph(const TypedTemporalGraph& g, const UniverseBounds& bounds) {
  auto index_of = [](const auto& list, const auto& value, const char* what) {
    auto it = std::find(list.begin(), list.end(), value);
    if (it == list.end()) throw std::invalid_argument(std::string(what) + " outside the universe");
    return static_cast<std::size_t>(it - list.begin());
  };
  BoundedGraph out;
  for (const auto& [id, attrs] : g.nodes()) {
    if (!attrs.payload.empty()) throw std::invalid_argument("bounded graphs carry no payloads");
    std::size_t i = index_of(bounds.actions, id, "action");
    out.nodes |= static_cast<Mask>(1u << i);
    out.time[i] = static_cast<std::uint8_t>(index_of(bounds.timestamps, attrs.time, "timestamp"));
    out.type[i] = static_cast<std::uint8_t>(index_of(bounds.types, attrs.type, "type"));
  }
  for (const auto& [from, to] : g.edges()) {
    out.out[index_of(bounds.actions, from, "action")] |=
        static_cast<Mask>(1u << index_of(bounds.actions, to, "action"));
  }
  return out;
}

ExecutionSequence to_execution_sequence(const BoundedSequence& seq, const UniverseBounds& bounds) {
  if (seq.empty()) throw std::invalid_argument("empty bounded sequence");
  ExecutionSequence out(to_graph(seq.front(), bounds));
  for (std::size_t k = 1; k < seq.size(); ++k) {
    TypedTemporalGraph prev = out.final_graph();
    TypedTemporalGraph next = to_graph(seq[k], bounds);
    if (auto em = is_emission_step(prev, next)) {
      out.push(EmissionStep{em->root, em->emitted}, std::move(next));
    } else if (auto inv = is_invocation_step(prev, next)) {
      auto sub = std::make_shared<const ExecutionSequence>(inv->grafted);
      out.push(InvocationStep{inv->root, std::move(sub), inv->attach}, std::move(next));
    } else {
      throw InvalidStepError("step " + std::to_string(k - 1) + " is neither an emission nor a graft");
    }
  }
  return out;
}

BoundedSequence from_execution_sequence(const ExecutionSequence& seq, const UniverseBounds& bounds) {
  BoundedSequence out;
  for (const auto& g : seq.graphs()) out.push_back(from_graph(g, bounds));
  return out;
}

std::string canonical_listing(const SequenceSet& set, const UniverseBounds& bounds) {
  std::ostringstream os;
  for (const auto& seq : set) {
    for (std::size_t k = 0; k < seq.size(); ++k) {
      if (k) os << " | ";
      os << canonical_graph_text(to_graph(seq[k], bounds));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cteg
