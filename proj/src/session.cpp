#include "cteg/session.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "cteg/dynamics.hpp"
#include "cteg/errors.hpp"

namespace cteg {

std::int64_t SystemClock::now_micros() {
  using namespace std::chrono;
  return duration_cast<microseconds>(system_clock::now().time_since_epoch()).count();
}

SessionEnv SessionEnv::system() {
  return {std::make_shared<SystemClock>(), std::make_shared<IdGenerator>()};
}

SessionEnv SessionEnv::deterministic(std::uint64_t seed, std::int64_t start) {
  return {std::make_shared<ManualClock>(start), std::make_shared<IdGenerator>(seed)};
}

Session::Session(SessionEnv env, SessionId id, Cteg trace, std::optional<Timestamp> lower_bound,
                 bool record_history)
    : env_(std::move(env)),
      id_(id),
      root_(trace.root()),
      lower_bound_(lower_bound),
      last_issued_(trace.time(trace.root()).micros),
      trace_(std::move(trace)),
      mutex_(std::make_unique<std::mutex>()) {
  if (record_history) history_.emplace(trace_.graph());
}

Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;
Session::~Session() = default;

Session Session::begin(SessionEnv env, EventType root_type, Payload payload,
                       std::optional<Timestamp> lower_bound, bool record_history) {
  std::int64_t t = env.clock->now_micros();
  if (lower_bound) t = std::max(t, lower_bound->micros + 1);
  ActionId root = env.ids->next_action();
  SessionId id = env.ids->next_session();
  Cteg trace = Cteg::trivial(root, Timestamp{t}, std::move(root_type), std::move(payload));
  return Session(std::move(env), id, std::move(trace), lower_bound, record_history);
}

SessionStatus Session::status() const {
  std::lock_guard lock(*mutex_);
  return status_;
}

void Session::require_active() const {
  if (status_ != SessionStatus::Active) throw SessionStateError("session " + id_.to_hex() + " is not active");
}

Timestamp Session::issue(Timestamp after) {
  std::int64_t t = std::max({env_.clock->now_micros(), last_issued_ + 1, after.micros + 1});
  if (lower_bound_) t = std::max(t, lower_bound_->micros + 1);
  last_issued_ = t;
  return Timestamp{t};
}

std::vector<ActionId> Session::emit(ActionId parent, const std::vector<Event>& events) {
  std::lock_guard lock(*mutex_);
  require_active();
  if (!trace_.contains(parent)) throw UnknownNodeError("unknown parent " + parent.to_hex());
  if (events.empty()) throw InvalidStepError("emission needs at least one event");

  std::vector<ActionId> ids;
  std::map<ActionId, NewNode> emitted;
  const Timestamp tp = trace_.time(parent);
  for (const auto& ev : events) {
    ActionId id = env_.ids->next_action();
    while (trace_.contains(id) || emitted.count(id)) id = env_.ids->next_action();
    ids.push_back(id);
    emitted.emplace(id, NewNode{issue(tp), ev.type, ev.payload});
  }
  TypedTemporalGraph next = apply_emission(trace_.graph(), parent, emitted);
  if (history_) history_->push(EmissionStep{parent, {ids.begin(), ids.end()}}, next);
  trace_ = Cteg::make(std::move(next), root_);
  return ids;
}

std::pair<SubagentHandle, Session> Session::invoke_subagent(ActionId parent, EventType root_type,
                                                            Payload payload) {
  std::lock_guard lock(*mutex_);
  require_active();
  if (!trace_.contains(parent)) throw UnknownNodeError("unknown parent " + parent.to_hex());
  Session child = Session::begin(env_, std::move(root_type), std::move(payload), trace_.time(parent),
                                 history_.has_value());
  outstanding_.emplace(child.id(), parent);
  return {SubagentHandle{parent, child.id()}, std::move(child)};
}

void Session::complete_subagent(const SubagentHandle& h, Session& child) {
  finish_subagent(h, child, SessionStatus::Completed, true);
}

void Session::fail_subagent(const SubagentHandle& h, Session& child, FailurePolicy policy) {
  finish_subagent(h, child, SessionStatus::Failed, policy == FailurePolicy::GraftPartial);
}

void Session::finish_subagent(const SubagentHandle& h, Session& child, SessionStatus final_status,
                              bool graft) {
  if (&child == this) throw SessionStateError("a session cannot be its own subagent");
  std::scoped_lock lock(*mutex_, *child.mutex_);
  require_active();
  if (consumed_.count(h.child_session)) {
    throw ConsumedHandleError("handle for session " + h.child_session.to_hex() + " already consumed");
  }
  auto it = outstanding_.find(h.child_session);
  if (it == outstanding_.end() || it->second != h.parent_node) {
    throw SessionStateError("handle was not issued by session " + id_.to_hex());
  }
  if (child.id_ != h.child_session) {
    throw SessionStateError("child session " + child.id_.to_hex() + " does not match the handle");
  }
  if (child.status_ != SessionStatus::Active) {
    throw SessionStateError("child session " + child.id_.to_hex() + " already finished");
  }

  if (graft) {
    Cteg next = graft_cteg(trace_, h.parent_node, child.trace_);
    if (history_) {
      auto sub = child.history_ ? std::make_shared<const ExecutionSequence>(*child.history_)
                                : std::make_shared<const ExecutionSequence>(child.trace_.graph());
      history_->push(InvocationStep{h.parent_node, std::move(sub), child.root_}, next.graph());
    }
    trace_ = std::move(next);
    last_issued_ = std::max(last_issued_, child.last_issued_);
  }
  outstanding_.erase(it);
  consumed_.insert(h.child_session);
  child.status_ = final_status;
}

Cteg Session::snapshot() const {
  std::lock_guard lock(*mutex_);
  return trace_;
}

std::optional<ExecutionSequence> Session::history() const {
  std::lock_guard lock(*mutex_);
  return history_;
}

}  // namespace cteg
