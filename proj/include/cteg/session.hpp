#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cteg/cteg.hpp"
#include "cteg/sequence.hpp"

namespace cteg {

/// Wall-clock source in microseconds.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_micros() = 0;
};

class SystemClock : public Clock {
 public:
  std::int64_t now_micros() override;
};

/// Clock that only moves when told to. A frozen clock is the worst case for
/// timestamp collisions.
class ManualClock : public Clock {
 public:
  explicit ManualClock(std::int64_t start = 0) : now_(start) {}

  std::int64_t now_micros() override { return now_.load(); }
  void set(std::int64_t micros) { now_.store(micros); }
  void advance(std::int64_t micros) { now_.fetch_add(micros); }

 private:
  std::atomic<std::int64_t> now_;
};

/// Clock and id source shared by a session and all of its subagents.
struct SessionEnv {
  std::shared_ptr<Clock> clock;
  std::shared_ptr<IdGenerator> ids;

  static SessionEnv system();
  /// Manual clock starting at `start`, ids seeded with `seed`.
  static SessionEnv deterministic(std::uint64_t seed, std::int64_t start = 0);
};

enum class SessionStatus { Active, Completed, Failed };

enum class FailurePolicy { Discard, GraftPartial };

struct Event {
  EventType type;
  Payload payload{};
};

/// Names a running subagent on the parent side. Consumed by exactly one
/// complete_subagent or fail_subagent call.
struct SubagentHandle {
  ActionId parent_node;
  SessionId child_session;
};

/// Incrementally built trace owned by one agent.
///
/// The trace is a valid CTEG after every public call. Timestamps are issued
/// as max(wall clock, last issued + 1, lower bound + 1, parent time + 1), so
/// causal strictness holds even when the wall clock stands still.
///
/// Mutations are serialized by an internal mutex. A graft of a finished
/// subagent is atomic with respect to snapshot().
class Session {
 public:
  /// Starts a session whose trace is the single root node.
  static Session begin(SessionEnv env, EventType root_type, Payload payload = {},
                       std::optional<Timestamp> lower_bound = std::nullopt, bool record_history = false);

  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  ~Session();

  SessionId id() const { return id_; }
  ActionId root() const { return root_; }
  std::optional<Timestamp> lower_bound() const { return lower_bound_; }
  SessionStatus status() const;

  /// One direct emission under `parent`. Returns the new ids in argument
  /// order. Throws SessionStateError, UnknownNodeError or InvalidStepError.
  std::vector<ActionId> emit(ActionId parent, const std::vector<Event>& events);

  /// Starts a child session with lower bound t(parent). The parent's trace is
  /// not touched until the child is completed or failed.
  std::pair<SubagentHandle, Session> invoke_subagent(ActionId parent, EventType root_type,
                                                     Payload payload = {});

  /// Grafts the child's trace at h.parent_node and marks the child completed.
  void complete_subagent(const SubagentHandle& h, Session& child);

  /// Marks the child failed. With GraftPartial its trace so far is grafted
  /// exactly as in complete_subagent; with Discard the parent is unchanged.
  void fail_subagent(const SubagentHandle& h, Session& child, FailurePolicy policy);

  Cteg snapshot() const;

  /// Labelled sequence of every state since begin(), if recording was
  /// requested. Invocation labels carry the child's own history when the
  /// child recorded one.
  std::optional<ExecutionSequence> history() const;

 private:
  Session(SessionEnv env, SessionId id, Cteg trace, std::optional<Timestamp> lower_bound, bool record_history);

  Timestamp issue(Timestamp after);
  void require_active() const;
  void finish_subagent(const SubagentHandle& h, Session& child, SessionStatus final_status, bool graft);

  SessionEnv env_;
  SessionId id_;
  ActionId root_;
  std::optional<Timestamp> lower_bound_;
  std::int64_t last_issued_;
  Cteg trace_;
  SessionStatus status_ = SessionStatus::Active;
  std::map<SessionId, ActionId> outstanding_;
  std::set<SessionId> consumed_;
  std::optional<ExecutionSequence> history_;
  std::unique_ptr<std::mutex> mutex_;
};

}  // namespace cteg
