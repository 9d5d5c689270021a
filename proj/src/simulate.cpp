#include "cteg/simulate.hpp"

#include <random>
#include <stdexcept>

#include "cteg/session.hpp"

namespace cteg {

void SimulationConfig::validate() const {
  if (branching < 1) throw std::invalid_argument("branching must be at least 1");
  if (!(fail_prob >= 0.0 && fail_prob <= 1.0)) throw std::invalid_argument("fail_prob must lie in [0, 1]");
  if (types.empty()) throw std::invalid_argument("at least one event type is required");
}

namespace {

constexpr std::int64_t kEpochMicros = 1'700'000'000'000'000;
constexpr double kInvokeProb = 0.3;

class Script {
 public:
  Script(const SimulationConfig& config, ManualClock& clock)
      : config_(config), clock_(clock), rng_(config.seed) {}

  // Runs up to `budget` steps of one agent.
  void run(Session& s, std::size_t depth, std::size_t budget) {
    for (std::size_t step = 0; step < budget; ++step) {
      clock_.advance(pick(0, 3));
      auto nodes = temporal_projection(s.snapshot());
      ActionId at = nodes[pick(0, nodes.size() - 1)];

      if (depth < config_.max_depth && coin(kInvokeProb)) {
        auto [handle, child] = s.invoke_subagent(at, type());
        ++invocations_;
        const bool fails = coin(config_.fail_prob);
        run(child, depth + 1, fails ? pick(0, config_.steps) : config_.steps);
        if (fails) {
          ++failures_;
          s.fail_subagent(handle, child, FailurePolicy::GraftPartial);
        } else {
          s.complete_subagent(handle, child);
        }
      } else {
        std::vector<Event> events;
        const std::size_t n = pick(1, config_.branching);
        for (std::size_t i = 0; i < n; ++i) events.push_back(Event{type(), payload()});
        s.emit(at, events);
      }
    }
  }

  std::size_t invocations() const { return invocations_; }
  std::size_t failures() const { return failures_; }
  EventType type() { return config_.types[pick(0, config_.types.size() - 1)]; }

 private:
  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  Payload payload() {
    Payload out(pick(0, 8));
    for (auto& b : out) b = static_cast<std::uint8_t>(pick(0, 255));
    return out;
  }

  const SimulationConfig& config_;
  ManualClock& clock_;
  std::mt19937_64 rng_;
  std::size_t invocations_ = 0;
  std::size_t failures_ = 0;
};

}  // namespace

SimulationResult simulate(const SimulationConfig& config, bool record_history) {
  config.validate();
  auto clock = std::make_shared<ManualClock>(kEpochMicros);
  SessionEnv env{clock, std::make_shared<IdGenerator>(config.seed ^ 0x9e3779b97f4a7c15ULL)};
  Script script(config, *clock);
  Session root = Session::begin(env, script.type(), {}, std::nullopt, record_history);
  script.run(root, 0, config.steps);
  return SimulationResult{root.snapshot(), root.id(), script.invocations(), script.failures(),
                          root.history()};
}

}  // namespace cteg
