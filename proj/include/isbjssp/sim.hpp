#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isbjssp/graph.hpp"
#include "isbjssp/instance.hpp"

namespace isbjssp {

enum class OpStatus : std::uint8_t { kNotStarted, kProcessing, kDone };

enum class MachineState : std::uint8_t { kIdle, kBusy, kHolding, kFailed };

struct MachineStatus {
  MachineState state = MachineState::kIdle;
  NodeId op{};        // valid for kBusy and kHolding
  int remaining = 0;  // valid for kBusy, >= 1
};

enum class Availability : std::uint8_t { kFailed, kBusyOrSwapReserved, kAvailable, kBlocked };

enum class EventKind : std::uint8_t { kStart, kComplete, kSwapStart, kFail, kRecover };

const char* event_kind_name(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(const std::string& name);

// job and rank are -1 for machine events (fail, recover).
struct Event {
  int time = 0;
  EventKind kind = EventKind::kStart;
  int job = -1;
  int rank = -1;
  int machine = -1;

  bool operator==(const Event&) const = default;
};

using EventLog = std::vector<Event>;

// Frozen view of the graph at a decision point, indexed densely over the
// nodes present at that moment.
struct GraphObservation {
  std::vector<NodeId> nodes;
  std::vector<double> features;            // nodes.size() x kFeatureDim, row-major
  std::vector<int> preceding;              // -1 when absent
  std::vector<int> succeeding;             // -1 when absent
  std::vector<std::vector<int>> machine_groups;  // disjunctive cliques of present nodes
  std::vector<int> group_of;
  std::vector<int> actions;                // indices into nodes, ascending (job, rank)

  int size() const noexcept { return static_cast<int>(nodes.size()); }
  std::vector<int> disjunctive(int v) const;
};

struct TransitionSample {
  std::shared_ptr<const GraphObservation> observation;  // null unless recorded
  std::optional<NodeId> action;                         // empty for a time advance
  int action_index = -1;                                // position in observation->actions
  int time = 0;
  double reward = 0.0;
  double old_log_prob = 0.0;
  double value_estimate = 0.0;
  bool done = false;

  bool is_time_advance() const noexcept { return !action.has_value(); }
};

class SimState {
 public:
  SimState(std::shared_ptr<const Instance> inst, double p_interrupt, int t_interrupt,
           std::uint64_t seed);

  const Instance& instance() const noexcept { return *inst_; }
  const DisjunctiveGraph& graph() const noexcept { return graph_; }
  int now() const noexcept { return now_; }
  double p_interrupt() const noexcept { return p_interrupt_; }
  int t_interrupt() const noexcept { return t_interrupt_; }
  const MachineStatus& machine(int m) const { return machines_.at(m); }
  OpStatus status(NodeId v) const { return status_[graph_.index(v)]; }
  // Time the operation's predecessor completed (0 for first operations).
  std::optional<int> ready_time(NodeId v) const;
  // Number of operations of `job` already started.
  int next_rank(int job) const { return next_rank_.at(job); }
  const EventLog& event_log() const noexcept { return events_; }
  std::size_t queue_size() const noexcept { return failed_nodes_.size(); }
  std::size_t counter_queue_size() const noexcept { return counters_.size(); }
  const std::deque<int>& counters() const noexcept { return counters_; }
  bool all_done() const noexcept { return done_ops_ == inst_->num_operations(); }

  Availability machine_availability(int machine) const;
  std::vector<NodeId> ready_operations() const;
  // Disjoint cycles of Holding machines in the waits-for relation. Each cycle
  // starts at its smallest machine index.
  std::vector<std::vector<int>> detect_swap_cycles() const;
  int execute_swaps();
  std::vector<int> sample_interruptions();
  std::vector<int> tick_interruptions();
  void apply_action(NodeId v);
  // Samples failures first when this step dispatched anything, then moves
  // the clock. Returns minus the number of waiting jobs before the move.
  double advance_time();

  // Recover, then swap until no cycle remains.
  void begin_step();

  // Jobs whose next operation is released (predecessor done or none) but not
  // started.
  int waiting_jobs() const;
  // Work done on `job`, counting elapsed time of an in-flight operation.
  int completed_work(int job) const;
  int remaining_of(NodeId v) const;
  bool is_ready_candidate(NodeId v) const;

  GraphObservation observe(const std::vector<NodeId>& actions) const;

  // Test hooks: force a failure/recovery outside the sampling path.
  void force_failure(int machine);

 private:
  void fail_machine(int machine);
  bool in_swap_cycle(int machine) const;
  int swap_target(int machine) const;

  std::shared_ptr<const Instance> inst_;
  DisjunctiveGraph graph_;
  int now_ = 0;
  int dispatched_ = 0;  // decisions since the last advance_time
  double p_interrupt_ = 0.0;
  int t_interrupt_ = 50;
  Rng rng_;
  std::vector<MachineStatus> machines_;
  std::vector<OpStatus> status_;
  std::vector<int> ready_time_;  // -1 when unreleased
  std::vector<int> next_rank_;
  int done_ops_ = 0;
  std::deque<std::vector<NodeId>> failed_nodes_;
  std::deque<int> failed_machine_;
  std::deque<int> counters_;
  EventLog events_;
};

struct Decision {
  NodeId action{};
  double log_prob = 0.0;
  double value = 0.0;
  std::shared_ptr<const GraphObservation> observation;
  int action_index = -1;
};

// Decision callback. Implementations must be usable from several episodes at
// once, so all mutable randomness comes through `rng`.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual Decision choose(const SimState& state, const std::vector<NodeId>& ready,
                          Rng& rng) const = 0;
  virtual std::string name() const = 0;
};

struct EpisodeConfig {
  double p_interrupt = 0.0;
  int t_interrupt = 50;
  std::uint64_t seed = 0;
  long long step_cap = 1'000'000;
  bool record_observations = false;
};

struct EpisodeResult {
  std::vector<TransitionSample> transitions;
  int makespan = 0;
  EventLog events;
  double total_return = 0.0;
};

EpisodeResult run_episode(std::shared_ptr<const Instance> inst, const Scheduler& scheduler,
                          const EpisodeConfig& config);

// Replays a fixed action sequence; throws NotReady if an action is illegal
// at its decision point or the sequence runs out early.
class ScriptedScheduler : public Scheduler {
 public:
  explicit ScriptedScheduler(std::vector<NodeId> actions) : actions_(std::move(actions)) {}
  Decision choose(const SimState& state, const std::vector<NodeId>& ready, Rng& rng) const override;
  std::string name() const override { return "SCRIPTED"; }
  void reset() const { cursor_ = 0; }

 private:
  std::vector<NodeId> actions_;
  mutable std::size_t cursor_ = 0;
};

enum class ViolationKind : std::uint8_t {
  kMissingEvent,
  kDuration,
  kWrongMachine,
  kPrecedence,
  kExclusivity,
  kBlocking,
  kFailureWindow,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::vector<Violation> validate_schedule(const Instance& inst, const EventLog& events);

struct OptimalSchedule {
  int makespan = 0;
  std::vector<NodeId> actions;
};

// Exhaustive search over every dispatching choice of the interruption-free
// simulator. Only for n*m <= 12.
OptimalSchedule brute_force_optimal(const Instance& inst, long long step_cap = 1'000'000);

std::string event_log_csv(const EventLog& events);
EventLog parse_event_log_csv(const std::string& text);

}  // namespace isbjssp
