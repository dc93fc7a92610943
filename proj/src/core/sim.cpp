#include "isbjssp/sim.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace isbjssp {

const char* event_kind_name(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::kStart: return "start";
    case EventKind::kComplete: return "complete";
    case EventKind::kSwapStart: return "swap_start";
    case EventKind::kFail: return "fail";
    case EventKind::kRecover: return "recover";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(const std::string& name) {
  for (EventKind k : {EventKind::kStart, EventKind::kComplete, EventKind::kSwapStart,
                      EventKind::kFail, EventKind::kRecover}) {
    if (name == event_kind_name(k)) return k;
  }
  return std::nullopt;
}

std::vector<int> GraphObservation::disjunctive(int v) const {
  std::vector<int> out;
  for (int u : machine_groups[group_of[v]]) {
    if (u != v) out.push_back(u);
  }
  return out;
}

SimState::SimState(std::shared_ptr<const Instance> inst, double p_interrupt, int t_interrupt,
                   std::uint64_t seed)
    : inst_(std::move(inst)),
      graph_(*inst_),
      p_interrupt_(p_interrupt),
      t_interrupt_(t_interrupt),
      rng_(seed),
      machines_(static_cast<std::size_t>(inst_->num_machines())),
      status_(static_cast<std::size_t>(inst_->num_operations()), OpStatus::kNotStarted),
      ready_time_(static_cast<std::size_t>(inst_->num_operations()), -1),
      next_rank_(static_cast<std::size_t>(inst_->num_jobs()), 0) {
  if (p_interrupt < 0.0 || p_interrupt > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "p_interrupt must lie in [0, 1]");
  }
  if (t_interrupt < 1) throw Error(ErrorCode::kInvalidArgument, "t_interrupt must be >= 1");
  for (int j = 0; j < inst_->num_jobs(); ++j) ready_time_[graph_.index({j, 0})] = 0;
}

std::optional<int> SimState::ready_time(NodeId v) const {
  const int t = ready_time_[graph_.index(v)];
  if (t < 0) return std::nullopt;
  return t;
}

int SimState::swap_target(int machine) const {
  const NodeId held = machines_[machine].op;
  return inst_->op(held.job, held.rank + 1).machine;
}

bool SimState::in_swap_cycle(int machine) const {
  // Follow the waits-for chain; machines form a functional graph so the walk
  // either leaves the Holding set or closes a loop within m steps.
  int cur = machine;
  for (int step = 0; step < inst_->num_machines(); ++step) {
    if (machines_[cur].state != MachineState::kHolding) return false;
    cur = swap_target(cur);
    if (cur == machine) return true;
  }
  return false;
}

Availability SimState::machine_availability(int machine) const {
  const MachineStatus& ms = machines_.at(machine);
  switch (ms.state) {
    case MachineState::kFailed: return Availability::kFailed;
    case MachineState::kBusy: return Availability::kBusyOrSwapReserved;
    case MachineState::kIdle: return Availability::kAvailable;
    case MachineState::kHolding:
      return in_swap_cycle(machine) ? Availability::kBusyOrSwapReserved : Availability::kBlocked;
  }
  return Availability::kBlocked;
}

bool SimState::is_ready_candidate(NodeId v) const {
  if (v.job < 0 || v.job >= inst_->num_jobs()) return false;
  if (v.rank != next_rank_[v.job] || v.rank >= inst_->num_machines()) return false;
  if (v.rank > 0 && status(NodeId{v.job, v.rank - 1}) != OpStatus::kDone) return false;
  if (!graph_.present(v)) return false;
  return machine_availability(inst_->op(v.job, v.rank).machine) == Availability::kAvailable;
}

std::vector<NodeId> SimState::ready_operations() const {
  std::vector<NodeId> out;
  for (int j = 0; j < inst_->num_jobs(); ++j) {
    const NodeId v{j, next_rank_[j]};
    if (is_ready_candidate(v)) out.push_back(v);
  }
  return out;
}

std::vector<std::vector<int>> SimState::detect_swap_cycles() const {
  const int m = inst_->num_machines();
  std::vector<std::vector<int>> cycles;
  // 0 = unvisited, 1 = on current walk, 2 = finished
  std::vector<char> mark(static_cast<std::size_t>(m), 0);
  std::vector<int> walk;
  for (int start = 0; start < m; ++start) {
    if (mark[start] || machines_[start].state != MachineState::kHolding) continue;
    walk.clear();
    int cur = start;
    while (cur >= 0 && !mark[cur] && machines_[cur].state == MachineState::kHolding) {
      mark[cur] = 1;
      walk.push_back(cur);
      cur = swap_target(cur);
    }
    if (cur >= 0 && mark[cur] == 1) {
      auto it = std::find(walk.begin(), walk.end(), cur);
      std::vector<int> cycle(it, walk.end());
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      cycles.push_back(std::move(cycle));
    }
    for (int x : walk) mark[x] = 2;
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

int SimState::execute_swaps() {
  const auto cycles = detect_swap_cycles();
  int swapped = 0;
  for (const auto& cycle : cycles) {
    // Compute all moves first; the rotation is simultaneous.
    std::vector<std::pair<int, NodeId>> moves;
    for (int machine : cycle) {
      const NodeId held = machines_[machine].op;
      moves.emplace_back(swap_target(machine), NodeId{held.job, held.rank + 1});
    }
    for (const auto& [target, next] : moves) {
      const int idx = graph_.index(next);
      status_[idx] = OpStatus::kProcessing;
      next_rank_[next.job] = next.rank + 1;
      machines_[target] = {MachineState::kBusy, next, inst_->op(next.job, next.rank).proc_time};
      events_.push_back({now_, EventKind::kSwapStart, next.job, next.rank, target});
      ++swapped;
    }
  }
  return swapped;
}

void SimState::fail_machine(int machine) {
  machines_[machine] = {MachineState::kFailed, {}, 0};
  failed_nodes_.push_back(graph_.remove_machine_nodes(machine));
  failed_machine_.push_back(machine);
  counters_.push_back(0);
  events_.push_back({now_, EventKind::kFail, -1, -1, machine});
}

void SimState::force_failure(int machine) {
  if (machines_.at(machine).state != MachineState::kIdle) {
    throw Error(ErrorCode::kInvalidArgument, "only idle machines can fail");
  }
  fail_machine(machine);
}

std::vector<int> SimState::sample_interruptions() {
  std::vector<int> failed;
  if (p_interrupt_ <= 0.0) return failed;
  for (int machine = 0; machine < inst_->num_machines(); ++machine) {
    if (machines_[machine].state != MachineState::kIdle) continue;
    if (uniform_real(rng_) < p_interrupt_) {
      fail_machine(machine);
      failed.push_back(machine);
    }
  }
  return failed;
}

std::vector<int> SimState::tick_interruptions() {
  std::vector<int> recovered;
  for (int& c : counters_) ++c;
  while (!counters_.empty() && counters_.front() >= t_interrupt_) {
    const int machine = failed_machine_.front();
    graph_.reinstate_nodes(failed_nodes_.front());
    machines_[machine] = {MachineState::kIdle, {}, 0};
    events_.push_back({now_, EventKind::kRecover, -1, -1, machine});
    counters_.pop_front();
    failed_nodes_.pop_front();
    failed_machine_.pop_front();
    recovered.push_back(machine);
  }
  return recovered;
}

void SimState::apply_action(NodeId v) {
  if (!is_ready_candidate(v)) {
    throw Error(ErrorCode::kNotReady, "operation (" + std::to_string(v.job) + "," +
                                          std::to_string(v.rank) + ") is not ready");
  }
  const int machine = inst_->op(v.job, v.rank).machine;
  if (v.rank > 0) {
    const NodeId pred{v.job, v.rank - 1};
    const int pm = inst_->op(pred.job, pred.rank).machine;
    if (machines_[pm].state == MachineState::kHolding && machines_[pm].op == pred) {
      machines_[pm] = {MachineState::kIdle, {}, 0};
    }
  }
  status_[graph_.index(v)] = OpStatus::kProcessing;
  next_rank_[v.job] = v.rank + 1;
  machines_[machine] = {MachineState::kBusy, v, inst_->op(v.job, v.rank).proc_time};
  events_.push_back({now_, EventKind::kStart, v.job, v.rank, machine});
  ++dispatched_;
}

int SimState::waiting_jobs() const {
  int waiting = 0;
  for (int j = 0; j < inst_->num_jobs(); ++j) {
    const int r = next_rank_[j];
    if (r >= inst_->num_machines()) continue;
    if (r == 0 || status(NodeId{j, r - 1}) == OpStatus::kDone) ++waiting;
  }
  return waiting;
}

double SimState::advance_time() {
  if (!ready_operations().empty()) {
    throw Error(ErrorCode::kSchedulableActionsPending,
                "advance_time called while operations can still be dispatched");
  }
  const int waiting = waiting_jobs();
  // Failures are drawn once per decision step, after dispatching, over the
  // machines left idle.
  if (dispatched_ > 0) sample_interruptions();
  dispatched_ = 0;
  ++now_;
  const int m = inst_->num_machines();
  for (int machine = 0; machine < m; ++machine) {
    MachineStatus& ms = machines_[machine];
    if (ms.state != MachineState::kBusy) continue;
    if (--ms.remaining > 0) continue;
    const NodeId v = ms.op;
    status_[graph_.index(v)] = OpStatus::kDone;
    ++done_ops_;
    events_.push_back({now_, EventKind::kComplete, v.job, v.rank, machine});
    if (v.rank + 1 < m) {
      ms = {MachineState::kHolding, v, 0};
      ready_time_[graph_.index({v.job, v.rank + 1})] = now_;
    } else {
      ms = {MachineState::kIdle, {}, 0};
    }
  }
  return -static_cast<double>(waiting);
}

void SimState::begin_step() {
  tick_interruptions();
  while (execute_swaps() > 0) {
  }
}

int SimState::completed_work(int job) const {
  int work = 0;
  for (int r = 0; r < inst_->num_machines(); ++r) {
    const NodeId v{job, r};
    const OpStatus s = status(v);
    if (s == OpStatus::kDone) {
      work += inst_->op(job, r).proc_time;
    } else if (s == OpStatus::kProcessing) {
      work += inst_->op(job, r).proc_time - remaining_of(v);
    }
  }
  return work;
}

int SimState::remaining_of(NodeId v) const {
  if (status(v) != OpStatus::kProcessing) return 0;
  const MachineStatus& ms = machines_[inst_->op(v.job, v.rank).machine];
  return ms.state == MachineState::kBusy && ms.op == v ? ms.remaining : 0;
}

NodeFeatures node_features(const SimState& state, NodeId v) {
  const auto& g = state.graph();
  if (v.job < 0 || v.job >= g.num_jobs() || v.rank < 0 || v.rank >= g.num_machines() ||
      !g.present(v)) {
    throw Error(ErrorCode::kAbsentNode, "features requested for an absent node");
  }
  const Instance& inst = state.instance();
  const double scale = inst.max_proc_time();
  const int m = inst.num_machines();
  const OpStatus s = state.status(v);
  NodeFeatures x{};
  x[0] = s == OpStatus::kNotStarted ? 1.0 : 0.0;
  x[1] = s == OpStatus::kProcessing ? 1.0 : 0.0;
  x[2] = s == OpStatus::kDone ? 1.0 : 0.0;
  x[3] = inst.op(v.job, v.rank).proc_time / scale;
  x[4] = static_cast<double>(state.completed_work(v.job)) / total_processing_time(inst, v.job);
  x[5] = static_cast<double>(m - v.rank) / m;
  if (s == OpStatus::kNotStarted) {
    if (auto rt = state.ready_time(v); rt && *rt <= state.now()) x[6] = (state.now() - *rt) / scale;
  }
  if (s == OpStatus::kProcessing) x[7] = state.remaining_of(v) / scale;
  return x;
}

GraphObservation SimState::observe(const std::vector<NodeId>& actions) const {
  GraphObservation obs;
  const int total = graph_.num_nodes();
  std::vector<int> dense(static_cast<std::size_t>(total), -1);
  for (int idx = 0; idx < total; ++idx) {
    if (!graph_.present_index(idx)) continue;
    dense[idx] = static_cast<int>(obs.nodes.size());
    obs.nodes.push_back(graph_.node(idx));
  }
  const int n = obs.size();
  obs.features.resize(static_cast<std::size_t>(n) * kFeatureDim);
  obs.preceding.assign(n, -1);
  obs.succeeding.assign(n, -1);
  obs.group_of.assign(n, -1);
  const int m = inst_->num_machines();
  std::vector<int> group_of_machine(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < n; ++i) {
    const NodeId v = obs.nodes[i];
    const NodeFeatures x = node_features(*this, v);
    std::copy(x.begin(), x.end(), obs.features.begin() + static_cast<std::ptrdiff_t>(i) * kFeatureDim);
    if (v.rank > 0) obs.preceding[i] = dense[graph_.index({v.job, v.rank - 1})];
    if (v.rank + 1 < m) obs.succeeding[i] = dense[graph_.index({v.job, v.rank + 1})];
    const int machine = graph_.machine_of(v);
    if (group_of_machine[machine] < 0) {
      group_of_machine[machine] = static_cast<int>(obs.machine_groups.size());
      obs.machine_groups.emplace_back();
    }
    obs.group_of[i] = group_of_machine[machine];
    obs.machine_groups[obs.group_of[i]].push_back(i);
  }
  obs.actions.reserve(actions.size());
  for (const NodeId& a : actions) {
    const int d = dense[graph_.index(a)];
    if (d < 0) throw Error(ErrorCode::kAbsentNode, "action refers to an absent node");
    obs.actions.push_back(d);
  }
  return obs;
}

Decision ScriptedScheduler::choose(const SimState&, const std::vector<NodeId>& ready, Rng&) const {
  if (cursor_ >= actions_.size()) throw Error(ErrorCode::kNotReady, "script exhausted");
  const NodeId v = actions_[cursor_++];
  if (std::find(ready.begin(), ready.end(), v) == ready.end()) {
    throw Error(ErrorCode::kNotReady, "scripted action is not ready");
  }
  Decision d;
  d.action = v;
  return d;
}

EpisodeResult run_episode(std::shared_ptr<const Instance> inst, const Scheduler& scheduler,
                          const EpisodeConfig& config) {
  if (config.step_cap <= 0) throw Error(ErrorCode::kInvalidArgument, "step_cap must be > 0");
  SimState state(inst, config.p_interrupt, config.t_interrupt, mix_seed(config.seed, 0));
  Rng sched_rng(mix_seed(config.seed, 1));
  EpisodeResult result;
  auto& samples = result.transitions;
  long long steps = 0;
  for (;;) {
    state.begin_step();
    const std::size_t step_begin = samples.size();
    for (auto ready = state.ready_operations(); !ready.empty(); ready = state.ready_operations()) {
      Decision d = scheduler.choose(state, ready, sched_rng);
      TransitionSample s;
      s.action = d.action;
      s.time = state.now();
      s.old_log_prob = d.log_prob;
      s.value_estimate = d.value;
      if (config.record_observations) {
        if (d.observation) {
          s.observation = std::move(d.observation);
          s.action_index = d.action_index;
        } else {
          auto obs = std::make_shared<GraphObservation>(state.observe(ready));
          const auto it = std::find(ready.begin(), ready.end(), d.action);
          s.action_index = static_cast<int>(it - ready.begin());
          s.observation = std::move(obs);
        }
      }
      state.apply_action(d.action);
      samples.push_back(std::move(s));
    }
    const int t = state.now();
    const double r = state.advance_time();
    if (samples.size() == step_begin) {
      TransitionSample s;
      s.time = t;
      samples.push_back(std::move(s));
    }
    samples.back().reward = r;
    result.total_return += r;
    if (state.all_done()) {
      samples.back().done = true;
      break;
    }
    if (++steps >= config.step_cap) {
      throw Error(ErrorCode::kStepCapExceeded,
                  "episode exceeded " + std::to_string(config.step_cap) + " steps");
    }
  }
  result.makespan = state.now();
  result.events = state.event_log();
  return result;
}

// ---------------------------------------------------------------------------

std::vector<Violation> validate_schedule(const Instance& inst, const EventLog& events) {
  const int n = inst.num_jobs();
  const int m = inst.num_machines();
  const auto idx = [m](int j, int r) { return j * m + r; };
  std::vector<int> start(static_cast<std::size_t>(n * m), -1);
  std::vector<int> finish(static_cast<std::size_t>(n * m), -1);
  std::vector<int> start_machine(static_cast<std::size_t>(n * m), -1);
  std::vector<Violation> out;
  auto report = [&](ViolationKind kind, std::string detail) {
    out.push_back({kind, std::move(detail)});
  };
  auto label = [](int j, int r) {
    return "op (" + std::to_string(j) + "," + std::to_string(r) + ")";
  };

  struct Window {
    int machine, begin, end;
  };
  std::vector<Window> failures;
  std::vector<int> open_failure(static_cast<std::size_t>(m), -1);
  for (const Event& e : events) {
    const bool op_event = e.kind == EventKind::kStart || e.kind == EventKind::kSwapStart ||
                          e.kind == EventKind::kComplete;
    if (op_event) {
      if (e.job < 0 || e.job >= n || e.rank < 0 || e.rank >= m) {
        report(ViolationKind::kMissingEvent, "event references unknown operation");
        continue;
      }
      const int k = idx(e.job, e.rank);
      if (e.kind == EventKind::kComplete) {
        if (finish[k] >= 0) report(ViolationKind::kMissingEvent, label(e.job, e.rank) + " completed twice");
        finish[k] = e.time;
      } else {
        if (start[k] >= 0) report(ViolationKind::kMissingEvent, label(e.job, e.rank) + " started twice");
        start[k] = e.time;
        start_machine[k] = e.machine;
      }
    } else if (e.machine < 0 || e.machine >= m) {
      report(ViolationKind::kMissingEvent, "machine event references unknown machine");
    } else if (e.kind == EventKind::kFail) {
      open_failure[e.machine] = e.time;
    } else if (open_failure[e.machine] >= 0) {
      failures.push_back({e.machine, open_failure[e.machine], e.time});
      open_failure[e.machine] = -1;
    }
  }
  for (int machine = 0; machine < m; ++machine) {
    if (open_failure[machine] >= 0) {
      failures.push_back({machine, open_failure[machine], std::numeric_limits<int>::max()});
    }
  }

  struct Interval {
    int begin, end, job, rank;
  };
  std::vector<std::vector<Interval>> processing(static_cast<std::size_t>(m));
  std::vector<std::vector<Interval>> occupancy(static_cast<std::size_t>(m));
  bool complete = true;
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < m; ++r) {
      const int k = idx(j, r);
      const Operation& op = inst.op(j, r);
      if (start[k] < 0 || finish[k] < 0) {
        report(ViolationKind::kMissingEvent, label(j, r) + " lacks a start or completion");
        complete = false;
        continue;
      }
      if (start_machine[k] != op.machine) {
        report(ViolationKind::kWrongMachine, label(j, r) + " started on machine " +
                                                 std::to_string(start_machine[k]));
      }
      if (finish[k] - start[k] != op.proc_time) {
        report(ViolationKind::kDuration, label(j, r) + " ran " +
                                             std::to_string(finish[k] - start[k]) + " steps");
      }
      if (r > 0 && finish[idx(j, r - 1)] >= 0 && start[k] < finish[idx(j, r - 1)]) {
        report(ViolationKind::kPrecedence, label(j, r) + " starts before its predecessor completes");
      }
      processing[op.machine].push_back({start[k], finish[k], j, r});
    }
  }
  if (complete) {
    for (int j = 0; j < n; ++j) {
      for (int r = 0; r < m; ++r) {
        const int k = idx(j, r);
        const int leave = r + 1 < m ? start[idx(j, r + 1)] : finish[k];
        occupancy[inst.op(j, r).machine].push_back({start[k], leave, j, r});
      }
    }
  }

  auto overlaps = [](std::vector<Interval>& iv, auto&& on_overlap) {
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
      return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
    });
    for (std::size_t i = 1; i < iv.size(); ++i) {
      for (std::size_t p = 0; p < i; ++p) {
        if (iv[p].end > iv[i].begin && iv[i].end > iv[p].begin && iv[p].end > iv[p].begin &&
            iv[i].end > iv[i].begin) {
          on_overlap(iv[p], iv[i]);
        }
      }
    }
  };
  for (int machine = 0; machine < m; ++machine) {
    overlaps(processing[machine], [&](const Interval& a, const Interval& b) {
      report(ViolationKind::kExclusivity, "machine " + std::to_string(machine) + ": " +
                                              label(a.job, a.rank) + " overlaps " + label(b.job, b.rank));
    });
    overlaps(occupancy[machine], [&](const Interval& a, const Interval& b) {
      report(ViolationKind::kBlocking, "machine " + std::to_string(machine) + ": job " +
                                           std::to_string(a.job) + " still holds it when " +
                                           label(b.job, b.rank) + " arrives");
    });
  }
  for (const Window& w : failures) {
    for (const Interval& iv : occupancy[w.machine]) {
      if (iv.begin < w.end && w.begin < iv.end) {
        report(ViolationKind::kFailureWindow, "machine " + std::to_string(w.machine) +
                                                  " occupied by " + label(iv.job, iv.rank) +
                                                  " during failure at " + std::to_string(w.begin));
      }
    }
    for (const Interval& iv : processing[w.machine]) {
      if (iv.begin >= w.begin && iv.begin < w.end) {
        report(ViolationKind::kFailureWindow, label(iv.job, iv.rank) + " started on failed machine " +
                                                  std::to_string(w.machine));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct SearchContext {
  long long step_cap = 0;
  int best = std::numeric_limits<int>::max();
  std::vector<NodeId> path;
  std::vector<NodeId> best_path;
};

void search(SimState state, SearchContext& ctx, long long steps) {
  for (;;) {
    if (state.now() >= ctx.best) return;
    auto ready = state.ready_operations();
    if (!ready.empty()) {
      for (const NodeId& v : ready) {
        SimState next = state;
        next.apply_action(v);
        ctx.path.push_back(v);
        search(std::move(next), ctx, steps);
        ctx.path.pop_back();
      }
      return;
    }
    state.advance_time();
    if (state.all_done()) {
      if (state.now() < ctx.best) {
        ctx.best = state.now();
        ctx.best_path = ctx.path;
      }
      return;
    }
    if (++steps >= ctx.step_cap) {
      throw Error(ErrorCode::kStepCapExceeded, "brute force exceeded the step cap");
    }
    state.begin_step();
  }
}

}  // namespace

OptimalSchedule brute_force_optimal(const Instance& inst, long long step_cap) {
  if (inst.num_operations() > 12) {
    throw Error(ErrorCode::kTooLarge, "brute force limited to n*m <= 12");
  }
  SimState root(std::make_shared<const Instance>(inst), 0.0, 50, 0);
  root.begin_step();
  SearchContext ctx;
  ctx.step_cap = step_cap;
  search(root, ctx, 0);
  return {ctx.best, ctx.best_path};
}

// ---------------------------------------------------------------------------

std::string event_log_csv(const EventLog& events) {
  std::ostringstream out;
  out << "time,event,job,rank,machine\n";
  for (const Event& e : events) {
    out << e.time << ',' << event_kind_name(e.kind) << ',' << e.job << ',' << e.rank << ','
        << e.machine << '\n';
  }
  return out.str();
}

EventLog parse_event_log_csv(const std::string& text) {
  EventLog log;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "time,event,job,rank,machine") {
        throw Error(ErrorCode::kIoError, "event log: unexpected header");
      }
      continue;
    }
    std::istringstream row(line);
    std::string f[5];
    for (auto& field : f) {
      if (!std::getline(row, field, ',')) throw Error(ErrorCode::kIoError, "event log: short row " + std::to_string(line_no));
    }
    const auto kind = parse_event_kind(f[1]);
    if (!kind) throw Error(ErrorCode::kIoError, "event log: unknown event '" + f[1] + "'");
    try {
      log.push_back({std::stoi(f[0]), *kind, std::stoi(f[2]), std::stoi(f[3]), std::stoi(f[4])});
    } catch (const std::exception&) {
      throw Error(ErrorCode::kIoError, "event log: bad integer on line " + std::to_string(line_no));
    }
  }
  return log;
}

}  // namespace isbjssp
