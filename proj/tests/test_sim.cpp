#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "isbjssp/pdr.hpp"
#include "isbjssp/sim.hpp"

using namespace isbjssp;

namespace {

std::shared_ptr<const Instance> shared(Instance inst) {
  return std::make_shared<const Instance>(std::move(inst));
}

// Advances with nothing dispatched until `t`.
void idle_until(SimState& s, int t) {
  while (s.now() < t) {
    s.advance_time();
    s.begin_step();
  }
}

bool has_violation(const std::vector<Violation>& vs, ViolationKind kind) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

// -sum over steps of the jobs waiting at that step, recomputed from starts
// and completions alone.
double audited_return(const Instance& inst, const EventLog& log, int makespan) {
  const int n = inst.num_jobs(), m = inst.num_machines();
  std::vector<std::vector<int>> start(n, std::vector<int>(m, -1)), done(n, std::vector<int>(m, -1));
  for (const auto& e : log) {
    if (e.kind == EventKind::kStart || e.kind == EventKind::kSwapStart) start[e.job][e.rank] = e.time;
    if (e.kind == EventKind::kComplete) done[e.job][e.rank] = e.time;
  }
  double total = 0.0;
  for (int t = 0; t < makespan; ++t) {
    for (int j = 0; j < n; ++j) {
      int r = 0;
      while (r < m && start[j][r] <= t) ++r;
      if (r == m) continue;
      if (r == 0 || done[j][r - 1] <= t) total -= 1.0;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("1x1 episode") {
  RuleScheduler spt(Rule::kSPT);
  const auto res = run_episode(shared(parse_instance("1 1\n0 7")), spt, {});
  CHECK(res.makespan == 7);
  REQUIRE(res.events.size() == 2);
  CHECK(res.events[0] == Event{0, EventKind::kStart, 0, 0, 0});
  CHECK(res.events[1] == Event{7, EventKind::kComplete, 0, 0, 0});
  CHECK(validate_schedule(parse_instance("1 1\n0 7"), res.events).empty());
  CHECK(res.total_return == 0.0);
}

TEST_CASE("apply_action on a 1x1 instance makes the machine busy") {
  SimState s(shared(parse_instance("1 1\n0 7")), 0.0, 50, 0);
  s.begin_step();
  CHECK(s.machine_availability(0) == Availability::kAvailable);
  s.apply_action({0, 0});
  CHECK(s.machine(0).state == MachineState::kBusy);
  CHECK(s.machine(0).remaining == 7);
  CHECK(s.machine_availability(0) == Availability::kBusyOrSwapReserved);
  CHECK(s.ready_operations().empty());
}

TEST_CASE("initial ready set of the fig1 instance") {
  SimState s(shared(testing::fig1_instance()), 0.0, 50, 0);
  s.begin_step();
  // Jobs 0 and 1 both start on machine 0, job 2 on machine 1.
  CHECK(s.ready_operations() == std::vector<NodeId>{{0, 0}, {1, 0}, {2, 0}});
}

TEST_CASE("a failure at t=10 lasts until t=60") {
  SimState s(shared(testing::make_instance({{{0, 200}, {1, 1}}})), 0.0, 50, 0);
  s.begin_step();
  s.apply_action({0, 0});
  idle_until(s, 10);
  s.force_failure(1);
  CHECK(s.machine_availability(1) == Availability::kFailed);
  CHECK(s.queue_size() == 1);
  CHECK(s.counter_queue_size() == 1);
  CHECK(s.graph().machine_removed(1));
  idle_until(s, 59);
  CHECK(s.machine_availability(1) == Availability::kFailed);
  idle_until(s, 60);
  CHECK(s.machine_availability(1) == Availability::kAvailable);
  CHECK(s.queue_size() == 0);
  CHECK_FALSE(s.graph().machine_removed(1));
  const auto& log = s.event_log();
  CHECK(std::count(log.begin(), log.end(), Event{10, EventKind::kFail, -1, -1, 1}) == 1);
  CHECK(std::count(log.begin(), log.end(), Event{60, EventKind::kRecover, -1, -1, 1}) == 1);
}

TEST_CASE("two failures recover in FIFO order") {
  SimState s(shared(testing::make_instance({{{0, 200}, {1, 1}, {2, 1}}})), 0.0, 50, 0);
  s.begin_step();
  s.apply_action({0, 0});
  idle_until(s, 10);
  s.force_failure(2);
  idle_until(s, 12);
  s.force_failure(1);
  CHECK(std::vector<int>(s.counters().begin(), s.counters().end()) == std::vector<int>{2, 0});
  idle_until(s, 59);
  CHECK(s.machine_availability(2) == Availability::kFailed);
  idle_until(s, 60);
  CHECK(s.machine_availability(2) == Availability::kAvailable);
  CHECK(s.machine_availability(1) == Availability::kFailed);
  idle_until(s, 62);
  CHECK(s.machine_availability(1) == Availability::kAvailable);
}

TEST_CASE("no interruptions at p=0, certain failure at p=1") {
  SimState zero(shared(parse_instance("1 1\n0 7")), 0.0, 50, 0);
  CHECK(zero.sample_interruptions().empty());
  SimState one(shared(parse_instance("1 1\n0 7")), 1.0, 50, 0);
  CHECK(one.sample_interruptions() == std::vector<int>{0});
  CHECK(one.machine_availability(0) == Availability::kFailed);
  CHECK(one.tick_interruptions().empty());
}

TEST_CASE("idle machines fail with the configured frequency") {
  // Time never advances here; only the failure and recovery queues run.
  std::vector<std::vector<std::pair<int, int>>> jobs;
  for (int j = 0; j < 10; ++j) {
    std::vector<std::pair<int, int>> ops;
    for (int r = 0; r < 10; ++r) ops.push_back({(j + r) % 10, 5});
    jobs.push_back(ops);
  }
  SimState s(shared(testing::make_instance(jobs)), 0.05, 50, 123);
  long long exposures = 0, failures = 0;
  for (int step = 0; step < 100000; ++step) {
    s.tick_interruptions();
    for (int m = 0; m < 10; ++m) exposures += s.machine(m).state == MachineState::kIdle;
    failures += static_cast<long long>(s.sample_interruptions().size());
    CHECK(s.queue_size() == s.counter_queue_size());
  }
  const double rate = static_cast<double>(failures) / exposures;
  const double sigma = std::sqrt(0.05 * 0.95 / exposures);
  CHECK(std::abs(rate - 0.05) < 3 * sigma);
}

TEST_CASE("minimal swap between two machines") {
  SimState s(shared(testing::make_instance({{{0, 2}, {1, 3}}, {{1, 2}, {0, 4}}})), 0.0, 50, 0);
  s.begin_step();
  s.apply_action({0, 0});
  s.apply_action({1, 0});
  s.advance_time();
  s.advance_time();
  CHECK(s.machine(0).state == MachineState::kHolding);
  CHECK(s.machine(1).state == MachineState::kHolding);
  CHECK(s.detect_swap_cycles() == std::vector<std::vector<int>>{{0, 1}});
  CHECK(s.machine_availability(0) == Availability::kBusyOrSwapReserved);
  CHECK(s.execute_swaps() == 2);
  CHECK(s.status({0, 1}) == OpStatus::kProcessing);
  CHECK(s.status({1, 1}) == OpStatus::kProcessing);
  CHECK(s.machine(0).op == NodeId{1, 1});
  CHECK(s.machine(1).op == NodeId{0, 1});
  CHECK(s.execute_swaps() == 0);
  const auto& log = s.event_log();
  CHECK(std::count(log.begin(), log.end(), Event{2, EventKind::kSwapStart, 0, 1, 1}) == 1);
  CHECK(std::count(log.begin(), log.end(), Event{2, EventKind::kSwapStart, 1, 1, 0}) == 1);
}

TEST_CASE("three machine rotation") {
  std::vector<std::vector<std::pair<int, int>>> jobs;
  for (int j = 0; j < 3; ++j) jobs.push_back({{j, 1}, {(j + 1) % 3, 2}, {(j + 2) % 3, 3}});
  SimState s(shared(testing::make_instance(jobs)), 0.0, 50, 0);
  s.begin_step();
  for (int j = 0; j < 3; ++j) s.apply_action({j, 0});
  s.advance_time();
  CHECK(s.detect_swap_cycles() == std::vector<std::vector<int>>{{0, 1, 2}});
  CHECK(s.execute_swaps() == 3);
  for (int m = 0; m < 3; ++m) CHECK(s.machine(m).state == MachineState::kBusy);
  CHECK(s.detect_swap_cycles().empty());
}

TEST_CASE("no holding machines means no cycles") {
  SimState s(shared(testing::fig1_instance()), 0.0, 50, 0);
  CHECK(s.detect_swap_cycles().empty());
  CHECK(s.execute_swaps() == 0);
}

TEST_CASE("holding a job whose next machine failed blocks the machine") {
  SimState s(shared(testing::make_instance({{{0, 1}, {1, 5}}, {{0, 2}, {1, 1}}})), 0.0, 50, 0);
  s.force_failure(1);
  s.begin_step();
  CHECK(s.ready_operations() == std::vector<NodeId>{{0, 0}, {1, 0}});
  s.apply_action({0, 0});
  s.advance_time();
  s.begin_step();
  CHECK(s.machine(0).state == MachineState::kHolding);
  CHECK(s.machine_availability(0) == Availability::kBlocked);
  CHECK(s.ready_operations().empty());
  try {
    s.apply_action({1, 0});
    FAIL("expected NotReady");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotReady);
  }
  // Both jobs wait: job 0 on the failed machine, job 1 on the blocked one.
  CHECK(s.advance_time() == -2.0);
}

TEST_CASE("starting the successor releases the held machine") {
  SimState s(shared(testing::make_instance({{{0, 1}, {1, 1}}, {{0, 1}, {1, 1}}})), 0.0, 50, 0);
  s.begin_step();
  s.apply_action({0, 0});
  s.advance_time();
  s.begin_step();
  CHECK(s.machine(0).state == MachineState::kHolding);
  s.apply_action({0, 1});
  CHECK(s.machine(0).state == MachineState::kIdle);
  CHECK(s.ready_operations() == std::vector<NodeId>{{1, 0}});
}

TEST_CASE("advance_time refuses while dispatching is possible") {
  SimState s(shared(parse_instance("1 1\n0 7")), 0.0, 50, 0);
  s.begin_step();
  try {
    s.advance_time();
    FAIL("expected SchedulableActionsPending");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchedulableActionsPending);
  }
}

TEST_CASE("all done leaves nothing ready and zero reward") {
  SimState s(shared(parse_instance("1 1\n0 2")), 0.0, 50, 0);
  s.begin_step();
  s.apply_action({0, 0});
  CHECK(s.advance_time() == 0.0);
  CHECK(s.advance_time() == 0.0);
  CHECK(s.all_done());
  CHECK(s.ready_operations().empty());
}

TEST_CASE("episode return equals the audit of the event log") {
  Rng rng(77);
  for (int k = 0; k < 30; ++k) {
    const int m = uniform_int(rng, 2, 7);
    const int n = uniform_int(rng, m, 8);
    auto inst = shared(generate_instance(m, n, rng));
    for (double p : {0.0, 0.1}) {
      RuleScheduler sched(kAllRules[k % kAllRules.size()]);
      EpisodeConfig cfg;
      cfg.p_interrupt = p;
      cfg.seed = static_cast<std::uint64_t>(k);
      const auto res = run_episode(inst, sched, cfg);
      CHECK(res.total_return == audited_return(*inst, res.events, res.makespan));
      double sum = 0.0;
      for (const auto& t : res.transitions) sum += t.reward;
      CHECK(sum == res.total_return);
      CHECK(validate_schedule(*inst, res.events).empty());
      for (std::size_t i = 0; i + 1 < res.transitions.size(); ++i) CHECK_FALSE(res.transitions[i].done);
      CHECK(res.transitions.back().done);
    }
  }
}

TEST_CASE("recorded observations hold the chosen action") {
  Rng rng(3);
  auto inst = shared(generate_instance(4, 5, rng));
  RuleScheduler sched(Rule::kFIFO);
  EpisodeConfig cfg;
  cfg.record_observations = true;
  cfg.p_interrupt = 0.05;
  cfg.seed = 9;
  const auto res = run_episode(inst, sched, cfg);
  int decisions = 0;
  for (const auto& t : res.transitions) {
    if (t.is_time_advance()) {
      CHECK(t.observation == nullptr);
      continue;
    }
    ++decisions;
    REQUIRE(t.observation);
    const auto& obs = *t.observation;
    REQUIRE(t.action_index >= 0);
    CHECK(obs.nodes[obs.actions[t.action_index]] == *t.action);
  }
  const auto swaps = std::count_if(res.events.begin(), res.events.end(),
                                   [](const Event& e) { return e.kind == EventKind::kSwapStart; });
  CHECK(decisions + swaps == 20);
}

TEST_CASE("queues stay paired and counters bounded during an episode") {
  Rng rng(8);
  auto inst = shared(generate_instance(6, 6, rng));
  SimState s(inst, 0.2, 17, 4);
  Rng pick(1);
  while (!s.all_done()) {
    s.begin_step();
    CHECK(s.queue_size() == s.counter_queue_size());
    int prev = 1 << 30;
    for (int c : s.counters()) {
      CHECK(c >= 0);
      CHECK(c < 17);
      CHECK(c <= prev);  // simultaneous failures share a count
      prev = c;
    }
    for (auto ready = s.ready_operations(); !ready.empty(); ready = s.ready_operations()) {
      s.apply_action(select(Rule::kSPT, s, ready, pick));
    }
    int processing = 0;
    for (int m = 0; m < 6; ++m) processing += s.machine(m).state == MachineState::kBusy;
    int flagged = 0;
    for (int j = 0; j < 6; ++j)
      for (int r = 0; r < 6; ++r) flagged += s.status({j, r}) == OpStatus::kProcessing;
    CHECK(processing == flagged);
    s.advance_time();
  }
  CHECK(validate_schedule(*inst, s.event_log()).empty());
}

TEST_CASE("validator catches overlap and starts inside failure windows") {
  const Instance inst = testing::make_instance({{{0, 3}}, {{0, 2}}});
  const EventLog good = {{0, EventKind::kStart, 0, 0, 0},
                         {3, EventKind::kComplete, 0, 0, 0},
                         {3, EventKind::kStart, 1, 0, 0},
                         {5, EventKind::kComplete, 1, 0, 0}};
  CHECK(validate_schedule(inst, good).empty());

  EventLog overlap = {{0, EventKind::kStart, 0, 0, 0},
                      {1, EventKind::kStart, 1, 0, 0},
                      {3, EventKind::kComplete, 0, 0, 0},
                      {3, EventKind::kComplete, 1, 0, 0}};
  CHECK(has_violation(validate_schedule(inst, overlap), ViolationKind::kExclusivity));

  EventLog failed = {{0, EventKind::kStart, 0, 0, 0},
                     {3, EventKind::kComplete, 0, 0, 0},
                     {3, EventKind::kFail, -1, -1, 0},
                     {10, EventKind::kStart, 1, 0, 0},
                     {12, EventKind::kComplete, 1, 0, 0},
                     {53, EventKind::kRecover, -1, -1, 0}};
  CHECK(has_violation(validate_schedule(inst, failed), ViolationKind::kFailureWindow));

  EventLog missing(good.begin(), good.begin() + 2);
  CHECK(has_violation(validate_schedule(inst, missing), ViolationKind::kMissingEvent));

  EventLog short_op = good;
  short_op[1].time = 2;
  CHECK(has_violation(validate_schedule(inst, short_op), ViolationKind::kDuration));
}

TEST_CASE("validator catches precedence and blocking violations") {
  const Instance inst = testing::make_instance({{{0, 2}, {1, 2}}, {{0, 1}, {1, 1}}});
  // Job 1 starts on machine 0 while job 0 still holds it (job 0 moves on at 4).
  const EventLog blocked = {{0, EventKind::kStart, 0, 0, 0},  {2, EventKind::kComplete, 0, 0, 0},
                            {2, EventKind::kStart, 1, 0, 0},  {3, EventKind::kComplete, 1, 0, 0},
                            {3, EventKind::kStart, 1, 1, 1},  {4, EventKind::kComplete, 1, 1, 1},
                            {4, EventKind::kStart, 0, 1, 1},  {6, EventKind::kComplete, 0, 1, 1}};
  CHECK(has_violation(validate_schedule(inst, blocked), ViolationKind::kBlocking));

  const EventLog early = {{0, EventKind::kStart, 0, 0, 0},  {2, EventKind::kComplete, 0, 0, 0},
                          {1, EventKind::kStart, 0, 1, 1},  {3, EventKind::kComplete, 0, 1, 1},
                          {3, EventKind::kStart, 1, 0, 0},  {4, EventKind::kComplete, 1, 0, 0},
                          {4, EventKind::kStart, 1, 1, 1},  {5, EventKind::kComplete, 1, 1, 1}};
  CHECK(has_violation(validate_schedule(inst, early), ViolationKind::kPrecedence));

  const EventLog wrong = {{0, EventKind::kStart, 0, 0, 1}, {2, EventKind::kComplete, 0, 0, 1}};
  CHECK(has_violation(validate_schedule(inst, wrong), ViolationKind::kWrongMachine));
}

TEST_CASE("brute force optimum") {
  CHECK(brute_force_optimal(parse_instance("1 1\n0 7")).makespan == 7);
  // Both jobs visit machine 0 then 1. Job 1 first: 0-2 and 2-6; job 0 then
  // runs 2-5 and waits blocked for machine 1 until 6, finishing at 8.
  const Instance same_order = testing::make_instance({{{0, 3}, {1, 2}}, {{0, 2}, {1, 4}}});
  const auto opt = brute_force_optimal(same_order);
  CHECK(opt.makespan == 8);
  ScriptedScheduler replay(opt.actions);
  CHECK(run_episode(shared(same_order), replay, {}).makespan == 8);
  try {
    Rng rng(1);
    brute_force_optimal(generate_instance(4, 4, rng));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooLarge);
  }
}

TEST_CASE("brute force lower-bounds every rule on small instances") {
  Rng rng(2024);
  for (int k = 0; k < 5; ++k) {
    auto inst = shared(generate_instance(3, 3, rng));
    const auto opt = brute_force_optimal(*inst);
    for (Rule r : kAllRules) {
      RuleScheduler sched(r);
      CHECK(run_episode(inst, sched, {}).makespan >= opt.makespan);
    }
  }
}

TEST_CASE("scripted replay rejects illegal actions") {
  ScriptedScheduler bad({{0, 1}});
  try {
    run_episode(shared(testing::make_instance({{{0, 1}, {1, 1}}})), bad, {});
    FAIL("expected NotReady");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotReady);
  }
}

TEST_CASE("step cap signals livelock") {
  RuleScheduler spt(Rule::kSPT);
  EpisodeConfig cfg;
  cfg.step_cap = 3;
  try {
    run_episode(shared(parse_instance("1 1\n0 7")), spt, cfg);
    FAIL("expected StepCapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStepCapExceeded);
  }
}

TEST_CASE("rules never deadlock on random instances") {
  Rng rng(55);
  for (int k = 0; k < 40; ++k) {
    const int m = uniform_int(rng, 3, 9);
    const int n = uniform_int(rng, m, 9);
    auto inst = shared(generate_instance(m, n, rng));
    for (Rule r : kAllRules) {
      RuleScheduler sched(r);
      EpisodeConfig cfg;
      cfg.step_cap = 100000;
      const auto res = run_episode(inst, sched, cfg);
      CHECK(res.makespan > 0);
    }
  }
}

TEST_CASE("event log CSV round trip") {
  Rng rng(6);
  auto inst = shared(generate_instance(5, 5, rng));
  RuleScheduler sched(Rule::kLPT);
  EpisodeConfig cfg;
  cfg.p_interrupt = 0.1;
  const auto res = run_episode(inst, sched, cfg);
  const std::string csv = event_log_csv(res.events);
  CHECK(csv.rfind("time,event,job,rank,machine\n", 0) == 0);
  CHECK(parse_event_log_csv(csv) == res.events);
  CHECK(csv.find(",fail,") != std::string::npos);
  CHECK_THROWS_AS(parse_event_log_csv("time,event\n"), Error);
  CHECK_THROWS_AS(parse_event_log_csv("time,event,job,rank,machine\n1,explode,0,0,0\n"), Error);
}

TEST_CASE("SPT degrades under interruptions") {
  auto inst = std::make_shared<const Instance>(load_instance_file(testing::data_path("mp18/ft10.txt")));
  RuleScheduler spt(Rule::kSPT);
  auto mean = [&](double p) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      EpisodeConfig cfg;
      cfg.p_interrupt = p;
      cfg.seed = seed;
      total += run_episode(inst, spt, cfg).makespan;
    }
    return total / 50.0;
  };
  CHECK(mean(0.1) >= mean(0.0));
}
