#include "isbjssp/pdr.hpp"

#include <algorithm>
#include <cctype>

namespace isbjssp {

const char* rule_name(Rule rule) noexcept {
  switch (rule) {
    case Rule::kMTWR: return "MTWR";
    case Rule::kLTWR: return "LTWR";
    case Rule::kSPT: return "SPT";
    case Rule::kLPT: return "LPT";
    case Rule::kFIFO: return "FIFO";
    case Rule::kLIFO: return "LIFO";
    case Rule::kSQNO: return "SQNO";
    case Rule::kLQNO: return "LQNO";
    case Rule::kSTPT: return "STPT";
    case Rule::kLTPT: return "LTPT";
    case Rule::kRandom: return "RANDOM";
  }
  return "?";
}

std::optional<Rule> parse_rule(const std::string& name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Rule r : kAllRules) {
    if (upper == rule_name(r)) return r;
  }
  return std::nullopt;
}

namespace {

// Released-but-unstarted operations that need `machine`.
int queue_length(const SimState& state, int machine) {
  const Instance& inst = state.instance();
  int count = 0;
  for (int j = 0; j < inst.num_jobs(); ++j) {
    const int r = state.next_rank(j);
    if (r >= inst.num_machines() || inst.op(j, r).machine != machine) continue;
    if (r == 0 || state.status(NodeId{j, r - 1}) == OpStatus::kDone) ++count;
  }
  return count;
}

}  // namespace

double priority(Rule rule, const SimState& state, NodeId v) {
  const Instance& inst = state.instance();
  const int m = inst.num_machines();
  switch (rule) {
    case Rule::kMTWR: return m - v.rank;
    case Rule::kLTWR: return -(m - v.rank);
    case Rule::kSPT: return -inst.op(v.job, v.rank).proc_time;
    case Rule::kLPT: return inst.op(v.job, v.rank).proc_time;
    case Rule::kFIFO: return -state.ready_time(v).value_or(0);
    case Rule::kLIFO: return state.ready_time(v).value_or(0);
    case Rule::kSQNO:
    case Rule::kLQNO: {
      const int q = v.rank + 1 < m ? queue_length(state, inst.op(v.job, v.rank + 1).machine) : 0;
      return rule == Rule::kSQNO ? -q : q;
    }
    case Rule::kSTPT: return -total_processing_time(inst, v.job);
    case Rule::kLTPT: return total_processing_time(inst, v.job);
    case Rule::kRandom: break;
  }
  throw Error(ErrorCode::kInvalidArgument, "RANDOM has no priority score");
}

NodeId select(Rule rule, const SimState& state, const std::vector<NodeId>& ready, Rng& rng) {
  if (ready.empty()) throw Error(ErrorCode::kEmptyActionSet, "no ready operation to select");
  if (rule == Rule::kRandom) {
    return ready[uniform_int(rng, 0, static_cast<int>(ready.size()) - 1)];
  }
  NodeId best = ready.front();
  double best_score = priority(rule, state, best);
  for (std::size_t i = 1; i < ready.size(); ++i) {
    const double s = priority(rule, state, ready[i]);
    if (s > best_score || (s == best_score && ready[i] < best)) {
      best = ready[i];
      best_score = s;
    }
  }
  return best;
}

Decision RuleScheduler::choose(const SimState& state, const std::vector<NodeId>& ready,
                               Rng& rng) const {
  Decision d;
  d.action = select(rule_, state, ready, rng);
  return d;
}

}  // namespace isbjssp
