#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "isbjssp/sim.hpp"

namespace isbjssp {

enum class Rule : std::uint8_t {
  kMTWR,
  kLTWR,
  kSPT,
  kLPT,
  kFIFO,
  kLIFO,
  kSQNO,
  kLQNO,
  kSTPT,
  kLTPT,
  kRandom,
};

inline constexpr std::array<Rule, 11> kAllRules = {
    Rule::kMTWR, Rule::kLTWR, Rule::kSPT,  Rule::kLPT,  Rule::kFIFO,  Rule::kLIFO,
    Rule::kSQNO, Rule::kLQNO, Rule::kSTPT, Rule::kLTPT, Rule::kRandom,
};

const char* rule_name(Rule rule) noexcept;
// Case-insensitive.
std::optional<Rule> parse_rule(const std::string& name);

// Higher is preferred. Not defined for kRandom.
double priority(Rule rule, const SimState& state, NodeId v);

// Argmax of priority, ties to the smallest (job, rank); kRandom draws
// uniformly from `ready`.
NodeId select(Rule rule, const SimState& state, const std::vector<NodeId>& ready, Rng& rng);

class RuleScheduler : public Scheduler {
 public:
  explicit RuleScheduler(Rule rule) : rule_(rule) {}
  Decision choose(const SimState& state, const std::vector<NodeId>& ready,
                  Rng& rng) const override;
  std::string name() const override { return rule_name(rule_); }
  Rule rule() const noexcept { return rule_; }

 private:
  Rule rule_;
};

}  // namespace isbjssp
