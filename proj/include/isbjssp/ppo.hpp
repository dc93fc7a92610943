#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "isbjssp/gnn_policy.hpp"
#include "isbjssp/nn.hpp"
#include "isbjssp/sim.hpp"

namespace isbjssp {

struct PpoConfig {
  double gamma = 1.0;
  double lambda = 0.95;
  double epsilon = 0.2;
  double alpha = 0.5;
  double beta = 0.01;
  double eta = 2.5e-4;
  int epochs = 4;
  int refresh = 100;
  int initial_hold = 100;
  double p_interrupt = 0.0;
  int t_interrupt = 50;
  int validation_size = 10;
  int validation_cadence = 20;
  int patience = 50;
  int max_iterations = 5000;
  std::uint64_t seed = 0;
  bool normalize_advantages = true;
  // Multiplies rewards before advantages and value targets. Undiscounted
  // returns run into the thousands, and at unit scale the critic's squared
  // error swamps the actor's gradient in the shared embedding.
  double reward_scale = 0.01;
  int layers = kDefaultLayers;
  // When false the wall_ms column is written as 0 so logs compare bitwise.
  bool wall_clock = true;
};

// Flat "key = value" text; unknown keys and unparsable values raise ConfigError.
PpoConfig parse_ppo_config(const std::string& text);
std::string format_ppo_config(const PpoConfig& config);

// One decision of a rollout: a policy sample whose reward includes every
// time advance up to the next decision.
struct PpoSample {
  std::shared_ptr<const GraphObservation> observation;
  int action_index = -1;
  double reward = 0.0;
  double old_log_prob = 0.0;
  double value = 0.0;
  double advantage = 0.0;
  double target = 0.0;
};

using RolloutBatch = std::vector<PpoSample>;

// Folds time-advance rewards into the preceding decision. Rewards earned
// before the first decision cannot be credited to any action and are dropped.
RolloutBatch make_batch(const std::vector<TransitionSample>& transitions);

// Backward recursion A_t = delta_t + gamma*lambda*A_{t+1}, terminal value 0.
std::vector<double> compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                                double gamma, double lambda);
// Discounted reward-to-go.
std::vector<double> value_targets(const std::vector<double>& rewards, double gamma);

// Fills advantage and target; normalises advantages when configured.
void prepare_batch(RolloutBatch& batch, const PpoConfig& config);

struct LossTerms {
  double objective = 0.0;  // mean surrogate - alpha * value error + beta * entropy
  double surrogate = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
};

// Objective to maximise. When `grads` is non-null it receives the gradient
// (accumulated, so zero it first).
LossTerms ppo_loss(const RolloutBatch& batch, const nn::ParamStore& params, const PpoConfig& config,
                   nn::ParamStore* grads);

struct TrainLogRow {
  int iteration = 0;
  double episode_return = 0.0;
  int makespan = 0;
  double validation_mean = -1.0;  // negative when not evaluated this iteration
  long long wall_ms = 0;
};

struct TrainResult {
  nn::ParamStore best;
  nn::ParamStore last;
  std::vector<TrainLogRow> log;
  double best_validation = 0.0;
  int iterations = 0;
};

// `improved` is non-null when the row's validation set a new best; it points
// at the parameters that achieved it.
using TrainObserver = std::function<void(const TrainLogRow&, const nn::ParamStore* improved)>;

// Greedy mean makespan over `instances` at the given interruption setting.
double evaluate_greedy(const std::vector<std::shared_ptr<const Instance>>& instances,
                       const nn::ParamStore& params, int layers, double p_interrupt,
                       int t_interrupt, std::uint64_t seed);

std::vector<std::shared_ptr<const Instance>> make_validation_set(const PpoConfig& config);

TrainResult train(const PpoConfig& config, const TrainObserver& observer = {});

std::string training_log_csv(const PpoConfig& config, const std::vector<TrainLogRow>& rows);

}  // namespace isbjssp
