#pragma once

#include <memory>
#include <vector>

#include "isbjssp/nn.hpp"
#include "isbjssp/sim.hpp"

namespace isbjssp {

inline constexpr int kDefaultLayers = 3;

struct LayerCache {
  nn::Matrix h_prev;  // 8 x N
  nn::MlpCache prec, succ, disj, node;
  nn::Matrix prec_out, succ_out, disj_out;  // before the rectifier
  nn::Vector graph_sum;                     // before the rectifier
};

struct EmbedCache {
  std::vector<LayerCache> layers;
};

// K message-passing layers sharing one set of networks. Returns 8 x N
// embeddings, one column per present node of the observation.
nn::Matrix embed(const GraphObservation& obs, const nn::ParamStore& params, int layers,
                 EmbedCache* cache = nullptr);

// Backpropagates d(objective)/d(h^(K)) into the f_p, f_s, f_d, f_n gradients.
void embed_backward(const GraphObservation& obs, const nn::ParamStore& params,
                    const EmbedCache& cache, const nn::Matrix& upstream, nn::ParamStore& grads);

struct PolicyOutput {
  std::vector<double> logits;     // over obs.actions
  std::vector<double> probs;
  std::vector<double> log_probs;
  double value = 0.0;
  nn::Matrix embeddings;
};

struct PolicyCache {
  EmbedCache embed;
  nn::MlpCache actor;
  nn::MlpCache critic;
  nn::Matrix action_embeddings;
  bool valid = false;
};

// Softmax over f_l of the action embeddings, with max subtraction.
void actor_probs(const nn::Matrix& embeddings, const std::vector<int>& actions,
                 const nn::ParamStore& params, PolicyOutput& out, nn::MlpCache* cache = nullptr,
                 nn::Matrix* action_embeddings = nullptr);
double critic_value(const nn::Matrix& embeddings, const nn::ParamStore& params,
                    nn::MlpCache* cache = nullptr);

// Full forward pass. An empty action set yields empty probability vectors.
PolicyOutput evaluate_policy(const GraphObservation& obs, const nn::ParamStore& params, int layers,
                             PolicyCache* cache = nullptr);

// d(objective)/d(logits) and d(objective)/d(value) into parameter gradients.
void policy_backward(const GraphObservation& obs, const nn::ParamStore& params,
                     const PolicyCache& cache, const std::vector<double>& dlogits, double dvalue,
                     nn::ParamStore& grads);

enum class ActMode { kSample, kGreedy };

struct ActResult {
  int action_index = -1;  // into obs.actions
  double log_prob = 0.0;
  double value = 0.0;
};

ActResult act(const GraphObservation& obs, const nn::ParamStore& params, int layers, ActMode mode,
              Rng& rng);

class PolicyScheduler : public Scheduler {
 public:
  PolicyScheduler(std::shared_ptr<const nn::ParamStore> params, ActMode mode,
                  int layers = kDefaultLayers)
      : params_(std::move(params)), mode_(mode), layers_(layers) {}

  Decision choose(const SimState& state, const std::vector<NodeId>& ready,
                  Rng& rng) const override;
  std::string name() const override { return "GNN-RL"; }

 private:
  std::shared_ptr<const nn::ParamStore> params_;
  ActMode mode_;
  int layers_;
};

}  // namespace isbjssp
