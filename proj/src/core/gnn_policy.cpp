#include "isbjssp/gnn_policy.hpp"

#include <algorithm>
#include <cmath>

namespace isbjssp {

using nn::Matrix;
using nn::Net;
using nn::Vector;

namespace {

void check_observation(const GraphObservation& obs) {
  const auto n = static_cast<std::size_t>(obs.size());
  if (obs.features.size() != n * kFeatureDim || obs.preceding.size() != n ||
      obs.succeeding.size() != n || obs.group_of.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "observation arrays disagree with node count");
  }
}

Matrix initial_features(const GraphObservation& obs) {
  const int n = obs.size();
  Matrix h0(kFeatureDim, n);
  for (int i = 0; i < n; ++i) {
    for (int f = 0; f < kFeatureDim; ++f) h0(f, i) = obs.features[static_cast<std::size_t>(i) * kFeatureDim + f];
  }
  return h0;
}

}  // namespace

Matrix embed(const GraphObservation& obs, const nn::ParamStore& params, int layers,
             EmbedCache* cache) {
  if (layers < 1) throw Error(ErrorCode::kDimensionMismatch, "embed needs at least one layer");
  check_observation(obs);
  const int n = obs.size();
  const Matrix h0 = initial_features(obs);
  Matrix h = h0;
  if (cache) cache->layers.assign(static_cast<std::size_t>(layers), {});

  Matrix sum_prec(kFeatureDim, n);
  Matrix sum_succ(kFeatureDim, n);
  Matrix sum_disj(kFeatureDim, n);
  Matrix cat(6 * kFeatureDim, n);
  for (int k = 0; k < layers; ++k) {
    sum_prec.setZero();
    sum_succ.setZero();
    sum_disj.setZero();
    for (int v = 0; v < n; ++v) {
      if (obs.preceding[v] >= 0) sum_prec.col(v) = h.col(obs.preceding[v]);
      if (obs.succeeding[v] >= 0) sum_succ.col(v) = h.col(obs.succeeding[v]);
      for (int u : obs.machine_groups[obs.group_of[v]]) {
        if (u != v) sum_disj.col(v) += h.col(u);
      }
    }
    const Vector graph_sum = h.rowwise().sum();

    LayerCache* lc = cache ? &cache->layers[k] : nullptr;
    Matrix p = params.net(Net::kPrec).forward(sum_prec, lc ? &lc->prec : nullptr);
    Matrix s = params.net(Net::kSucc).forward(sum_succ, lc ? &lc->succ : nullptr);
    Matrix d = params.net(Net::kDisj).forward(sum_disj, lc ? &lc->disj : nullptr);

    cat.middleRows(0, kFeatureDim) = p.cwiseMax(0.0);
    cat.middleRows(kFeatureDim, kFeatureDim) = s.cwiseMax(0.0);
    cat.middleRows(2 * kFeatureDim, kFeatureDim) = d.cwiseMax(0.0);
    cat.middleRows(3 * kFeatureDim, kFeatureDim) = graph_sum.cwiseMax(0.0).replicate(1, n);
    cat.middleRows(4 * kFeatureDim, kFeatureDim) = h;
    cat.middleRows(5 * kFeatureDim, kFeatureDim) = h0;

    Matrix next = params.net(Net::kNode).forward(cat, lc ? &lc->node : nullptr);
    if (lc) {
      lc->h_prev = std::move(h);
      lc->prec_out = std::move(p);
      lc->succ_out = std::move(s);
      lc->disj_out = std::move(d);
      lc->graph_sum = graph_sum;
    }
    h = std::move(next);
  }
  return h;
}

void embed_backward(const GraphObservation& obs, const nn::ParamStore& params,
                    const EmbedCache& cache, const Matrix& upstream, nn::ParamStore& grads) {
  const int n = obs.size();
  if (upstream.rows() != kFeatureDim || upstream.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding gradient shape mismatch");
  }
  if (cache.layers.empty()) throw Error(ErrorCode::kNoCache, "embed_backward without cache");
  const auto positive = [](const Matrix& m) { return (m.array() > 0.0).cast<double>().matrix(); };

  Matrix dh = upstream;
  for (std::size_t k = cache.layers.size(); k-- > 0;) {
    const LayerCache& lc = cache.layers[k];
    const Matrix dcat = params.net(Net::kNode).backward(lc.node, dh, grads.net(Net::kNode));

    const Matrix dp = dcat.middleRows(0, kFeatureDim).cwiseProduct(positive(lc.prec_out));
    const Matrix ds = dcat.middleRows(kFeatureDim, kFeatureDim).cwiseProduct(positive(lc.succ_out));
    const Matrix dd = dcat.middleRows(2 * kFeatureDim, kFeatureDim).cwiseProduct(positive(lc.disj_out));
    const Matrix dsum_prec = params.net(Net::kPrec).backward(lc.prec, dp, grads.net(Net::kPrec));
    const Matrix dsum_succ = params.net(Net::kSucc).backward(lc.succ, ds, grads.net(Net::kSucc));
    const Matrix dsum_disj = params.net(Net::kDisj).backward(lc.disj, dd, grads.net(Net::kDisj));

    Matrix dprev = dcat.middleRows(4 * kFeatureDim, kFeatureDim);
    const Vector dgraph = dcat.middleRows(3 * kFeatureDim, kFeatureDim)
                              .rowwise()
                              .sum()
                              .cwiseProduct(positive(lc.graph_sum));
    dprev.colwise() += dgraph;
    for (int v = 0; v < n; ++v) {
      if (obs.preceding[v] >= 0) dprev.col(obs.preceding[v]) += dsum_prec.col(v);
      if (obs.succeeding[v] >= 0) dprev.col(obs.succeeding[v]) += dsum_succ.col(v);
      for (int u : obs.machine_groups[obs.group_of[v]]) {
        if (u != v) dprev.col(u) += dsum_disj.col(v);
      }
    }
    dh = std::move(dprev);
  }
}

void actor_probs(const Matrix& embeddings, const std::vector<int>& actions,
                 const nn::ParamStore& params, PolicyOutput& out, nn::MlpCache* cache,
                 Matrix* action_embeddings) {
  if (actions.empty()) throw Error(ErrorCode::kEmptyActionSet, "actor needs a nonempty action set");
  const auto na = static_cast<Eigen::Index>(actions.size());
  Matrix ha(embeddings.rows(), na);
  for (Eigen::Index i = 0; i < na; ++i) ha.col(i) = embeddings.col(actions[i]);
  const Matrix z = params.net(Net::kActor).forward(ha, cache);
  out.logits.assign(z.data(), z.data() + na);
  const double zmax = *std::max_element(out.logits.begin(), out.logits.end());
  double total = 0.0;
  for (double l : out.logits) total += std::exp(l - zmax);
  const double log_total = std::log(total);
  out.log_probs.resize(actions.size());
  out.probs.resize(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    out.log_probs[i] = out.logits[i] - zmax - log_total;
    out.probs[i] = std::exp(out.log_probs[i]);
  }
  if (action_embeddings) *action_embeddings = std::move(ha);
}

double critic_value(const Matrix& embeddings, const nn::ParamStore& params, nn::MlpCache* cache) {
  if (embeddings.cols() == 0) throw Error(ErrorCode::kEmptyGraph, "critic needs at least one node");
  const Matrix sum = embeddings.rowwise().sum();
  return params.net(Net::kCritic).forward(sum, cache)(0, 0);
}

PolicyOutput evaluate_policy(const GraphObservation& obs, const nn::ParamStore& params, int layers,
                             PolicyCache* cache) {
  PolicyOutput out;
  out.embeddings = embed(obs, params, layers, cache ? &cache->embed : nullptr);
  if (!obs.actions.empty()) {
    actor_probs(out.embeddings, obs.actions, params, out, cache ? &cache->actor : nullptr,
                cache ? &cache->action_embeddings : nullptr);
  }
  out.value = critic_value(out.embeddings, params, cache ? &cache->critic : nullptr);
  if (cache) cache->valid = true;
  return out;
}

void policy_backward(const GraphObservation& obs, const nn::ParamStore& params,
                     const PolicyCache& cache, const std::vector<double>& dlogits, double dvalue,
                     nn::ParamStore& grads) {
  if (!cache.valid) throw Error(ErrorCode::kNoCache, "policy_backward without cache");
  if (dlogits.size() != obs.actions.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "dlogits length differs from action count");
  }
  Matrix dh = Matrix::Zero(kFeatureDim, obs.size());
  if (!obs.actions.empty()) {
    const Matrix up = Eigen::Map<const Matrix>(dlogits.data(), 1, static_cast<Eigen::Index>(dlogits.size()));
    const Matrix dha = params.net(Net::kActor).backward(cache.actor, up, grads.net(Net::kActor));
    for (std::size_t i = 0; i < obs.actions.size(); ++i) dh.col(obs.actions[i]) += dha.col(static_cast<Eigen::Index>(i));
  }
  const Matrix dv = Matrix::Constant(1, 1, dvalue);
  const Matrix dsum = params.net(Net::kCritic).backward(cache.critic, dv, grads.net(Net::kCritic));
  dh.colwise() += dsum.col(0);
  embed_backward(obs, params, cache.embed, dh, grads);
}

ActResult act(const GraphObservation& obs, const nn::ParamStore& params, int layers, ActMode mode,
              Rng& rng) {
  if (obs.actions.empty()) throw Error(ErrorCode::kEmptyActionSet, "act needs a nonempty action set");
  const PolicyOutput out = evaluate_policy(obs, params, layers);
  ActResult r;
  r.value = out.value;
  if (mode == ActMode::kGreedy) {
    // Actions are listed in ascending (job, rank); the first maximum wins.
    r.action_index = static_cast<int>(std::max_element(out.probs.begin(), out.probs.end()) - out.probs.begin());
  } else {
    const double u = uniform_real(rng);
    double acc = 0.0;
    r.action_index = static_cast<int>(out.probs.size()) - 1;
    for (std::size_t i = 0; i < out.probs.size(); ++i) {
      acc += out.probs[i];
      if (u < acc) {
        r.action_index = static_cast<int>(i);
        break;
      }
    }
  }
  r.log_prob = out.log_probs[r.action_index];
  return r;
}

Decision PolicyScheduler::choose(const SimState& state, const std::vector<NodeId>& ready,
                                 Rng& rng) const {
  auto obs = std::make_shared<GraphObservation>(state.observe(ready));
  const ActResult r = act(*obs, *params_, layers_, mode_, rng);
  Decision d;
  d.action = ready[r.action_index];
  d.log_prob = r.log_prob;
  d.value = r.value;
  d.action_index = r.action_index;
  d.observation = std::move(obs);
  return d;
}

}  // namespace isbjssp
