#include "isbjssp/ppo.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "isbjssp/instance.hpp"

namespace isbjssp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kConfigError, "config: bad value '" + value + "' for " + key);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorCode::kConfigError, "config: bad boolean '" + value + "' for " + key);
}

}  // namespace

PpoConfig parse_ppo_config(const std::string& text) {
  PpoConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfigError, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "gamma") c.gamma = parse_number<double>(key, value);
    else if (key == "lambda") c.lambda = parse_number<double>(key, value);
    else if (key == "epsilon") c.epsilon = parse_number<double>(key, value);
    else if (key == "alpha") c.alpha = parse_number<double>(key, value);
    else if (key == "beta") c.beta = parse_number<double>(key, value);
    else if (key == "eta") c.eta = parse_number<double>(key, value);
    else if (key == "epochs") c.epochs = parse_number<int>(key, value);
    else if (key == "refresh") c.refresh = parse_number<int>(key, value);
    else if (key == "initial_hold") c.initial_hold = parse_number<int>(key, value);
    else if (key == "p_interrupt") c.p_interrupt = parse_number<double>(key, value);
    else if (key == "t_interrupt") c.t_interrupt = parse_number<int>(key, value);
    else if (key == "validation_size") c.validation_size = parse_number<int>(key, value);
    else if (key == "validation_cadence") c.validation_cadence = parse_number<int>(key, value);
    else if (key == "patience") c.patience = parse_number<int>(key, value);
    else if (key == "max_iterations") c.max_iterations = parse_number<int>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "normalize_advantages") c.normalize_advantages = parse_bool(key, value);
    else if (key == "reward_scale") c.reward_scale = parse_number<double>(key, value);
    else if (key == "layers") c.layers = parse_number<int>(key, value);
    else if (key == "wall_clock") c.wall_clock = parse_bool(key, value);
    else throw Error(ErrorCode::kConfigError, "config: unknown key '" + key + "'");
  }
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) throw Error(ErrorCode::kConfigError, "config: gamma must lie in (0, 1]");
  if (c.lambda < 0.0 || c.lambda > 1.0) throw Error(ErrorCode::kConfigError, "config: lambda must lie in [0, 1]");
  if (!(c.epsilon > 0.0)) throw Error(ErrorCode::kConfigError, "config: epsilon must be > 0");
  if (c.epochs < 1 || c.refresh < 1 || c.initial_hold < 1 || c.layers < 1 || c.t_interrupt < 1 ||
      c.validation_size < 1 || c.validation_cadence < 1 || c.patience < 1 || c.max_iterations < 1) {
    throw Error(ErrorCode::kConfigError, "config: counts must be >= 1");
  }
  if (!(c.reward_scale > 0.0)) throw Error(ErrorCode::kConfigError, "config: reward_scale must be > 0");
  if (c.p_interrupt < 0.0 || c.p_interrupt > 1.0) {
    throw Error(ErrorCode::kConfigError, "config: p_interrupt must lie in [0, 1]");
  }
  return c;
}

std::string format_ppo_config(const PpoConfig& c) {
  std::ostringstream out;
  const auto f = format_double;
  out << "gamma = " << f(c.gamma) << '\n'
      << "lambda = " << f(c.lambda) << '\n'
      << "epsilon = " << f(c.epsilon) << '\n'
      << "alpha = " << f(c.alpha) << '\n'
      << "beta = " << f(c.beta) << '\n'
      << "eta = " << f(c.eta) << '\n'
      << "epochs = " << c.epochs << '\n'
      << "refresh = " << c.refresh << '\n'
      << "initial_hold = " << c.initial_hold << '\n'
      << "p_interrupt = " << f(c.p_interrupt) << '\n'
      << "t_interrupt = " << c.t_interrupt << '\n'
      << "validation_size = " << c.validation_size << '\n'
      << "validation_cadence = " << c.validation_cadence << '\n'
      << "patience = " << c.patience << '\n'
      << "max_iterations = " << c.max_iterations << '\n'
      << "seed = " << c.seed << '\n'
      << "normalize_advantages = " << (c.normalize_advantages ? "true" : "false") << '\n'
      << "reward_scale = " << f(c.reward_scale) << '\n'
      << "layers = " << c.layers << '\n'
      << "wall_clock = " << (c.wall_clock ? "true" : "false") << '\n';
  return out.str();
}

RolloutBatch make_batch(const std::vector<TransitionSample>& transitions) {
  RolloutBatch batch;
  for (const TransitionSample& t : transitions) {
    if (t.is_time_advance()) {
      if (!batch.empty()) batch.back().reward += t.reward;
      continue;
    }
    if (!t.observation) throw Error(ErrorCode::kInvalidArgument, "policy sample without observation");
    PpoSample s;
    s.observation = t.observation;
    s.action_index = t.action_index;
    s.reward = t.reward;
    s.old_log_prob = t.old_log_prob;
    s.value = t.value_estimate;
    batch.push_back(std::move(s));
  }
  return batch;
}

std::vector<double> compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                                double gamma, double lambda) {
  if (rewards.size() != values.size()) {
    throw Error(ErrorCode::kLengthMismatch, "compute_gae: rewards and values differ in length");
  }
  const std::size_t n = rewards.size();
  std::vector<double> adv(n, 0.0);
  double next_adv = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double next_value = t + 1 < n ? values[t + 1] : 0.0;
    const double delta = rewards[t] + gamma * next_value - values[t];
    next_adv = delta + gamma * lambda * next_adv;
    adv[t] = next_adv;
  }
  return adv;
}

std::vector<double> value_targets(const std::vector<double>& rewards, double gamma) {
  std::vector<double> out(rewards.size(), 0.0);
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    acc = rewards[t] + gamma * acc;
    out[t] = acc;
  }
  return out;
}

void prepare_batch(RolloutBatch& batch, const PpoConfig& config) {
  std::vector<double> rewards;
  std::vector<double> values;
  for (const auto& s : batch) {
    rewards.push_back(config.reward_scale * s.reward);
    values.push_back(s.value);
  }
  const auto adv = compute_gae(rewards, values, config.gamma, config.lambda);
  const auto targets = value_targets(rewards, config.gamma);
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= std::max<std::size_t>(1, adv.size());
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  var /= std::max<std::size_t>(1, adv.size());
  const double sd = std::sqrt(var);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    batch[i].advantage = config.normalize_advantages ? (adv[i] - mean) / (sd + 1e-8) : adv[i];
    batch[i].target = targets[i];
  }
}

LossTerms ppo_loss(const RolloutBatch& batch, const nn::ParamStore& params, const PpoConfig& config,
                   nn::ParamStore* grads) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyBatch, "ppo_loss on an empty batch");
  LossTerms terms;
  const double scale = 1.0 / static_cast<double>(batch.size());
  int clipped = 0;
  PolicyCache cache;
  std::vector<double> dlogits;
  for (const PpoSample& s : batch) {
    const GraphObservation& obs = *s.observation;
    const PolicyOutput out = evaluate_policy(obs, params, config.layers, grads ? &cache : nullptr);
    const int a = s.action_index;
    const double ratio = std::exp(out.log_probs[a] - s.old_log_prob);
    const double unclipped = ratio * s.advantage;
    const double clipped_ratio = std::clamp(ratio, 1.0 - config.epsilon, 1.0 + config.epsilon);
    const double clipped_term = clipped_ratio * s.advantage;
    const bool use_unclipped = unclipped <= clipped_term;
    const double surrogate = use_unclipped ? unclipped : clipped_term;
    if (!use_unclipped) ++clipped;

    double entropy = 0.0;
    for (std::size_t i = 0; i < out.probs.size(); ++i) entropy -= out.probs[i] * out.log_probs[i];
    const double verr = out.value - s.target;

    terms.surrogate += scale * surrogate;
    terms.value_loss += scale * verr * verr;
    terms.entropy += scale * entropy;

    if (!grads) continue;
    // d surrogate / d log pi(a) is ratio * A on the unclipped branch, else 0.
    const double g_logp = use_unclipped ? unclipped : 0.0;
    dlogits.assign(out.probs.size(), 0.0);
    for (std::size_t j = 0; j < out.probs.size(); ++j) {
      const double p = out.probs[j];
      const double indicator = static_cast<int>(j) == a ? 1.0 : 0.0;
      dlogits[j] = scale * (g_logp * (indicator - p) - config.beta * p * (out.log_probs[j] + entropy));
    }
    const double dvalue = scale * (-2.0 * config.alpha * verr);
    policy_backward(obs, params, cache, dlogits, dvalue, *grads);
  }
  terms.objective = terms.surrogate - config.alpha * terms.value_loss + config.beta * terms.entropy;
  terms.clip_fraction = static_cast<double>(clipped) * scale;
  return terms;
}

double evaluate_greedy(const std::vector<std::shared_ptr<const Instance>>& instances,
                       const nn::ParamStore& params, int layers, double p_interrupt,
                       int t_interrupt, std::uint64_t seed) {
  auto snapshot = std::make_shared<const nn::ParamStore>(params);
  PolicyScheduler scheduler(snapshot, ActMode::kGreedy, layers);
  double total = 0.0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    EpisodeConfig ec;
    ec.p_interrupt = p_interrupt;
    ec.t_interrupt = t_interrupt;
    ec.seed = mix_seed(seed, i);
    total += run_episode(instances[i], scheduler, ec).makespan;
  }
  return instances.empty() ? 0.0 : total / static_cast<double>(instances.size());
}

std::vector<std::shared_ptr<const Instance>> make_validation_set(const PpoConfig& config) {
  Rng rng(mix_seed(config.seed, 0x7a11da7e));
  std::vector<std::shared_ptr<const Instance>> out;
  for (int i = 0; i < config.validation_size; ++i) {
    const auto [m, n] = sample_training_size(rng);
    Instance inst = generate_instance(m, n, rng);
    inst.set_name("val" + std::to_string(i));
    out.push_back(std::make_shared<const Instance>(std::move(inst)));
  }
  return out;
}

TrainResult train(const PpoConfig& config, const TrainObserver& observer) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const auto elapsed_ms = [&]() -> long long {
    if (!config.wall_clock) return 0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
  };

  Rng init_rng(mix_seed(config.seed, 1));
  Rng instance_rng(mix_seed(config.seed, 2));
  TrainResult result;
  result.last = nn::init_params(init_rng);
  nn::AdamState adam = nn::make_adam(result.last, config.eta);
  const auto validation = make_validation_set(config);
  const std::uint64_t validation_seed = mix_seed(config.seed, 3);

  auto new_instance = [&]() {
    const auto [m, n] = sample_training_size(instance_rng);
    return std::make_shared<const Instance>(generate_instance(m, n, instance_rng));
  };
  auto instance = new_instance();
  int on_instance = 0;
  int hold = config.initial_hold;

  auto record = [&](TrainLogRow row, const nn::ParamStore* improved) {
    row.wall_ms = elapsed_ms();
    result.log.push_back(row);
    if (observer) observer(row, improved);
  };

  double best = evaluate_greedy(validation, result.last, config.layers, config.p_interrupt,
                                config.t_interrupt, validation_seed);
  result.best = result.last;
  result.best_validation = best;
  {
    TrainLogRow row;
    row.iteration = 0;
    row.validation_mean = best;
    record(row, &result.best);
  }

  int stale_evaluations = 0;
  nn::ParamStore grads;
  for (int it = 1; it <= config.max_iterations; ++it) {
    auto snapshot = std::make_shared<const nn::ParamStore>(result.last);
    PolicyScheduler sampler(snapshot, ActMode::kSample, config.layers);
    EpisodeConfig ec;
    ec.p_interrupt = config.p_interrupt;
    ec.t_interrupt = config.t_interrupt;
    ec.seed = mix_seed(config.seed, 1000 + static_cast<std::uint64_t>(it));
    ec.record_observations = true;
    const EpisodeResult episode = run_episode(instance, sampler, ec);

    RolloutBatch batch = make_batch(episode.transitions);
    if (!batch.empty()) {
      prepare_batch(batch, config);
      for (int epoch = 0; epoch < config.epochs; ++epoch) {
        grads.set_zero();
        ppo_loss(batch, result.last, config, &grads);
        nn::adam_step(adam, result.last, grads, /*maximize=*/true);
      }
    }
    result.iterations = it;

    if (++on_instance >= hold) {
      instance = new_instance();
      on_instance = 0;
      hold = config.refresh;
    }

    TrainLogRow row;
    row.iteration = it;
    row.episode_return = episode.total_return;
    row.makespan = episode.makespan;
    bool stop = false;
    bool improved = false;
    if (it % config.validation_cadence == 0) {
      const double v = evaluate_greedy(validation, result.last, config.layers, config.p_interrupt,
                                       config.t_interrupt, validation_seed);
      row.validation_mean = v;
      if (v < best) {
        best = v;
        result.best = result.last;
        result.best_validation = v;
        stale_evaluations = 0;
        improved = true;
      } else if (++stale_evaluations >= config.patience) {
        stop = true;
      }
    }
    record(row, improved ? &result.best : nullptr);
    if (stop) break;
  }
  return result;
}

std::string training_log_csv(const PpoConfig& config, const std::vector<TrainLogRow>& rows) {
  std::ostringstream out;
  std::istringstream cfg(format_ppo_config(config));
  for (std::string line; std::getline(cfg, line);) out << "# " << line << '\n';
  out << "iteration,episode_return,makespan,validation_mean,wall_ms\n";
  for (const auto& r : rows) {
    out << r.iteration << ',' << format_double(r.episode_return) << ',' << r.makespan << ',';
    if (r.validation_mean >= 0.0) out << format_double(r.validation_mean);
    out << ',' << r.wall_ms << '\n';
  }
  return out.str();
}

}  // namespace isbjssp
