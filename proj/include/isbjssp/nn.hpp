#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "isbjssp/common.hpp"

namespace isbjssp::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Linear {
  Matrix weight;  // out x in
  Vector bias;    // out
};

// Input of every layer, retained by forward for the backward pass. Columns
// are samples.
struct MlpCache {
  std::vector<Matrix> inputs;
  bool valid = false;
};

// Affine layers with rectifiers between them and a linear output layer.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(const std::vector<int>& dims);

  int input_dim() const { return static_cast<int>(layers_.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers_.back().weight.rows()); }
  std::vector<Linear>& layers() noexcept { return layers_; }
  const std::vector<Linear>& layers() const noexcept { return layers_; }
  std::vector<int> dims() const;

  Matrix forward(const Matrix& x, MlpCache* cache = nullptr) const;
  Vector forward_vector(const Vector& x) const;

  // Accumulates parameter gradients into `grads` (same shape) and returns the
  // gradient with respect to the input.
  Matrix backward(const MlpCache& cache, const Matrix& upstream, Mlp& grads) const;

  void set_zero();

 private:
  std::vector<Linear> layers_;
};

enum class Net : int { kPrec = 0, kSucc, kDisj, kNode, kActor, kCritic };
inline constexpr std::array<char, 6> kNetKeys = {'p', 's', 'd', 'n', 'l', 'v'};

// The six networks f_p, f_s, f_d, f_n, f_l, f_v.
class ParamStore {
 public:
  ParamStore();  // zero-initialised, standard dimensions

  Mlp& net(Net k) { return nets_[static_cast<int>(k)]; }
  const Mlp& net(Net k) const { return nets_[static_cast<int>(k)]; }
  std::array<Mlp, 6>& nets() noexcept { return nets_; }
  const std::array<Mlp, 6>& nets() const noexcept { return nets_; }

  // Flat views over every weight and bias, in a fixed order.
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  std::size_t parameter_count() const;

  void set_zero();
  void axpy(double a, const ParamStore& x);  // this += a * x
  bool all_finite() const;

  bool operator==(const ParamStore& other) const;

 private:
  std::array<Mlp, 6> nets_;
};

// Dimensions of each network: 8-256-256-8 for p/s/d, 48-256-256-8 for n,
// 8-256-256-1 for l and v.
std::vector<int> standard_dims(Net k);

// Weights uniform in +-sqrt(6 / fan_in) (variance 2 / fan_in), biases zero.
ParamStore init_params(Rng& rng);

struct AdamState {
  double learning_rate = 2.5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long long step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

AdamState make_adam(const ParamStore& params, double learning_rate);

// Bias-corrected adaptive-moment step; ascends when `maximize`.
void adam_step(AdamState& adam, ParamStore& params, const ParamStore& grads, bool maximize);

// Text checkpoint: header line, then per matrix "<key> <rows> <cols>" followed
// by row-major values. Keys look like "n.1.weight".
void save_params(const ParamStore& params, const std::string& path);
ParamStore load_params(const std::string& path);
std::string params_to_string(const ParamStore& params);
ParamStore params_from_string(const std::string& text);

}  // namespace isbjssp::nn
