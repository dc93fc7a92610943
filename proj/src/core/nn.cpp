#include "isbjssp/nn.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace isbjssp::nn {

Mlp::Mlp(const std::vector<int>& dims) {
  if (dims.size() < 2) throw Error(ErrorCode::kDimensionMismatch, "an MLP needs at least one layer");
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    layers_.push_back({Matrix::Zero(dims[i + 1], dims[i]), Vector::Zero(dims[i + 1])});
  }
}

std::vector<int> Mlp::dims() const {
  std::vector<int> d;
  if (layers_.empty()) return d;
  d.push_back(input_dim());
  for (const auto& l : layers_) d.push_back(static_cast<int>(l.weight.rows()));
  return d;
}

Matrix Mlp::forward(const Matrix& x, MlpCache* cache) const {
  if (x.rows() != input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "MLP input has " + std::to_string(x.rows()) +
                                                   " rows, expected " + std::to_string(input_dim()));
  }
  if (cache) {
    cache->inputs.clear();
    cache->inputs.reserve(layers_.size());
    cache->valid = true;
  }
  Matrix h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Linear& l = layers_[i];
    Matrix z = l.weight * h;
    z.colwise() += l.bias;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
    if (cache) {
      cache->inputs.push_back(std::move(h));
    }
    h = std::move(z);
  }
  return h;
}

Vector Mlp::forward_vector(const Vector& x) const {
  return forward(Matrix(x)).col(0);
}

Matrix Mlp::backward(const MlpCache& cache, const Matrix& upstream, Mlp& grads) const {
  if (!cache.valid || cache.inputs.size() != layers_.size()) {
    throw Error(ErrorCode::kNoCache, "backward called without a forward cache");
  }
  if (upstream.rows() != output_dim() || upstream.cols() != cache.inputs.front().cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "upstream gradient shape mismatch");
  }
  Matrix delta = upstream;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Matrix& in = cache.inputs[i];
    Linear& g = grads.layers_[i];
    g.weight.noalias() += delta * in.transpose();
    g.bias += delta.rowwise().sum();
    Matrix down = layers_[i].weight.transpose() * delta;
    if (i > 0) {
      // `in` is the rectified output of the previous layer; zero entries had
      // a non-positive pre-activation.
      down = down.cwiseProduct((in.array() > 0.0).cast<double>().matrix());
    }
    delta = std::move(down);
  }
  return delta;
}

void Mlp::set_zero() {
  for (auto& l : layers_) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

std::vector<int> standard_dims(Net k) {
  switch (k) {
    case Net::kPrec:
    case Net::kSucc:
    case Net::kDisj: return {8, 256, 256, 8};
    case Net::kNode: return {48, 256, 256, 8};
    case Net::kActor:
    case Net::kCritic: return {8, 256, 256, 1};
  }
  return {};
}

ParamStore::ParamStore() {
  for (int k = 0; k < 6; ++k) nets_[k] = Mlp(standard_dims(static_cast<Net>(k)));
}

std::vector<std::span<double>> ParamStore::tensors() {
  std::vector<std::span<double>> out;
  for (auto& net : nets_) {
    for (auto& l : net.layers()) {
      out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
      out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
  }
  return out;
}

std::vector<std::span<const double>> ParamStore::tensors() const {
  std::vector<std::span<const double>> out;
  for (const auto& net : nets_) {
    for (const auto& l : net.layers()) {
      out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
      out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
  }
  return out;
}

std::size_t ParamStore::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.size();
  return n;
}

void ParamStore::set_zero() {
  for (auto& net : nets_) net.set_zero();
}

void ParamStore::axpy(double a, const ParamStore& x) {
  auto dst = tensors();
  const auto src = x.tensors();
  for (std::size_t t = 0; t < dst.size(); ++t) {
    for (std::size_t i = 0; i < dst[t].size(); ++i) dst[t][i] += a * src[t][i];
  }
}

bool ParamStore::all_finite() const {
  for (const auto& t : tensors()) {
    for (double v : t) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

bool ParamStore::operator==(const ParamStore& other) const {
  const auto a = tensors();
  const auto b = other.tensors();
  if (a.size() != b.size()) return false;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t].size() != b[t].size()) return false;
    for (std::size_t i = 0; i < a[t].size(); ++i) {
      if (a[t][i] != b[t][i]) return false;
    }
  }
  return true;
}

ParamStore init_params(Rng& rng) {
  ParamStore p;
  for (auto& net : p.nets()) {
    for (auto& l : net.layers()) {
      const double bound = std::sqrt(6.0 / static_cast<double>(l.weight.cols()));
      // Fill in row-major order so the stream layout does not depend on
      // Eigen's storage order.
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) {
          l.weight(r, c) = (2.0 * uniform_real(rng) - 1.0) * bound;
        }
      }
      l.bias.setZero();
    }
  }
  return p;
}

AdamState make_adam(const ParamStore& params, double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  for (const auto& t : params.tensors()) {
    s.first_moment.emplace_back(t.size(), 0.0);
    s.second_moment.emplace_back(t.size(), 0.0);
  }
  return s;
}

void adam_step(AdamState& adam, ParamStore& params, const ParamStore& grads, bool maximize) {
  auto theta = params.tensors();
  const auto g = grads.tensors();
  if (theta.size() != g.size() || adam.first_moment.size() != theta.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam_step: tensor count mismatch");
  }
  for (std::size_t t = 0; t < theta.size(); ++t) {
    if (theta[t].size() != g[t].size() || adam.first_moment[t].size() != theta[t].size()) {
      throw Error(ErrorCode::kShapeMismatch, "adam_step: tensor shape mismatch");
    }
  }
  ++adam.step;
  const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
  const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
  const double sign = maximize ? 1.0 : -1.0;
  for (std::size_t t = 0; t < theta.size(); ++t) {
    auto& m = adam.first_moment[t];
    auto& v = adam.second_moment[t];
    for (std::size_t i = 0; i < theta[t].size(); ++i) {
      const double gi = g[t][i];
      m[i] = adam.beta1 * m[i] + (1.0 - adam.beta1) * gi;
      v[i] = adam.beta2 * v[i] + (1.0 - adam.beta2) * gi * gi;
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      theta[t][i] += sign * adam.learning_rate * mhat / (std::sqrt(vhat) + adam.epsilon);
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr const char* kCheckpointHeader = "isbjssp-params v1";

void write_double(std::ostream& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, ptr - buf);
}

}  // namespace

std::string params_to_string(const ParamStore& params) {
  std::ostringstream out;
  out << kCheckpointHeader << '\n';
  for (int k = 0; k < 6; ++k) {
    const auto& layers = params.nets()[k].layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string prefix = std::string(1, kNetKeys[k]) + "." + std::to_string(i);
      const Matrix& w = layers[i].weight;
      out << prefix << ".weight " << w.rows() << ' ' << w.cols() << '\n';
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
          if (c) out << ' ';
          write_double(out, w(r, c));
        }
        out << '\n';
      }
      const Vector& b = layers[i].bias;
      out << prefix << ".bias " << b.size() << " 1\n";
      for (Eigen::Index r = 0; r < b.size(); ++r) {
        if (r) out << ' ';
        write_double(out, b(r));
      }
      out << '\n';
    }
  }
  return out.str();
}

ParamStore params_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointHeader) {
    throw Error(ErrorCode::kIoError, "checkpoint: missing or unknown header");
  }
  ParamStore params;
  auto read_block = [&](const std::string& key, Eigen::Index rows, Eigen::Index cols, auto&& set) {
    std::string got;
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    if (!(in >> got >> r >> c)) throw Error(ErrorCode::kIoError, "checkpoint: truncated at " + key);
    if (got != key) throw Error(ErrorCode::kShapeMismatch, "checkpoint: expected " + key + ", found " + got);
    if (r != rows || c != cols) {
      throw Error(ErrorCode::kShapeMismatch, "checkpoint: " + key + " has shape " + std::to_string(r) +
                                                 "x" + std::to_string(c) + ", expected " +
                                                 std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        std::string tok;
        if (!(in >> tok)) throw Error(ErrorCode::kIoError, "checkpoint: truncated values in " + key);
        double v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
          throw Error(ErrorCode::kIoError, "checkpoint: bad number in " + key);
        }
        set(i, j, v);
      }
    }
  };
  for (int k = 0; k < 6; ++k) {
    auto& layers = params.nets()[k].layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string prefix = std::string(1, kNetKeys[k]) + "." + std::to_string(i);
      Matrix& w = layers[i].weight;
      read_block(prefix + ".weight", w.rows(), w.cols(),
                 [&](Eigen::Index r, Eigen::Index c, double v) { w(r, c) = v; });
      Vector& b = layers[i].bias;
      read_block(prefix + ".bias", b.size(), 1, [&](Eigen::Index r, Eigen::Index, double v) { b(r) = v; });
    }
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorCode::kShapeMismatch, "checkpoint: unexpected trailing data");
  return params;
}

void save_params(const ParamStore& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << params_to_string(params);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

ParamStore load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return params_from_string(buf.str());
}

}  // namespace isbjssp::nn
