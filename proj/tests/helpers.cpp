#include "helpers.hpp"

#include <algorithm>
#include <filesystem>

namespace isbjssp::testing {

std::string data_path(const std::string& rel) { return std::string(ISBJSSP_DATA_DIR) + "/" + rel; }

std::vector<std::shared_ptr<const Instance>> load_dir(const std::string& rel) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(data_path(rel))) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::shared_ptr<const Instance>> out;
  for (const auto& f : files) out.push_back(std::make_shared<const Instance>(load_instance_file(f.string())));
  return out;
}

Instance make_instance(const std::vector<std::vector<std::pair<int, int>>>& jobs) {
  std::vector<std::vector<Operation>> ops;
  for (const auto& j : jobs) {
    ops.emplace_back();
    for (auto [m, p] : j) ops.back().push_back({m, p});
  }
  return Instance(ops, "test");
}

Instance fig1_instance() {
  return make_instance({{{0, 3}, {1, 2}, {2, 2}}, {{0, 2}, {2, 1}, {1, 4}}, {{1, 4}, {2, 3}, {0, 1}}});
}

nn::ParamStore random_params(std::uint64_t seed) {
  Rng rng(seed);
  nn::ParamStore params = nn::init_params(rng);
  for (auto& net : params.nets()) {
    for (auto& l : net.layers()) {
      for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = 0.2 * uniform_real(rng) - 0.1;
    }
  }
  return params;
}

}  // namespace isbjssp::testing
