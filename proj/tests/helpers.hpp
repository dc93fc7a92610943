#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isbjssp/instance.hpp"
#include "isbjssp/nn.hpp"

namespace isbjssp::testing {

std::string data_path(const std::string& rel);

// Files of a data subdirectory in name order.
std::vector<std::shared_ptr<const Instance>> load_dir(const std::string& rel);

// 3x3 instance whose nodes 1,5,6 share a machine, as do 2,4,7 and 0,3,8.
Instance fig1_instance();

Instance make_instance(const std::vector<std::vector<std::pair<int, int>>>& jobs);

// Initialised parameters with small random biases, so no rectifier sits
// exactly at its kink.
nn::ParamStore random_params(std::uint64_t seed);

}  // namespace isbjssp::testing
