#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isbjssp/common.hpp"

namespace isbjssp {

struct Operation {
  int machine = 0;
  int proc_time = 1;

  bool operator==(const Operation&) const = default;
};

// Immutable job shop definition. Every job visits each machine exactly once,
// so a job has as many operations as there are machines.
class Instance {
 public:
  Instance() = default;
  // Validates the invariants; throws Error on violation.
  Instance(std::vector<std::vector<Operation>> jobs, std::string name = {});

  int num_jobs() const noexcept { return static_cast<int>(jobs_.size()); }
  int num_machines() const noexcept { return num_machines_; }
  int num_operations() const noexcept { return num_jobs() * num_machines_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::vector<Operation>& job(int j) const { return jobs_.at(j); }
  const Operation& op(int job, int rank) const { return jobs_[job][rank]; }
  const std::vector<std::vector<Operation>>& jobs() const noexcept { return jobs_; }

  int max_proc_time() const noexcept { return max_proc_time_; }

  bool operator==(const Instance& other) const {
    return num_machines_ == other.num_machines_ && jobs_ == other.jobs_;
  }

 private:
  std::vector<std::vector<Operation>> jobs_;
  int num_machines_ = 0;
  int max_proc_time_ = 0;
  std::string name_;
};

Instance parse_instance(std::string_view text, std::string name = {});
std::string serialize_instance(const Instance& inst);

Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

// Random instance: machine order is a uniform permutation per job and
// processing times are uniform integers in [1, 99].
Instance generate_instance(int num_machines, int num_jobs, Rng& rng);

// Training size distribution: m ~ U{5..9}, then n ~ U{m..9}. Returns (m, n).
std::pair<int, int> sample_training_size(Rng& rng);

int total_processing_time(const Instance& inst, int job);

}  // namespace isbjssp
