#pragma once

#include <array>
#include <string>
#include <vector>

#include "isbjssp/instance.hpp"

namespace isbjssp {

struct NodeId {
  int job = 0;
  int rank = 0;

  auto operator<=>(const NodeId&) const = default;
};

struct Neighborhoods {
  std::vector<NodeId> preceding;   // 0 or 1 element
  std::vector<NodeId> succeeding;  // 0 or 1 element
  std::vector<NodeId> disjunctive;
};

// Dynamic disjunctive graph. Conjunctive edges follow job order; the
// disjunctive cliques are implicit in machine membership. Removing a machine
// only clears presence flags, so reinstating restores the exact topology.
class DisjunctiveGraph {
 public:
  DisjunctiveGraph() = default;
  explicit DisjunctiveGraph(const Instance& inst);

  int num_jobs() const noexcept { return num_jobs_; }
  int num_machines() const noexcept { return num_machines_; }
  int num_nodes() const noexcept { return num_jobs_ * num_machines_; }

  int index(NodeId v) const noexcept { return v.job * num_machines_ + v.rank; }
  NodeId node(int index) const noexcept { return {index / num_machines_, index % num_machines_}; }

  bool present(NodeId v) const { return present_.at(index(v)) != 0; }
  bool present_index(int idx) const noexcept { return present_[idx] != 0; }
  int machine_of(NodeId v) const { return machine_of_.at(index(v)); }
  bool machine_removed(int machine) const { return removed_.at(machine) != 0; }
  int present_count() const noexcept;

  // Node indices that use `machine`, in job order.
  const std::vector<int>& machine_members(int machine) const { return members_.at(machine); }

  std::vector<NodeId> remove_machine_nodes(int machine);
  void reinstate_nodes(const std::vector<NodeId>& nodes);

  Neighborhoods neighborhoods(NodeId v) const;

  // Edge counts over present nodes; disjunctive edges are undirected pairs.
  int conjunctive_edge_count() const;
  int disjunctive_edge_count() const;

  // One edge per line: "a -> b conj" for job precedence and "a -> b disj"
  // (a < b, both present) for machine sharing. Node labels are flat indices.
  std::string edge_list() const;

  bool operator==(const DisjunctiveGraph&) const = default;

 private:
  int num_jobs_ = 0;
  int num_machines_ = 0;
  std::vector<char> present_;
  std::vector<int> machine_of_;
  std::vector<char> removed_;
  std::vector<std::vector<int>> members_;
};

constexpr int kFeatureDim = 8;
using NodeFeatures = std::array<double, kFeatureDim>;

class SimState;

// Components: status one-hot (not started, processing, done), processing
// time, degree of completion of the job, succeeding operations (v included)
// over m, waiting time, remaining time. Times are divided by the instance's
// largest processing time.
NodeFeatures node_features(const SimState& state, NodeId v);

}  // namespace isbjssp
