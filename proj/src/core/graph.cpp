#include "isbjssp/graph.hpp"

#include <algorithm>
#include <sstream>

namespace isbjssp {

DisjunctiveGraph::DisjunctiveGraph(const Instance& inst)
    : num_jobs_(inst.num_jobs()),
      num_machines_(inst.num_machines()),
      present_(static_cast<std::size_t>(inst.num_operations()), 1),
      machine_of_(static_cast<std::size_t>(inst.num_operations())),
      removed_(static_cast<std::size_t>(inst.num_machines()), 0),
      members_(static_cast<std::size_t>(inst.num_machines())) {
  for (int j = 0; j < num_jobs_; ++j) {
    for (int r = 0; r < num_machines_; ++r) {
      const int idx = index({j, r});
      machine_of_[idx] = inst.op(j, r).machine;
      members_[machine_of_[idx]].push_back(idx);
    }
  }
}

int DisjunctiveGraph::present_count() const noexcept {
  return static_cast<int>(std::count(present_.begin(), present_.end(), 1));
}

std::vector<NodeId> DisjunctiveGraph::remove_machine_nodes(int machine) {
  if (removed_.at(machine)) {
    throw Error(ErrorCode::kAlreadyRemoved, "machine " + std::to_string(machine) + " already removed");
  }
  removed_[machine] = 1;
  std::vector<NodeId> out;
  out.reserve(members_[machine].size());
  for (int idx : members_[machine]) {
    present_[idx] = 0;
    out.push_back(node(idx));
  }
  return out;
}

void DisjunctiveGraph::reinstate_nodes(const std::vector<NodeId>& nodes) {
  if (nodes.empty()) return;
  const int machine = machine_of(nodes.front());
  if (!removed_[machine]) {
    throw Error(ErrorCode::kNotRemoved, "machine " + std::to_string(machine) + " is not removed");
  }
  for (const NodeId& v : nodes) {
    if (machine_of(v) != machine || present(v)) {
      throw Error(ErrorCode::kNotRemoved, "node set does not match one removed machine");
    }
  }
  for (const NodeId& v : nodes) present_[index(v)] = 1;
  // The machine is back once all of its nodes are.
  const auto& mem = members_[machine];
  if (std::all_of(mem.begin(), mem.end(), [&](int idx) { return present_[idx] != 0; })) {
    removed_[machine] = 0;
  }
}

Neighborhoods DisjunctiveGraph::neighborhoods(NodeId v) const {
  if (v.job < 0 || v.job >= num_jobs_ || v.rank < 0 || v.rank >= num_machines_ || !present(v)) {
    throw Error(ErrorCode::kAbsentNode, "node (" + std::to_string(v.job) + "," +
                                            std::to_string(v.rank) + ") is not present");
  }
  Neighborhoods nb;
  if (v.rank > 0 && present({v.job, v.rank - 1})) nb.preceding.push_back({v.job, v.rank - 1});
  if (v.rank + 1 < num_machines_ && present({v.job, v.rank + 1})) {
    nb.succeeding.push_back({v.job, v.rank + 1});
  }
  const int self = index(v);
  for (int idx : members_[machine_of_[self]]) {
    if (idx != self && present_[idx]) nb.disjunctive.push_back(node(idx));
  }
  return nb;
}

int DisjunctiveGraph::conjunctive_edge_count() const {
  int count = 0;
  for (int j = 0; j < num_jobs_; ++j) {
    for (int r = 0; r + 1 < num_machines_; ++r) {
      if (present({j, r}) && present({j, r + 1})) ++count;
    }
  }
  return count;
}

int DisjunctiveGraph::disjunctive_edge_count() const {
  int count = 0;
  for (const auto& mem : members_) {
    int k = 0;
    for (int idx : mem) k += present_[idx] ? 1 : 0;
    count += k * (k - 1) / 2;
  }
  return count;
}

std::string DisjunctiveGraph::edge_list() const {
  std::ostringstream out;
  for (int j = 0; j < num_jobs_; ++j) {
    for (int r = 0; r + 1 < num_machines_; ++r) {
      if (present({j, r}) && present({j, r + 1})) {
        out << index({j, r}) << " -> " << index({j, r + 1}) << " conj\n";
      }
    }
  }
  for (const auto& mem : members_) {
    for (std::size_t a = 0; a < mem.size(); ++a) {
      if (!present_[mem[a]]) continue;
      for (std::size_t b = a + 1; b < mem.size(); ++b) {
        if (present_[mem[b]]) out << mem[a] << " -> " << mem[b] << " disj\n";
      }
    }
  }
  return out.str();
}

}  // namespace isbjssp
