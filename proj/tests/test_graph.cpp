#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "isbjssp/graph.hpp"
#include "isbjssp/sim.hpp"

using namespace isbjssp;

namespace {

std::vector<int> flat(const DisjunctiveGraph& g, const std::vector<NodeId>& nodes) {
  std::vector<int> out;
  for (auto v : nodes) out.push_back(g.index(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("fig1 neighborhoods") {
  const DisjunctiveGraph g(testing::fig1_instance());
  CHECK(g.num_nodes() == 9);
  const auto n1 = g.neighborhoods(g.node(1));
  CHECK(flat(g, n1.disjunctive) == std::vector<int>{5, 6});
  CHECK(flat(g, n1.preceding) == std::vector<int>{0});
  CHECK(flat(g, n1.succeeding) == std::vector<int>{2});
  const auto n4 = g.neighborhoods(g.node(4));
  CHECK(flat(g, n4.preceding) == std::vector<int>{3});
  CHECK(flat(g, n4.succeeding) == std::vector<int>{5});
  CHECK(flat(g, n4.disjunctive) == std::vector<int>{2, 7});
  CHECK(g.neighborhoods(g.node(3)).preceding.empty());
}

TEST_CASE("1x1 graph has no edges") {
  const DisjunctiveGraph g(parse_instance("1 1\n0 7"));
  CHECK(g.num_nodes() == 1);
  CHECK(g.conjunctive_edge_count() == 0);
  CHECK(g.disjunctive_edge_count() == 0);
  CHECK(g.edge_list().empty());
}

TEST_CASE("edge counts match the formulas and the enumerated list") {
  Rng rng(5);
  const Instance inst = generate_instance(5, 5, rng);
  const DisjunctiveGraph g(inst);
  CHECK(g.conjunctive_edge_count() == 20);
  CHECK(g.disjunctive_edge_count() == 5 * 10);
  for (int m = 0; m < 5; ++m) CHECK(g.machine_members(m).size() == 5);
  std::istringstream lines(g.edge_list());
  int conj = 0, disj = 0;
  for (std::string line; std::getline(lines, line);) {
    if (line.ends_with(" conj")) ++conj;
    if (line.ends_with(" disj")) ++disj;
  }
  CHECK(conj == 20);
  CHECK(disj == 50);
}

TEST_CASE("removal hides nodes and edges; reinstatement restores the topology") {
  const Instance inst = testing::fig1_instance();
  DisjunctiveGraph g(inst);
  const DisjunctiveGraph before = g;
  const std::string edges_before = g.edge_list();
  const auto removed = g.remove_machine_nodes(g.machine_of(g.node(1)));
  CHECK(flat(g, removed) == std::vector<int>{1, 5, 6});
  for (int idx : {1, 5, 6}) CHECK_FALSE(g.present_index(idx));
  CHECK(g.present_count() == 6);
  std::istringstream lines(g.edge_list());
  for (std::string line; std::getline(lines, line);) {
    int a = -1, b = -1;
    std::string arrow;
    std::istringstream(line) >> a >> arrow >> b;
    for (int gone : {1, 5, 6}) {
      CHECK(a != gone);
      CHECK(b != gone);
    }
  }
  CHECK(g.neighborhoods(g.node(0)).succeeding.empty());
  CHECK(g.neighborhoods(g.node(4)).succeeding.empty());
  CHECK_THROWS_AS(g.neighborhoods(g.node(5)), Error);
  g.reinstate_nodes(removed);
  CHECK(g == before);
  CHECK(g.edge_list() == edges_before);
}

TEST_CASE("removal errors") {
  DisjunctiveGraph g(testing::fig1_instance());
  auto removed = g.remove_machine_nodes(0);
  try {
    g.remove_machine_nodes(0);
    FAIL("expected AlreadyRemoved");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAlreadyRemoved);
  }
  g.reinstate_nodes(removed);
  try {
    g.reinstate_nodes(removed);
    FAIL("expected NotRemoved");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotRemoved);
  }
  try {
    g.remove_machine_nodes(1);
    g.neighborhoods(g.node(1));
    FAIL("expected AbsentNode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAbsentNode);
  }
}

TEST_CASE("removing the only machine empties a 1x1 graph") {
  DisjunctiveGraph g(parse_instance("1 1\n0 7"));
  g.remove_machine_nodes(0);
  CHECK(g.present_count() == 0);
}

TEST_CASE("neighborhoods never mention absent nodes") {
  Rng rng(9);
  const Instance inst = generate_instance(6, 6, rng);
  DisjunctiveGraph g(inst);
  g.remove_machine_nodes(2);
  g.remove_machine_nodes(4);
  for (int idx = 0; idx < g.num_nodes(); ++idx) {
    if (!g.present_index(idx)) continue;
    const auto nb = g.neighborhoods(g.node(idx));
    CHECK(nb.preceding.size() <= 1);
    CHECK(nb.succeeding.size() <= 1);
    CHECK(nb.disjunctive.size() <= 5);
    for (const auto* set : {&nb.preceding, &nb.succeeding, &nb.disjunctive}) {
      for (auto u : *set) CHECK(g.present(u));
    }
  }
}

TEST_CASE("two machines reinstated in the opposite order restore the graph") {
  Rng rng(21);
  DisjunctiveGraph g(generate_instance(4, 5, rng));
  const DisjunctiveGraph before = g;
  auto a = g.remove_machine_nodes(1);
  auto b = g.remove_machine_nodes(3);
  g.reinstate_nodes(a);
  CHECK_FALSE(g == before);
  g.reinstate_nodes(b);
  CHECK(g == before);
}

TEST_CASE("node features") {
  // Job 0's second operation is not ready at t=0.
  const Instance inst = testing::make_instance({{{0, 7}, {1, 10}}, {{1, 3}, {0, 2}}});
  SimState s(std::make_shared<const Instance>(inst), 0.0, 50, 1);
  const auto f = node_features(s, {0, 1});
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 0.0);
  CHECK(f[2] == 0.0);
  CHECK(f[3] == doctest::Approx(1.0));
  CHECK(f[4] == 0.0);
  CHECK(f[5] == doctest::Approx(0.5));  // one of two operations left, v included
  CHECK(f[6] == 0.0);
  CHECK(f[7] == 0.0);
  const auto g = node_features(s, {1, 0});
  CHECK(g[3] == doctest::Approx(0.3));
  CHECK(g[5] == doctest::Approx(1.0));
}

TEST_CASE("remaining time of an in-flight operation") {
  auto inst = std::make_shared<const Instance>(parse_instance("1 1\n0 8"));
  SimState s(inst, 0.0, 50, 0);
  s.begin_step();
  s.apply_action({0, 0});
  for (int t = 0; t < 3; ++t) {
    s.advance_time();
    s.begin_step();
  }
  const auto f = node_features(s, {0, 0});
  CHECK(f[1] == 1.0);
  CHECK(f[7] == doctest::Approx(0.625));
  CHECK(f[4] == doctest::Approx(3.0 / 8.0));
  for (int t = 0; t < 5; ++t) {
    s.advance_time();
    s.begin_step();
  }
  const auto done = node_features(s, {0, 0});
  CHECK(done[2] == 1.0);
  CHECK(done[4] == doctest::Approx(1.0));
  CHECK(done[7] == 0.0);
}

TEST_CASE("waiting time grows while a ready operation waits") {
  // Both jobs start on machine 0; the second waits until t=4.
  auto inst = std::make_shared<const Instance>(testing::make_instance({{{0, 4}}, {{0, 2}}}));
  SimState s(inst, 0.0, 50, 0);
  s.begin_step();
  s.apply_action({0, 0});
  for (int t = 0; t < 2; ++t) {
    s.advance_time();
    s.begin_step();
  }
  CHECK(node_features(s, {1, 0})[6] == doctest::Approx(2.0 / 4.0));
}
