#include <cmath>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "isbjssp/instance.hpp"

using namespace isbjssp;

namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

}  // namespace

TEST_CASE("minimal instance parses") {
  const Instance inst = parse_instance("1 1\n0 7");
  CHECK(inst.num_jobs() == 1);
  CHECK(inst.num_machines() == 1);
  CHECK(inst.op(0, 0) == Operation{0, 7});
}

TEST_CASE("serialize emits the file format with a trailing newline") {
  CHECK(serialize_instance(parse_instance("1 1\n0 7")) == "1 1\n0 7\n");
}

TEST_CASE("comments and blank lines are skipped") {
  const Instance inst = parse_instance("# header\n\n2 2\n# job 0\n0 1 1 2\n\n1 3 0 4\n");
  CHECK(inst.num_jobs() == 2);
  CHECK(inst.op(1, 0) == Operation{1, 3});
  CHECK(inst.op(1, 1) == Operation{0, 4});
}

TEST_CASE("parse errors carry codes") {
  CHECK(parse_error("1 2\n0 3 0 4") == ErrorCode::kDuplicateMachineInJob);
  CHECK(parse_error("") == ErrorCode::kMalformedHeader);
  CHECK(parse_error("x 2\n0 1 1 1") == ErrorCode::kMalformedHeader);
  CHECK(parse_error("1 2\n0 3") == ErrorCode::kWrongOperationCount);
  CHECK(parse_error("2 2\n0 3 1 4") == ErrorCode::kWrongOperationCount);
  CHECK(parse_error("1 2\n0 3 2 4") == ErrorCode::kMachineIndexOutOfRange);
  CHECK(parse_error("1 2\n0 3 1 0") == ErrorCode::kNonPositiveProcTime);
}

TEST_CASE("parse error messages name the line") {
  try {
    parse_instance("2 2\n0 1 1 1\n0 3 0 4\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("LA01 has the 10x5 shape and its job totals match a re-read of the file") {
  const Instance la01 = load_instance_file(testing::data_path("lawrence/la01.txt"));
  CHECK(la01.num_jobs() == 10);
  CHECK(la01.num_machines() == 5);
  CHECK(la01.name() == "la01");
  // job 0 of la01: 1 21 0 53 4 95 3 55 2 34
  CHECK(total_processing_time(la01, 0) == 21 + 53 + 95 + 55 + 34);
}

TEST_CASE("total processing time") {
  const Instance inst = testing::make_instance({{{0, 3}, {1, 4}, {2, 5}}});
  CHECK(total_processing_time(inst, 0) == 12);
  CHECK(total_processing_time(parse_instance("1 1\n0 7"), 0) == 7);
}

TEST_CASE("generated instances are valid, deterministic and round-trip") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const int m = uniform_int(rng, 1, 9);
    const int n = uniform_int(rng, 1, 9);
    const Instance inst = generate_instance(m, n, rng);
    CHECK(inst.num_machines() == m);
    CHECK(inst.num_jobs() == n);
    // The constructor validates, so re-parsing doubles as an invariant check.
    CHECK(parse_instance(serialize_instance(inst)) == inst);
  }
  Rng a(42), b(42);
  CHECK(generate_instance(5, 7, a) == generate_instance(5, 7, b));
  Rng c(3);
  const Instance one = generate_instance(1, 1, c);
  CHECK(one.op(0, 0).machine == 0);
  CHECK(one.op(0, 0).proc_time >= 1);
  CHECK(one.op(0, 0).proc_time <= 99);
}

TEST_CASE("processing times average 50") {
  Rng rng(7);
  double sum = 0.0;
  int count = 0;
  int lo = 100, hi = 0;
  while (count < 10000) {
    const Instance inst = generate_instance(10, 10, rng);
    for (const auto& job : inst.jobs()) {
      for (const auto& op : job) {
        sum += op.proc_time;
        lo = std::min(lo, op.proc_time);
        hi = std::max(hi, op.proc_time);
        ++count;
      }
    }
  }
  CHECK(std::abs(sum / count - 50.0) < 2.0);
  CHECK(lo == 1);
  CHECK(hi == 99);
}

TEST_CASE("training sizes follow the two-stage uniform law") {
  Rng rng(11);
  std::map<std::pair<int, int>, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto [m, n] = sample_training_size(rng);
    REQUIRE(m >= 5);
    REQUIRE(m <= 9);
    REQUIRE(n >= m);
    REQUIRE(n <= 9);
    ++counts[{m, n}];
  }
  CHECK(counts.size() == 15);
  for (int m = 5; m <= 9; ++m) {
    for (int n = m; n <= 9; ++n) {
      const double p = 0.2 / (10 - m);
      const double expected = draws * p;
      const double sigma = std::sqrt(draws * p * (1 - p));
      CHECK(std::abs(counts[{m, n}] - expected) < 3 * sigma + 1);
    }
  }
}

TEST_CASE("all benchmark files load") {
  CHECK(testing::load_dir("mp18").size() == 18);
  const auto la = testing::load_dir("lawrence");
  CHECK(la.size() == 40);
  for (const auto& inst : testing::load_dir("mp18")) {
    CHECK(inst->num_jobs() == 10);
    CHECK(inst->num_machines() == 10);
  }
}
