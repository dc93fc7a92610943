#include "isbjssp/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace isbjssp {

namespace {

std::string where(int line, int job) {
  std::string s = "line " + std::to_string(line);
  if (job >= 0) s += ", job " + std::to_string(job);
  return s;
}

void check_job(const std::vector<Operation>& ops, int m, int line, int job) {
  if (static_cast<int>(ops.size()) != m) {
    throw Error(ErrorCode::kWrongOperationCount,
                where(line, job) + ": expected " + std::to_string(m) +
                    " operations, got " + std::to_string(ops.size()));
  }
  std::vector<bool> seen(m, false);
  for (const auto& op : ops) {
    if (op.machine < 0 || op.machine >= m) {
      throw Error(ErrorCode::kMachineIndexOutOfRange,
                  where(line, job) + ": machine " + std::to_string(op.machine) +
                      " outside [0, " + std::to_string(m) + ")");
    }
    if (seen[op.machine]) {
      throw Error(ErrorCode::kDuplicateMachineInJob,
                  where(line, job) + ": machine " + std::to_string(op.machine) +
                      " visited twice");
    }
    seen[op.machine] = true;
    if (op.proc_time < 1) {
      throw Error(ErrorCode::kNonPositiveProcTime,
                  where(line, job) + ": processing time " +
                      std::to_string(op.proc_time) + " < 1");
    }
  }
}

bool parse_ints(std::string_view line, std::vector<long long>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), v);
    if (ec != std::errc{}) return false;
    const std::size_t next = static_cast<std::size_t>(ptr - line.data());
    if (next < line.size() && !std::isspace(static_cast<unsigned char>(line[next]))) {
      return false;
    }
    out.push_back(v);
    i = next;
  }
  return true;
}

}  // namespace

Instance::Instance(std::vector<std::vector<Operation>> jobs, std::string name)
    : jobs_(std::move(jobs)), name_(std::move(name)) {
  if (jobs_.empty()) throw Error(ErrorCode::kMalformedHeader, "instance has no jobs");
  num_machines_ = static_cast<int>(jobs_.front().size());
  if (num_machines_ < 1) throw Error(ErrorCode::kMalformedHeader, "instance has no machines");
  for (int j = 0; j < num_jobs(); ++j) {
    check_job(jobs_[j], num_machines_, 0, j);
    for (const auto& op : jobs_[j]) max_proc_time_ = std::max(max_proc_time_, op.proc_time);
  }
}

Instance parse_instance(std::string_view text, std::string name) {
  int n = -1;
  int m = -1;
  std::vector<std::vector<Operation>> jobs;
  std::vector<long long> ints;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r\f\v");
    if (first == std::string_view::npos || line[first] == '#') continue;

    if (!parse_ints(line, ints)) {
      throw Error(n < 0 ? ErrorCode::kMalformedHeader : ErrorCode::kWrongOperationCount,
                  where(line_no, n < 0 ? -1 : static_cast<int>(jobs.size())) +
                      ": non-integer token");
    }
    if (n < 0) {
      if (ints.size() != 2 || ints[0] < 1 || ints[1] < 1) {
        throw Error(ErrorCode::kMalformedHeader,
                    where(line_no, -1) + ": header must be '<jobs> <machines>'");
      }
      n = static_cast<int>(ints[0]);
      m = static_cast<int>(ints[1]);
      continue;
    }
    const int job = static_cast<int>(jobs.size());
    if (job >= n) {
      throw Error(ErrorCode::kWrongOperationCount,
                  where(line_no, job) + ": more job lines than the header declares");
    }
    if (ints.size() % 2 != 0 || static_cast<int>(ints.size() / 2) != m) {
      throw Error(ErrorCode::kWrongOperationCount,
                  where(line_no, job) + ": expected " + std::to_string(m) +
                      " machine/time pairs");
    }
    std::vector<Operation> ops;
    ops.reserve(m);
    for (std::size_t k = 0; k < ints.size(); k += 2) {
      ops.push_back({static_cast<int>(ints[k]), static_cast<int>(ints[k + 1])});
    }
    check_job(ops, m, line_no, job);
    jobs.push_back(std::move(ops));
  }
  if (n < 0) throw Error(ErrorCode::kMalformedHeader, "empty instance text");
  if (static_cast<int>(jobs.size()) != n) {
    throw Error(ErrorCode::kWrongOperationCount,
                "expected " + std::to_string(n) + " job lines, got " +
                    std::to_string(jobs.size()));
  }
  return Instance(std::move(jobs), std::move(name));
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << inst.num_jobs() << ' ' << inst.num_machines() << '\n';
  for (const auto& job : inst.jobs()) {
    for (std::size_t k = 0; k < job.size(); ++k) {
      if (k) out << ' ';
      out << job[k].machine << ' ' << job[k].proc_time;
    }
    out << '\n';
  }
  return out.str();
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of("/\\"); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_instance(buf.str(), name);
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << serialize_instance(inst);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

Instance generate_instance(int num_machines, int num_jobs, Rng& rng) {
  if (num_machines < 1 || num_jobs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "generate_instance: sizes must be >= 1");
  }
  std::vector<std::vector<Operation>> jobs(num_jobs);
  std::vector<int> order(num_machines);
  for (auto& job : jobs) {
    std::iota(order.begin(), order.end(), 0);
    // Fisher-Yates with the fixed-algorithm integer draw.
    for (int i = num_machines - 1; i > 0; --i) std::swap(order[i], order[uniform_int(rng, 0, i)]);
    job.reserve(num_machines);
    for (int k = 0; k < num_machines; ++k) job.push_back({order[k], uniform_int(rng, 1, 99)});
  }
  return Instance(std::move(jobs));
}

std::pair<int, int> sample_training_size(Rng& rng) {
  const int m = uniform_int(rng, 5, 9);
  const int n = uniform_int(rng, m, 9);
  return {m, n};
}

int total_processing_time(const Instance& inst, int job) {
  int total = 0;
  for (const auto& op : inst.job(job)) total += op.proc_time;
  return total;
}

}  // namespace isbjssp
