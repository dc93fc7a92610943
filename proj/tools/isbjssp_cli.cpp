#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isbjssp/isbjssp.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kSuccess = 0, kUsage = 1, kValidation = 2, kIo = 3 };

// Thrown with the exit code it maps to.
struct Failure {
  int exit_code;
  std::string message;
};

int exit_for(isb_status s) {
  switch (s) {
    case ISB_IO_ERROR:
    case ISB_MALFORMED_HEADER:
    case ISB_WRONG_OPERATION_COUNT:
    case ISB_MACHINE_INDEX_OUT_OF_RANGE:
    case ISB_DUPLICATE_MACHINE_IN_JOB:
    case ISB_NON_POSITIVE_PROC_TIME:
    case ISB_SHAPE_MISMATCH:
      return kIo;
    default:
      return kUsage;
  }
}

void check(isb_status s) {
  if (s != ISB_OK) throw Failure{exit_for(s), std::string(isb_status_name(s)) + ": " + isb_last_error()};
}

struct CString {
  char* p = nullptr;
  ~CString() { isb_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct InstanceDeleter {
  void operator()(isb_instance* p) const { isb_instance_free(p); }
};
struct ParamsDeleter {
  void operator()(isb_params* p) const { isb_params_free(p); }
};
struct EpisodeDeleter {
  void operator()(isb_episode* p) const { isb_episode_free(p); }
};
struct RecordsDeleter {
  void operator()(isb_records* p) const { isb_records_free(p); }
};
using InstancePtr = std::unique_ptr<isb_instance, InstanceDeleter>;
using ParamsPtr = std::unique_ptr<isb_params, ParamsDeleter>;
using EpisodePtr = std::unique_ptr<isb_episode, EpisodeDeleter>;
using RecordsPtr = std::unique_ptr<isb_records, RecordsDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kIo, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kIo, "cannot write " + path};
  out << text;
  if (!out.flush()) throw Failure{kIo, "write failed: " + path};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

InstancePtr load_instance(const std::string& path) {
  isb_instance* raw = nullptr;
  check(isb_instance_load(path.c_str(), &raw));
  return InstancePtr(raw);
}

// A directory yields every regular file in name order.
std::vector<InstancePtr> load_instances(const std::string& path) {
  std::vector<InstancePtr> out;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().filename().string()[0] != '.') files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back(load_instance(f.string()));
  } else if (fs::exists(path, ec)) {
    out.push_back(load_instance(path));
  } else {
    throw Failure{kIo, "no such file or directory: " + path};
  }
  return out;
}

ParamsPtr load_checkpoint(const std::string& path) {
  if (path.empty()) return nullptr;
  isb_params* raw = nullptr;
  check(isb_params_load(path.c_str(), &raw));
  return ParamsPtr(raw);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{kIo, "cannot create " + dir + ": " + ec.message()};
}

std::string file_safe(std::string s) {
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

int cmd_generate(int count, int machines, int jobs, std::uint64_t seed, const std::string& out) {
  ensure_dir(out);
  for (int k = 0; k < count; ++k) {
    char name[96];
    std::snprintf(name, sizeof(name), "gen_m%d_n%d_s%llu_%04d", machines, jobs,
                  static_cast<unsigned long long>(seed), k);
    isb_instance* raw = nullptr;
    check(isb_instance_generate(machines, jobs, isb_mix_seed(seed, static_cast<std::uint64_t>(k)), name, &raw));
    InstancePtr inst(raw);
    check(isb_instance_save(inst.get(), (fs::path(out) / (std::string(name) + ".txt")).string().c_str()));
  }
  return kSuccess;
}

struct EvaluateArgs {
  std::string instances, schedulers = "SPT", p_list = "0", checkpoint, out, events;
  int t_interrupt = 50, seeds = 1, threads = 0;
  std::uint64_t seed = 0;
  bool deterministic = false;
};

int cmd_evaluate(const EvaluateArgs& a) {
  auto instances = load_instances(a.instances);
  auto params = load_checkpoint(a.checkpoint);
  std::vector<const isb_instance*> handles;
  for (const auto& i : instances) handles.push_back(i.get());
  isb_sweep sweep{};
  sweep.instances = handles.data();
  sweep.instance_count = handles.size();
  sweep.schedulers = a.schedulers.c_str();
  sweep.p_list = a.p_list.c_str();
  sweep.seeds = a.seeds;
  sweep.t_interrupt = a.t_interrupt;
  sweep.master_seed = a.seed;
  sweep.params = params.get();
  sweep.wall_clock = a.deterministic ? 0 : 1;
  sweep.threads = a.threads;
  isb_records* raw = nullptr;
  check(isb_evaluate(&sweep, &raw));
  RecordsPtr records(raw);
  CString csv;
  check(isb_records_csv(records.get(), &csv.p));
  emit(a.out, csv.str());

  if (!a.events.empty()) {
    ensure_dir(a.events);
    for (std::size_t i = 0; i < isb_records_count(records.get()); ++i) {
      const std::string inst_name = isb_record_instance(records.get(), i);
      const isb_instance* inst = nullptr;
      for (const auto& h : instances) {
        if (inst_name == isb_instance_name(h.get())) inst = h.get();
      }
      isb_episode* ep_raw = nullptr;
      check(isb_episode_run(inst, isb_record_scheduler(records.get(), i), params.get(),
                            isb_record_p_interrupt(records.get(), i), isb_record_t_interrupt(records.get(), i),
                            isb_record_seed(records.get(), i), &ep_raw));
      EpisodePtr ep(ep_raw);
      CString log;
      check(isb_episode_events_csv(ep.get(), &log.p));
      const std::string file = file_safe(inst_name) + "_" + file_safe(isb_record_scheduler(records.get(), i)) +
                               "_" + std::to_string(isb_record_seed(records.get(), i)) + ".csv";
      write_file((fs::path(a.events) / file).string(), log.str());
    }
  }

  const std::size_t bad = isb_records_unvalidated(records.get());
  if (bad > 0) {
    std::cerr << bad << " episode(s) failed validation\n";
    return kValidation;
  }
  return kSuccess;
}

void progress(int iteration, double, int, double validation_mean, long long wall_ms, void*) {
  if (validation_mean >= 0.0) {
    std::cerr << "iteration " << iteration << " validation " << validation_mean << " (" << wall_ms
              << " ms)\n";
  }
}

int cmd_train(const std::string& config_path, const std::string& out) {
  const std::string text = read_file(config_path);
  check(isb_config_check(text.c_str(), nullptr));
  ensure_dir(out);
  const std::string ckpt = (fs::path(out) / "checkpoint.txt").string();
  const std::string log = (fs::path(out) / "train_log.csv").string();
  check(isb_train(text.c_str(), ckpt.c_str(), log.c_str(), progress, nullptr, nullptr));
  std::cerr << "wrote " << ckpt << " and " << log << '\n';
  return kSuccess;
}

int cmd_validate(const std::string& instance_path, const std::string& events_path) {
  auto inst = load_instance(instance_path);
  const std::string events = read_file(events_path);
  std::size_t violations = 0;
  CString report;
  check(isb_validate_events(inst.get(), events.c_str(), &violations, &report.p));
  if (violations > 0) {
    std::cout << report.str() << violations << " violation(s)\n";
    return kValidation;
  }
  std::cout << "ok\n";
  return kSuccess;
}

RecordsPtr load_records(const std::string& path) {
  const std::string text = read_file(path);
  isb_records* raw = nullptr;
  check(isb_records_parse(text.c_str(), &raw));
  return RecordsPtr(raw);
}

int cmd_report(const std::string& input, const std::string& out) {
  auto records = load_records(input);
  CString text;
  check(isb_report(records.get(), &text.p));
  emit(out, text.str());
  return kSuccess;
}

int cmd_plot(const std::string& input, const std::string& out, int t_interrupt) {
  const std::string text = read_file(input);
  const std::string header = text.substr(0, text.find('\n'));
  CString svg;
  if (header.rfind("time,event", 0) == 0) {
    check(isb_plot_gantt(text.c_str(), t_interrupt, &svg.p));
  } else {
    isb_records* raw = nullptr;
    check(isb_records_parse(text.c_str(), &raw));
    RecordsPtr records(raw);
    check(isb_plot_curves(records.get(), &svg.p));
  }
  emit(out, svg.str());
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blocking job shop scheduling with swaps and machine interruptions"};
  app.require_subcommand(1);

  int count = 1, machines = 10, jobs = 10;
  std::uint64_t gen_seed = 0;
  std::string gen_out = ".";
  auto* gen = app.add_subcommand("generate", "Write random instances");
  gen->add_option("--count", count, "Number of instances")->check(CLI::NonNegativeNumber);
  gen->add_option("--machines,-m", machines, "Machines (= operations per job)")->check(CLI::PositiveNumber);
  gen->add_option("--jobs,-n", jobs, "Jobs")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output directory");

  EvaluateArgs ev;
  auto* eval = app.add_subcommand("evaluate", "Run a scheduler sweep and write the results CSV");
  eval->add_option("--instances", ev.instances, "Instance file or directory")->required();
  eval->add_option("--scheduler", ev.schedulers, "Comma list of rules, GNN-RL, or all");
  eval->add_option("--p-interrupt", ev.p_list, "Comma list of probabilities (0.05 or 5%)");
  eval->add_option("--t-interrupt", ev.t_interrupt, "Downtime per interruption")->check(CLI::PositiveNumber);
  eval->add_option("--seeds", ev.seeds, "Episodes per cell")->check(CLI::NonNegativeNumber);
  eval->add_option("--seed", ev.seed, "Master seed");
  eval->add_option("--checkpoint", ev.checkpoint, "Policy checkpoint for GNN-RL");
  eval->add_option("--out", ev.out, "Results CSV (stdout when absent)");
  eval->add_option("--events", ev.events, "Directory for per-episode event logs");
  eval->add_option("--threads", ev.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  eval->add_flag("--deterministic", ev.deterministic, "Write wall_ms as 0");

  std::string config, train_out = ".";
  auto* tr = app.add_subcommand("train", "Train the policy");
  tr->add_option("--config", config, "key = value configuration file")->required();
  tr->add_option("--out", train_out, "Directory for checkpoint.txt and train_log.csv");

  std::string val_instance, val_events;
  auto* val = app.add_subcommand("validate", "Check an event log against an instance");
  val->add_option("--instances", val_instance, "Instance file")->required();
  val->add_option("events", val_events, "Event log CSV")->required();

  std::string rep_in, rep_out;
  auto* rep = app.add_subcommand("report", "Aggregate a results CSV");
  rep->add_option("results", rep_in, "Results CSV")->required();
  rep->add_option("--out", rep_out, "Output (stdout when absent)");

  std::string plot_in, plot_out;
  int plot_t = 50;
  auto* plot = app.add_subcommand("plot", "SVG Gantt chart from an event log, or curves from results");
  plot->add_option("input", plot_in, "Event log or results CSV")->required();
  plot->add_option("--out", plot_out, "SVG output (stdout when absent)");
  plot->add_option("--t-interrupt", plot_t, "Downtime for failures without a recover event");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*gen) return cmd_generate(count, machines, jobs, gen_seed, gen_out);
    if (*eval) return cmd_evaluate(ev);
    if (*tr) return cmd_train(config, train_out);
    if (*val) return cmd_validate(val_instance, val_events);
    if (*rep) return cmd_report(rep_in, rep_out);
    if (*plot) return cmd_plot(plot_in, plot_out, plot_t);
  } catch (const Failure& f) {
    std::cerr << "isbjssp: " << f.message << '\n';
    return f.exit_code;
  }
  return kUsage;
}
