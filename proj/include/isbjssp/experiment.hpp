#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "isbjssp/instance.hpp"
#include "isbjssp/nn.hpp"
#include "isbjssp/sim.hpp"

namespace isbjssp {

struct RunRecord {
  std::string instance;
  std::string scheduler;
  double p_interrupt = 0.0;
  int t_interrupt = 50;
  std::uint64_t seed = 0;  // episode seed; rerunning with it reproduces the row
  int makespan = 0;
  long long wall_ms = 0;
  bool validated = false;

  bool operator==(const RunRecord&) const = default;
};

inline constexpr const char* kResultsHeader =
    "instance,scheduler,p_interrupt,t_interrupt,seed,makespan,wall_ms,validated";

std::string results_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_results_csv(const std::string& text);

// PDR names (case-insensitive) or "GNN-RL", which needs `params`.
std::unique_ptr<Scheduler> make_scheduler(const std::string& name,
                                          std::shared_ptr<const nn::ParamStore> params);

// Splits "a,b,c"; "all" expands to the eleven rules.
std::vector<std::string> parse_scheduler_list(const std::string& text);
// Accepts fractions ("0.05") and percentages ("5%").
std::vector<double> parse_probability_list(const std::string& text);

std::uint64_t cell_seed(std::uint64_t master, const std::string& instance,
                        const std::string& scheduler, double p_interrupt, int replicate);

struct SweepSpec {
  std::vector<std::shared_ptr<const Instance>> instances;
  std::vector<std::string> schedulers;
  std::vector<double> p_interrupts;
  int seeds = 1;
  int t_interrupt = 50;
  std::uint64_t master_seed = 0;
  std::shared_ptr<const nn::ParamStore> params;
  bool wall_clock = true;  // false writes wall_ms = 0
  int threads = 0;         // 0 = hardware concurrency
};

// Rows come out in (instance, scheduler, p, replicate) order whatever the
// thread count.
std::vector<RunRecord> evaluate_sweep(const SweepSpec& spec);

struct RunOutcome {
  EpisodeResult episode;
  std::vector<Violation> violations;
};

RunOutcome run_validated(std::shared_ptr<const Instance> inst, const Scheduler& scheduler,
                         double p_interrupt, int t_interrupt, std::uint64_t seed);

struct ReportRow {
  std::string scheduler;
  double p_interrupt = 0.0;
  std::string instance;  // kTotalLabel for the totals row
  int runs = 0;
  double mean = 0.0;
  double std = 0.0;
};

inline constexpr const char* kTotalLabel = "TOTAL";

struct Report {
  std::vector<ReportRow> rows;
  int skipped = 0;  // rows dropped because validated was false
};

// Population std. The totals row sums per-instance means; its std is
// sqrt of the summed per-instance variances.
Report make_report(const std::vector<RunRecord>& records);
std::string report_text(const Report& report);

// Machines by time. Processing in solid bars, blocking in pale bars, failure
// windows shaded for t_interrupt when no recover event closes them.
std::string gantt_svg(const EventLog& events, int t_interrupt);
// Total mean makespan against p, one polyline per scheduler.
std::string curves_svg(const Report& report);

}  // namespace isbjssp
