#include "isbjssp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "isbjssp/gnn_policy.hpp"
#include "isbjssp/pdr.hpp"

namespace isbjssp {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad ") + what + ": '" + text + "'");
  }
  return v;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string results_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& r : records) {
    out << r.instance << ',' << r.scheduler << ',' << format_double(r.p_interrupt) << ','
        << r.t_interrupt << ',' << r.seed << ',' << r.makespan << ',' << r.wall_ms << ','
        << (r.validated ? "true" : "false") << '\n';
  }
  return out.str();
}

std::vector<RunRecord> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kResultsHeader) {
    throw Error(ErrorCode::kMalformedHeader, "results CSV header mismatch");
  }
  std::vector<RunRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw Error(ErrorCode::kInvalidArgument,
                  "results CSV line " + std::to_string(lineno) + ": expected 8 fields");
    }
    RunRecord r;
    r.instance = f[0];
    r.scheduler = f[1];
    r.p_interrupt = parse_number<double>(f[2], "p_interrupt");
    r.t_interrupt = parse_number<int>(f[3], "t_interrupt");
    r.seed = parse_number<std::uint64_t>(f[4], "seed");
    r.makespan = parse_number<int>(f[5], "makespan");
    r.wall_ms = parse_number<long long>(f[6], "wall_ms");
    if (f[7] == "true") {
      r.validated = true;
    } else if (f[7] == "false") {
      r.validated = false;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "bad validated flag: '" + f[7] + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& name,
                                          std::shared_ptr<const nn::ParamStore> params) {
  const std::string key = upper(name);
  if (key == "GNN-RL" || key == "GNN") {
    if (!params) throw Error(ErrorCode::kMissingCheckpoint, "GNN-RL needs a checkpoint");
    return std::make_unique<PolicyScheduler>(std::move(params), ActMode::kGreedy);
  }
  if (auto rule = parse_rule(name)) return std::make_unique<RuleScheduler>(*rule);
  throw Error(ErrorCode::kInvalidArgument, "unknown scheduler '" + name + "'");
}

std::vector<std::string> parse_scheduler_list(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  for (const auto& raw : split(text, ',')) {
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (upper(s) == "ALL") {
      for (Rule r : kAllRules) out.emplace_back(rule_name(r));
    } else {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<double> parse_probability_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& raw : split(text, ',')) {
    std::string s = trim(raw);
    if (s.empty()) continue;
    double scale = 1.0;
    if (s.back() == '%') {
      s.pop_back();
      scale = 0.01;
    }
    const double p = parse_number<double>(s, "probability") * scale;
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "probability outside [0,1]: " + raw);
    out.push_back(p);
  }
  return out;
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& instance,
                        const std::string& scheduler, double p_interrupt, int replicate) {
  std::uint64_t s = mix_seed(master, hash_string(instance));
  s = mix_seed(s, hash_string(upper(scheduler)));
  s = mix_seed(s, hash_string(format_double(p_interrupt)));
  return mix_seed(s, static_cast<std::uint64_t>(replicate));
}

RunOutcome run_validated(std::shared_ptr<const Instance> inst, const Scheduler& scheduler,
                         double p_interrupt, int t_interrupt, std::uint64_t seed) {
  EpisodeConfig cfg;
  cfg.p_interrupt = p_interrupt;
  cfg.t_interrupt = t_interrupt;
  cfg.seed = seed;
  RunOutcome out;
  out.episode = run_episode(inst, scheduler, cfg);
  out.violations = validate_schedule(*inst, out.episode.events);
  return out;
}

std::vector<RunRecord> evaluate_sweep(const SweepSpec& spec) {
  if (spec.seeds < 0) throw Error(ErrorCode::kInvalidArgument, "negative seed count");
  std::vector<std::unique_ptr<Scheduler>> schedulers;
  for (const auto& name : spec.schedulers) schedulers.push_back(make_scheduler(name, spec.params));

  struct Cell {
    std::size_t inst, sched;
    double p;
    int rep;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < spec.instances.size(); ++i)
    for (std::size_t s = 0; s < schedulers.size(); ++s)
      for (double p : spec.p_interrupts)
        for (int r = 0; r < spec.seeds; ++r) cells.push_back({i, s, p, r});

  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < cells.size();) {
      try {
        const Cell& c = cells[k];
        const auto& inst = spec.instances[c.inst];
        const Scheduler& sched = *schedulers[c.sched];
        RunRecord& rec = records[k];
        rec.instance = inst->name();
        rec.scheduler = sched.name();
        rec.p_interrupt = c.p;
        rec.t_interrupt = spec.t_interrupt;
        rec.seed = cell_seed(spec.master_seed, rec.instance, rec.scheduler, c.p, c.rep);
        const auto t0 = std::chrono::steady_clock::now();
        const RunOutcome out = run_validated(inst, sched, c.p, spec.t_interrupt, rec.seed);
        const auto t1 = std::chrono::steady_clock::now();
        rec.makespan = out.episode.makespan;
        rec.validated = out.violations.empty();
        rec.wall_ms = spec.wall_clock
                          ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
                          : 0;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };
  unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

Report make_report(const std::vector<RunRecord>& records) {
  struct Acc {
    std::vector<double> values;
  };
  // scheduler order of first appearance, p ascending, instance order of first appearance
  std::vector<std::string> sched_order, inst_order;
  std::map<std::tuple<std::string, double, std::string>, Acc> groups;
  Report report;
  for (const auto& r : records) {
    if (!r.validated) {
      ++report.skipped;
      continue;
    }
    if (std::find(sched_order.begin(), sched_order.end(), r.scheduler) == sched_order.end())
      sched_order.push_back(r.scheduler);
    if (std::find(inst_order.begin(), inst_order.end(), r.instance) == inst_order.end())
      inst_order.push_back(r.instance);
    groups[{r.scheduler, r.p_interrupt, r.instance}].values.push_back(r.makespan);
  }
  std::vector<double> ps;
  for (const auto& [key, acc] : groups) ps.push_back(std::get<1>(key));
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  for (const auto& s : sched_order) {
    for (double p : ps) {
      double total_mean = 0.0, total_var = 0.0;
      int total_runs = 0;
      bool any = false;
      for (const auto& inst : inst_order) {
        auto it = groups.find({s, p, inst});
        if (it == groups.end()) continue;
        const auto& v = it->second.values;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size());
        report.rows.push_back({s, p, inst, static_cast<int>(v.size()), mean, std::sqrt(var)});
        total_mean += mean;
        total_var += var;
        total_runs += static_cast<int>(v.size());
        any = true;
      }
      if (any) report.rows.push_back({s, p, kTotalLabel, total_runs, total_mean, std::sqrt(total_var)});
    }
  }
  return report;
}

std::string report_text(const Report& report) {
  std::ostringstream out;
  out << "scheduler,p_interrupt,instance,runs,mean,std\n";
  for (const auto& r : report.rows) {
    out << r.scheduler << ',' << format_double(r.p_interrupt) << ',' << r.instance << ',' << r.runs
        << ',' << format_double(r.mean) << ',' << format_double(r.std) << '\n';
  }
  out << "# std is the population standard deviation (divides by n)\n"
      << "# " << kTotalLabel << " mean is the sum of per-instance means; its std is sqrt of the summed per-instance variances\n";
  if (report.skipped > 0) out << "# skipped " << report.skipped << " unvalidated rows\n";
  return out.str();
}

namespace {

constexpr double kLeft = 60.0;
constexpr double kTop = 30.0;
constexpr double kRowHeight = 22.0;
constexpr double kWidth = 960.0;

const char* job_colour(int job) {
  static const char* palette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  return palette[static_cast<std::size_t>(job) % 10];
}

}  // namespace

std::string gantt_svg(const EventLog& events, int t_interrupt) {
  int machines = 0;
  int horizon = 1;
  std::map<std::pair<int, int>, int> started;  // (job, rank) -> start time
  for (const auto& e : events) {
    machines = std::max(machines, e.machine + 1);
    horizon = std::max(horizon, e.time);
    if (e.kind == EventKind::kStart || e.kind == EventKind::kSwapStart) started[{e.job, e.rank}] = e.time;
  }
  for (const auto& e : events) {
    if (e.kind == EventKind::kFail) horizon = std::max(horizon, e.time + t_interrupt);
  }
  const double scale = (kWidth - kLeft - 20.0) / horizon;
  const double height = kTop + machines * kRowHeight + 40.0;
  auto x = [&](int t) { return format_double(kLeft + t * scale); };
  auto w = [&](int d) { return format_double(d * scale); };
  auto y = [&](int m) { return format_double(kTop + m * kRowHeight + 2.0); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int m = 0; m < machines; ++m) {
    out << "<text x=\"4\" y=\"" << format_double(kTop + m * kRowHeight + 15.0) << "\">M" << m << "</text>\n";
  }

  // Failure windows first so bars stay visible above them.
  std::map<int, int> open_fail;
  auto shade = [&](int m, int from, int to) {
    out << "<rect class=\"failure\" data-machine=\"" << m << "\" data-start=\"" << from
        << "\" data-end=\"" << to << "\" x=\"" << x(from) << "\" y=\"" << y(m) << "\" width=\""
        << w(to - from) << "\" height=\"" << kRowHeight - 4.0
        << "\" fill=\"#888\" fill-opacity=\"0.35\"/>\n";
  };
  for (const auto& e : events) {
    if (e.kind == EventKind::kFail) open_fail[e.machine] = e.time;
    if (e.kind == EventKind::kRecover) {
      auto it = open_fail.find(e.machine);
      if (it != open_fail.end()) {
        shade(e.machine, it->second, e.time);
        open_fail.erase(it);
      }
    }
  }
  for (const auto& [m, t] : open_fail) shade(m, t, t + t_interrupt);

  for (const auto& e : events) {
    if (e.kind != EventKind::kComplete) continue;
    auto s = started.find({e.job, e.rank});
    if (s == started.end()) continue;
    out << "<rect class=\"op\" data-job=\"" << e.job << "\" data-rank=\"" << e.rank
        << "\" data-start=\"" << s->second << "\" data-end=\"" << e.time << "\" x=\"" << x(s->second)
        << "\" y=\"" << y(e.machine) << "\" width=\"" << w(e.time - s->second) << "\" height=\""
        << kRowHeight - 4.0 << "\" fill=\"" << job_colour(e.job) << "\" stroke=\"#222\"/>\n";
    auto next = started.find({e.job, e.rank + 1});
    if (next != started.end() && next->second > e.time) {
      out << "<rect class=\"blocked\" data-job=\"" << e.job << "\" data-start=\"" << e.time
          << "\" data-end=\"" << next->second << "\" x=\"" << x(e.time) << "\" y=\"" << y(e.machine)
          << "\" width=\"" << w(next->second - e.time) << "\" height=\"" << kRowHeight - 4.0
          << "\" fill=\"" << job_colour(e.job) << "\" fill-opacity=\"0.3\"/>\n";
    }
  }
  const double axis_y = kTop + machines * kRowHeight + 14.0;
  out << "<text x=\"" << kLeft << "\" y=\"" << format_double(axis_y) << "\">0</text>\n";
  out << "<text x=\"" << x(horizon) << "\" y=\"" << format_double(axis_y)
      << "\" text-anchor=\"end\">" << horizon << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string curves_svg(const Report& report) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> order;
  double lo = 1e300, hi = -1e300, pmax = 0.0;
  for (const auto& r : report.rows) {
    if (r.instance != kTotalLabel) continue;
    if (!series.count(r.scheduler)) order.push_back(r.scheduler);
    series[r.scheduler].emplace_back(r.p_interrupt, r.mean);
    lo = std::min(lo, r.mean);
    hi = std::max(hi, r.mean);
    pmax = std::max(pmax, r.p_interrupt);
  }
  const double width = 640.0, height = 400.0, left = 70.0, right = 130.0, top = 20.0, bottom = 40.0;
  if (order.empty()) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi <= lo) hi = lo + 1.0;
  if (pmax <= 0.0) pmax = 1.0;
  auto px = [&](double p) { return format_double(left + p / pmax * (width - left - right)); };
  auto py = [&](double v) { return format_double(height - bottom - (v - lo) / (hi - lo) * (height - top - bottom)); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
      << "\" y2=\"" << height - bottom << "\" stroke=\"#000\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << height - bottom << "\" stroke=\"#000\"/>\n";
  out << "<text x=\"" << left << "\" y=\"" << height - 8.0 << "\">p_interrupt 0 .. " << format_double(pmax) << "</text>\n";
  out << "<text x=\"4\" y=\"" << top + 4.0 << "\">" << format_double(hi) << "</text>\n";
  out << "<text x=\"4\" y=\"" << height - bottom << "\">" << format_double(lo) << "</text>\n";
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& pts = series[order[k]];
    const char* colour = job_colour(static_cast<int>(k));
    out << "<polyline class=\"curve\" data-scheduler=\"" << order[k] << "\" fill=\"none\" stroke=\""
        << colour << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) out << (i ? " " : "") << px(pts[i].first) << ',' << py(pts[i].second);
    out << "\"/>\n";
    for (const auto& [p, v] : pts) {
      out << "<circle data-scheduler=\"" << order[k] << "\" data-p=\"" << format_double(p)
          << "\" data-total=\"" << format_double(v) << "\" cx=\"" << px(p) << "\" cy=\"" << py(v)
          << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    out << "<text x=\"" << width - right + 8.0 << "\" y=\"" << top + 14.0 * (k + 1) << "\" fill=\""
        << colour << "\">" << order[k] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace isbjssp
