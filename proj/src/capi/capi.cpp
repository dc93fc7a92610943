#include "isbjssp/isbjssp.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "isbjssp/experiment.hpp"
#include "isbjssp/instance.hpp"
#include "isbjssp/nn.hpp"
#include "isbjssp/ppo.hpp"
#include "isbjssp/sim.hpp"

struct isb_instance {
  std::shared_ptr<const isbjssp::Instance> inst;
};

struct isb_params {
  std::shared_ptr<const isbjssp::nn::ParamStore> params;
};

struct isb_episode {
  isbjssp::RunOutcome outcome;
};

struct isb_records {
  std::vector<isbjssp::RunRecord> rows;
};

namespace {

thread_local std::string last_error;

isb_status fail(isb_status status, const std::string& msg) {
  last_error = msg;
  return status;
}

template <typename F>
isb_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return ISB_OK;
  } catch (const isbjssp::Error& e) {
    return fail(static_cast<isb_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ISB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ISB_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw isbjssp::Error(isbjssp::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

const char* violation_kind_name(isbjssp::ViolationKind k) {
  using isbjssp::ViolationKind;
  switch (k) {
    case ViolationKind::kMissingEvent: return "missing-event";
    case ViolationKind::kDuration: return "duration";
    case ViolationKind::kWrongMachine: return "wrong-machine";
    case ViolationKind::kPrecedence: return "precedence";
    case ViolationKind::kExclusivity: return "exclusivity";
    case ViolationKind::kBlocking: return "blocking";
    case ViolationKind::kFailureWindow: return "failure-window";
  }
  return "unknown";
}

}  // namespace

extern "C" {

const char* isb_last_error(void) { return last_error.c_str(); }

const char* isb_status_name(isb_status status) {
  if (status == ISB_INTERNAL) return "Internal";
  if (status < ISB_OK || status > ISB_INVALID_ARGUMENT) return "Unknown";
  return isbjssp::error_code_name(static_cast<isbjssp::ErrorCode>(status));
}

uint64_t isb_mix_seed(uint64_t a, uint64_t b) { return isbjssp::mix_seed(a, b); }

void isb_string_free(char* s) { std::free(s); }

isb_status isb_instance_load(const char* path, isb_instance** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto inst = std::make_shared<const isbjssp::Instance>(isbjssp::load_instance_file(path));
    *out = new isb_instance{std::move(inst)};
  });
}

isb_status isb_instance_parse(const char* text, const char* name, isb_instance** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    auto inst = std::make_shared<const isbjssp::Instance>(
        isbjssp::parse_instance(text, name ? name : ""));
    *out = new isb_instance{std::move(inst)};
  });
}

isb_status isb_instance_generate(int machines, int jobs, uint64_t seed, const char* name,
                                 isb_instance** out) {
  return guard([&] {
    need(out, "out");
    isbjssp::Rng rng(seed);
    auto inst = isbjssp::generate_instance(machines, jobs, rng);
    if (name) inst.set_name(name);
    *out = new isb_instance{std::make_shared<const isbjssp::Instance>(std::move(inst))};
  });
}

isb_status isb_instance_save(const isb_instance* inst, const char* path) {
  return guard([&] {
    need(inst, "instance");
    need(path, "path");
    isbjssp::save_instance_file(*inst->inst, path);
  });
}

isb_status isb_instance_serialize(const isb_instance* inst, char** out) {
  return guard([&] {
    need(inst, "instance");
    need(out, "out");
    *out = dup(isbjssp::serialize_instance(*inst->inst));
  });
}

const char* isb_instance_name(const isb_instance* inst) {
  return inst ? inst->inst->name().c_str() : "";
}
int isb_instance_jobs(const isb_instance* inst) { return inst ? inst->inst->num_jobs() : 0; }
int isb_instance_machines(const isb_instance* inst) { return inst ? inst->inst->num_machines() : 0; }
void isb_instance_free(isb_instance* inst) { delete inst; }

isb_status isb_params_init(uint64_t seed, isb_params** out) {
  return guard([&] {
    need(out, "out");
    isbjssp::Rng rng(seed);
    *out = new isb_params{std::make_shared<const isbjssp::nn::ParamStore>(isbjssp::nn::init_params(rng))};
  });
}

isb_status isb_params_load(const char* path, isb_params** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new isb_params{std::make_shared<const isbjssp::nn::ParamStore>(isbjssp::nn::load_params(path))};
  });
}

isb_status isb_params_save(const isb_params* params, const char* path) {
  return guard([&] {
    need(params, "params");
    need(path, "path");
    isbjssp::nn::save_params(*params->params, path);
  });
}

void isb_params_free(isb_params* params) { delete params; }

isb_status isb_episode_run(const isb_instance* inst, const char* scheduler, const isb_params* params,
                           double p_interrupt, int t_interrupt, uint64_t seed, isb_episode** out) {
  return guard([&] {
    need(inst, "instance");
    need(scheduler, "scheduler");
    need(out, "out");
    const auto sched = isbjssp::make_scheduler(scheduler, params ? params->params : nullptr);
    auto ep = std::make_unique<isb_episode>();
    ep->outcome = isbjssp::run_validated(inst->inst, *sched, p_interrupt, t_interrupt, seed);
    *out = ep.release();
  });
}

int isb_episode_makespan(const isb_episode* ep) { return ep ? ep->outcome.episode.makespan : -1; }

size_t isb_episode_violation_count(const isb_episode* ep) {
  return ep ? ep->outcome.violations.size() : 0;
}

isb_status isb_episode_events_csv(const isb_episode* ep, char** out) {
  return guard([&] {
    need(ep, "episode");
    need(out, "out");
    *out = dup(isbjssp::event_log_csv(ep->outcome.episode.events));
  });
}

void isb_episode_free(isb_episode* ep) { delete ep; }

isb_status isb_validate_events(const isb_instance* inst, const char* events_csv, size_t* violations,
                               char** report) {
  return guard([&] {
    need(inst, "instance");
    need(events_csv, "events");
    const auto events = isbjssp::parse_event_log_csv(events_csv);
    const auto found = isbjssp::validate_schedule(*inst->inst, events);
    if (violations) *violations = found.size();
    if (report) {
      std::ostringstream text;
      for (const auto& v : found) text << violation_kind_name(v.kind) << ": " << v.detail << '\n';
      *report = dup(text.str());
    }
  });
}

isb_status isb_evaluate(const isb_sweep* sweep, isb_records** out) {
  return guard([&] {
    need(sweep, "sweep");
    need(out, "out");
    isbjssp::SweepSpec spec;
    for (size_t i = 0; i < sweep->instance_count; ++i) {
      need(sweep->instances[i], "instance");
      spec.instances.push_back(sweep->instances[i]->inst);
    }
    spec.schedulers = isbjssp::parse_scheduler_list(sweep->schedulers ? sweep->schedulers : "");
    spec.p_interrupts = isbjssp::parse_probability_list(sweep->p_list ? sweep->p_list : "0");
    spec.seeds = sweep->seeds;
    spec.t_interrupt = sweep->t_interrupt;
    spec.master_seed = sweep->master_seed;
    if (sweep->params) spec.params = sweep->params->params;
    spec.wall_clock = sweep->wall_clock != 0;
    spec.threads = sweep->threads;
    *out = new isb_records{isbjssp::evaluate_sweep(spec)};
  });
}

isb_status isb_records_parse(const char* csv, isb_records** out) {
  return guard([&] {
    need(csv, "csv");
    need(out, "out");
    *out = new isb_records{isbjssp::parse_results_csv(csv)};
  });
}

isb_status isb_records_csv(const isb_records* records, char** out) {
  return guard([&] {
    need(records, "records");
    need(out, "out");
    *out = dup(isbjssp::results_csv(records->rows));
  });
}

size_t isb_records_count(const isb_records* records) { return records ? records->rows.size() : 0; }

size_t isb_records_unvalidated(const isb_records* records) {
  size_t n = 0;
  if (records) {
    for (const auto& r : records->rows) n += r.validated ? 0 : 1;
  }
  return n;
}

const char* isb_record_instance(const isb_records* records, size_t i) {
  return records && i < records->rows.size() ? records->rows[i].instance.c_str() : "";
}
const char* isb_record_scheduler(const isb_records* records, size_t i) {
  return records && i < records->rows.size() ? records->rows[i].scheduler.c_str() : "";
}
double isb_record_p_interrupt(const isb_records* records, size_t i) {
  return records && i < records->rows.size() ? records->rows[i].p_interrupt : 0.0;
}
int isb_record_t_interrupt(const isb_records* records, size_t i) {
  return records && i < records->rows.size() ? records->rows[i].t_interrupt : 0;
}
uint64_t isb_record_seed(const isb_records* records, size_t i) {
  return records && i < records->rows.size() ? records->rows[i].seed : 0;
}

void isb_records_free(isb_records* records) { delete records; }

isb_status isb_report(const isb_records* records, char** out) {
  return guard([&] {
    need(records, "records");
    need(out, "out");
    *out = dup(isbjssp::report_text(isbjssp::make_report(records->rows)));
  });
}

isb_status isb_plot_gantt(const char* events_csv, int t_interrupt, char** svg) {
  return guard([&] {
    need(events_csv, "events");
    need(svg, "out");
    *svg = dup(isbjssp::gantt_svg(isbjssp::parse_event_log_csv(events_csv), t_interrupt));
  });
}

isb_status isb_plot_curves(const isb_records* records, char** svg) {
  return guard([&] {
    need(records, "records");
    need(svg, "out");
    *svg = dup(isbjssp::curves_svg(isbjssp::make_report(records->rows)));
  });
}

isb_status isb_config_check(const char* config_text, char** normalized) {
  return guard([&] {
    need(config_text, "config");
    const auto cfg = isbjssp::parse_ppo_config(config_text);
    if (normalized) *normalized = dup(isbjssp::format_ppo_config(cfg));
  });
}

isb_status isb_train(const char* config_text, const char* checkpoint_path, const char* log_path,
                     isb_train_callback callback, void* user, isb_params** best) {
  return guard([&] {
    need(config_text, "config");
    const auto cfg = isbjssp::parse_ppo_config(config_text);
    const std::string ckpt = checkpoint_path ? checkpoint_path : "";
    auto observer = [&](const isbjssp::TrainLogRow& row, const isbjssp::nn::ParamStore* improved) {
      if (improved && !ckpt.empty()) isbjssp::nn::save_params(*improved, ckpt);
      if (callback) {
        callback(row.iteration, row.episode_return, row.makespan, row.validation_mean, row.wall_ms, user);
      }
    };
    auto result = isbjssp::train(cfg, observer);
    if (log_path) isbjssp::write_text_file(log_path, isbjssp::training_log_csv(cfg, result.log));
    if (best) *best = new isb_params{std::make_shared<const isbjssp::nn::ParamStore>(std::move(result.best))};
  });
}

}  // extern "C"
