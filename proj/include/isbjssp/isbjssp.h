#ifndef ISBJSSP_ISBJSSP_H
#define ISBJSSP_ISBJSSP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ISB_API __declspec(dllexport)
#else
#define ISB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values are stable. */
typedef enum isb_status {
  ISB_OK = 0,
  ISB_MALFORMED_HEADER = 1,
  ISB_WRONG_OPERATION_COUNT = 2,
  ISB_MACHINE_INDEX_OUT_OF_RANGE = 3,
  ISB_DUPLICATE_MACHINE_IN_JOB = 4,
  ISB_NON_POSITIVE_PROC_TIME = 5,
  ISB_ALREADY_REMOVED = 6,
  ISB_NOT_REMOVED = 7,
  ISB_ABSENT_NODE = 8,
  ISB_NOT_READY = 9,
  ISB_SCHEDULABLE_ACTIONS_PENDING = 10,
  ISB_STEP_CAP_EXCEEDED = 11,
  ISB_TOO_LARGE = 12,
  ISB_EMPTY_ACTION_SET = 13,
  ISB_DIMENSION_MISMATCH = 14,
  ISB_NO_CACHE = 15,
  ISB_SHAPE_MISMATCH = 16,
  ISB_EMPTY_GRAPH = 17,
  ISB_LENGTH_MISMATCH = 18,
  ISB_EMPTY_BATCH = 19,
  ISB_MISSING_CHECKPOINT = 20,
  ISB_CONFIG_ERROR = 21,
  ISB_IO_ERROR = 22,
  ISB_INVALID_ARGUMENT = 23,
  ISB_INTERNAL = 99
} isb_status;

typedef struct isb_instance isb_instance;
typedef struct isb_params isb_params;
typedef struct isb_episode isb_episode;
typedef struct isb_records isb_records;

/* Message of the last failure on the calling thread; never NULL. */
ISB_API const char* isb_last_error(void);
ISB_API const char* isb_status_name(isb_status status);

/* Derives an independent seed from two values. */
ISB_API uint64_t isb_mix_seed(uint64_t a, uint64_t b);

/* Strings returned through char** are owned by the caller. */
ISB_API void isb_string_free(char* s);

/* Instances */
ISB_API isb_status isb_instance_load(const char* path, isb_instance** out);
ISB_API isb_status isb_instance_parse(const char* text, const char* name, isb_instance** out);
ISB_API isb_status isb_instance_generate(int machines, int jobs, uint64_t seed, const char* name,
                                         isb_instance** out);
ISB_API isb_status isb_instance_save(const isb_instance* inst, const char* path);
ISB_API isb_status isb_instance_serialize(const isb_instance* inst, char** out);
ISB_API const char* isb_instance_name(const isb_instance* inst);
ISB_API int isb_instance_jobs(const isb_instance* inst);
ISB_API int isb_instance_machines(const isb_instance* inst);
ISB_API void isb_instance_free(isb_instance* inst);

/* Policy parameters (checkpoints) */
ISB_API isb_status isb_params_init(uint64_t seed, isb_params** out);
ISB_API isb_status isb_params_load(const char* path, isb_params** out);
ISB_API isb_status isb_params_save(const isb_params* params, const char* path);
ISB_API void isb_params_free(isb_params* params);

/* Episodes. `scheduler` is a rule name or "GNN-RL"; params may be NULL for rules. */
ISB_API isb_status isb_episode_run(const isb_instance* inst, const char* scheduler,
                                   const isb_params* params, double p_interrupt, int t_interrupt,
                                   uint64_t seed, isb_episode** out);
ISB_API int isb_episode_makespan(const isb_episode* ep);
ISB_API size_t isb_episode_violation_count(const isb_episode* ep);
ISB_API isb_status isb_episode_events_csv(const isb_episode* ep, char** out);
ISB_API void isb_episode_free(isb_episode* ep);

/* Checks an event log (CSV text) against an instance. `report` lists one
   violation per line and may be NULL. */
ISB_API isb_status isb_validate_events(const isb_instance* inst, const char* events_csv,
                                       size_t* violations, char** report);

/* Sweeps. `schedulers` is a comma list ("all" expands to every rule);
   `p_list` accepts fractions or percentages. */
typedef struct isb_sweep {
  const isb_instance* const* instances;
  size_t instance_count;
  const char* schedulers;
  const char* p_list;
  int seeds;
  int t_interrupt;
  uint64_t master_seed;
  const isb_params* params; /* NULL unless GNN-RL is listed */
  int wall_clock;           /* 0 writes wall_ms as 0 */
  int threads;              /* 0 = hardware concurrency */
} isb_sweep;

ISB_API isb_status isb_evaluate(const isb_sweep* sweep, isb_records** out);
ISB_API isb_status isb_records_parse(const char* csv, isb_records** out);
ISB_API isb_status isb_records_csv(const isb_records* records, char** out);
ISB_API size_t isb_records_count(const isb_records* records);
ISB_API size_t isb_records_unvalidated(const isb_records* records);
/* Row accessors for replaying single episodes. */
ISB_API const char* isb_record_instance(const isb_records* records, size_t i);
ISB_API const char* isb_record_scheduler(const isb_records* records, size_t i);
ISB_API double isb_record_p_interrupt(const isb_records* records, size_t i);
ISB_API int isb_record_t_interrupt(const isb_records* records, size_t i);
ISB_API uint64_t isb_record_seed(const isb_records* records, size_t i);
ISB_API void isb_records_free(isb_records* records);

ISB_API isb_status isb_report(const isb_records* records, char** out);
ISB_API isb_status isb_plot_gantt(const char* events_csv, int t_interrupt, char** svg);
ISB_API isb_status isb_plot_curves(const isb_records* records, char** svg);

/* Training progress, called after each iteration; validation_mean < 0 when
   the iteration did not validate. */
typedef void (*isb_train_callback)(int iteration, double episode_return, int makespan,
                                   double validation_mean, long long wall_ms, void* user);

ISB_API isb_status isb_config_check(const char* config_text, char** normalized);
/* Writes the checkpoint at every validation improvement and the training log
   at the end. Either path may be NULL. `best` may be NULL. */
ISB_API isb_status isb_train(const char* config_text, const char* checkpoint_path,
                             const char* log_path, isb_train_callback callback, void* user,
                             isb_params** best);

#ifdef __cplusplus
}
#endif

#endif
