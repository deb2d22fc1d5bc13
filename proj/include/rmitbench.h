/*
 * Copyright (c) the rmitbench authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the rmitbench shared library.
 *
 * Every function returns RMIT_OK or an error code; on error,
 * rmit_last_error() describes the failure for the calling thread. Objects
 * returned through out-parameters are owned by the caller and released with
 * the matching *_free function. Strings returned through char** are released
 * with rmit_string_free. Out-parameters are left untouched on error.
 */

#ifndef RMITBENCH_H_
#define RMITBENCH_H_

#include <stdint.h>

#if defined(_WIN32)
#define RMITBENCH_API __declspec(dllexport)
#else
#define RMITBENCH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmit_status {
  RMIT_OK = 0,
  RMIT_ERR_INVALID_ARGUMENT = 1,
  RMIT_ERR_PARSE = 2,
  RMIT_ERR_IO = 3,
  RMIT_ERR_RUNTIME = 4
} rmit_status;

typedef enum rmit_mode {
  RMIT_MODE_RMIT = 0,
  RMIT_MODE_V1_ONLY = 1,
  RMIT_MODE_V2_ONLY = 2
} rmit_mode;

typedef enum rmit_verdict {
  RMIT_VERDICT_NO_CHANGE = 0,
  RMIT_VERDICT_REGRESSION = 1,
  RMIT_VERDICT_IMPROVEMENT = 2
} rmit_verdict;

typedef struct rmit_config rmit_config;
typedef struct rmit_plan rmit_plan;
typedef struct rmit_dataset rmit_dataset;
typedef struct rmit_estimate rmit_estimate;
typedef struct rmit_study_report rmit_study_report;

typedef struct rmit_analysis_options {
  int32_t replicates;
  double confidence_level;
  double fail_threshold_pct;
  uint64_t master_seed;
} rmit_analysis_options;

/* Message of the last failure on this thread; empty string if none. The
 * pointer stays valid until the thread's next rmitbench call. */
RMITBENCH_API const char* rmit_last_error(void);
RMITBENCH_API void rmit_string_free(char* text);

/* ---- experiment configuration ---- */
RMITBENCH_API rmit_status rmit_config_parse_json(const char* json_text,
                                                 rmit_config** out);
RMITBENCH_API rmit_status rmit_config_load(const char* path,
                                           rmit_config** out);
RMITBENCH_API void rmit_config_free(rmit_config* config);

RMITBENCH_API rmit_status rmit_config_set_seed(rmit_config* config,
                                               uint64_t master_seed);
RMITBENCH_API rmit_status rmit_config_set_replicates(rmit_config* config,
                                                     int32_t replicates);
RMITBENCH_API rmit_status rmit_config_set_confidence_level(rmit_config* config,
                                                           double level);
RMITBENCH_API rmit_status rmit_config_set_fail_threshold(rmit_config* config,
                                                         double pct);

RMITBENCH_API rmit_status rmit_config_mode(const rmit_config* config,
                                           rmit_mode* out);
RMITBENCH_API rmit_status rmit_config_grid(const rmit_config* config,
                                           int32_t* instance_count,
                                           int32_t* calls_per_instance,
                                           int32_t* iterations_per_call);
RMITBENCH_API rmit_status rmit_config_seed(const rmit_config* config,
                                           uint64_t* out);
RMITBENCH_API rmit_status rmit_config_analysis_options(
    const rmit_config* config, rmit_analysis_options* out);

/* ---- execution plans ---- */
RMITBENCH_API rmit_status rmit_plan_generate(int32_t instance_count,
                                             int32_t calls_per_instance,
                                             int32_t iterations_per_call,
                                             uint64_t master_seed,
                                             rmit_plan** out);
RMITBENCH_API void rmit_plan_free(rmit_plan* plan);
RMITBENCH_API rmit_status rmit_plan_pair_count(const rmit_plan* plan,
                                               int64_t* out);
RMITBENCH_API rmit_status rmit_plan_order_counts(const rmit_plan* plan,
                                                 int64_t* v1_first,
                                                 int64_t* v2_first);
RMITBENCH_API rmit_status rmit_plan_to_json(const rmit_plan* plan, char** out);

/* ---- experiment execution ---- */
RMITBENCH_API rmit_status rmit_experiment_run(const rmit_config* config,
                                              rmit_dataset** out);
/* Two fresh single-version deployments (v1_only then v2_only). */
RMITBENCH_API rmit_status rmit_traditional_run(const rmit_config* config,
                                               rmit_dataset** out_v1,
                                               rmit_dataset** out_v2);

/* ---- datasets ---- */
RMITBENCH_API rmit_status rmit_dataset_read(const char* path,
                                            rmit_dataset** out);
RMITBENCH_API rmit_status rmit_dataset_write(const rmit_dataset* dataset,
                                             const char* path);
RMITBENCH_API void rmit_dataset_free(rmit_dataset* dataset);
RMITBENCH_API rmit_status rmit_dataset_record_count(const rmit_dataset* dataset,
                                                    int64_t* out);
/* Validation report as JSON; *ok is 1 when there are no violations. */
RMITBENCH_API rmit_status rmit_dataset_validate(const rmit_dataset* dataset,
                                                int32_t* ok, char** json_out);

/* ---- analysis ---- */
RMITBENCH_API rmit_status rmit_analyze_paired(
    const rmit_dataset* dataset, const rmit_analysis_options* options,
    rmit_estimate** out);
RMITBENCH_API rmit_status rmit_analyze_traditional(
    const rmit_dataset* v1_dataset, const rmit_dataset* v2_dataset,
    const rmit_analysis_options* options, rmit_estimate** out);
RMITBENCH_API void rmit_estimate_free(rmit_estimate* estimate);
RMITBENCH_API rmit_status rmit_estimate_values(const rmit_estimate* estimate,
                                               double* median_change_pct,
                                               double* ci_low_pct,
                                               double* ci_high_pct);
RMITBENCH_API rmit_status rmit_estimate_verdict(const rmit_estimate* estimate,
                                                rmit_verdict* out);
RMITBENCH_API rmit_status rmit_estimate_to_json(const rmit_estimate* estimate,
                                                char** out);

/* ---- study grids ---- */
/* Loads a study config (experiment config plus grid) and runs every cell. */
RMITBENCH_API rmit_status rmit_study_run(const char* config_path,
                                         rmit_study_report** out);
RMITBENCH_API void rmit_study_report_free(rmit_study_report* report);
RMITBENCH_API rmit_status rmit_study_report_row_count(
    const rmit_study_report* report, int64_t* out);
RMITBENCH_API rmit_status rmit_study_report_failed_count(
    const rmit_study_report* report, int64_t* out);
RMITBENCH_API rmit_status rmit_study_report_write_csv(
    const rmit_study_report* report, const char* path);
RMITBENCH_API rmit_status rmit_study_report_write_json(
    const rmit_study_report* report, const char* path);
RMITBENCH_API rmit_status rmit_study_report_to_json(
    const rmit_study_report* report, char** out);
RMITBENCH_API rmit_status rmit_study_report_read(const char* path,
                                                 rmit_study_report** out);
/* Aligned markdown table of the report rows. */
RMITBENCH_API rmit_status rmit_study_report_render(
    const rmit_study_report* report, char** out);

/* ---- example workload ---- */
RMITBENCH_API rmit_status rmit_pi_estimate(int64_t values, uint64_t seed,
                                           double* out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* RMITBENCH_H_ */
