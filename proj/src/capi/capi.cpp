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

#include "rmitbench.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/measurements.hpp"
#include "core/schedule.hpp"
#include "core/simulator.hpp"
#include "core/stats.hpp"
#include "core/study.hpp"

struct rmit_config {
  rmitbench::ExperimentConfig value;
};
struct rmit_plan {
  rmitbench::ExecutionPlan value;
};
struct rmit_dataset {
  rmitbench::Dataset value;
};
struct rmit_estimate {
  rmitbench::ChangeEstimate value;
};
struct rmit_study_report {
  rmitbench::StudyReport value;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
rmit_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return RMIT_OK;
  } catch (const rmitbench::ConfigError& e) {
    g_last_error = e.what();
    return RMIT_ERR_PARSE;
  } catch (const rmitbench::ParseError& e) {
    g_last_error = e.what();
    return RMIT_ERR_PARSE;
  } catch (const rmitbench::IoError& e) {
    g_last_error = e.what();
    return RMIT_ERR_IO;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return RMIT_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RMIT_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return RMIT_ERR_RUNTIME;
  }
}

rmit_status invalid(const char* message) noexcept {
  g_last_error = message;
  return RMIT_ERR_INVALID_ARGUMENT;
}

// malloc-backed copy so callers can release with rmit_string_free (free()).
char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) {
    throw std::bad_alloc();
  }
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

rmitbench::AnalysisOptions to_options(const rmit_analysis_options& options) {
  rmitbench::AnalysisOptions out;
  out.replicates = options.replicates;
  out.confidence_level = options.confidence_level;
  out.fail_threshold_pct = options.fail_threshold_pct;
  out.master_seed = options.master_seed;
  return out;
}

}  // namespace

extern "C" {

const char* rmit_last_error(void) { return g_last_error.c_str(); }

void rmit_string_free(char* text) { std::free(text); }

rmit_status rmit_config_parse_json(const char* json_text, rmit_config** out) {
  if (!json_text || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto config = std::make_unique<rmit_config>();
    config->value = rmitbench::parse_experiment_config(json_text);
    *out = config.release();
  });
}

rmit_status rmit_config_load(const char* path, rmit_config** out) {
  if (!path || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto config = std::make_unique<rmit_config>();
    config->value = rmitbench::load_experiment_config(path);
    *out = config.release();
  });
}

void rmit_config_free(rmit_config* config) { delete config; }

rmit_status rmit_config_set_seed(rmit_config* config, uint64_t master_seed) {
  if (!config) {
    return invalid("null argument");
  }
  return wrap([&] { config->value.master_seed = master_seed; });
}

rmit_status rmit_config_set_replicates(rmit_config* config,
                                       int32_t replicates) {
  if (!config) {
    return invalid("null argument");
  }
  return wrap([&] {
    if (replicates < 1) {
      throw rmitbench::ConfigError("bootstrap_replicates must be >= 1");
    }
    config->value.bootstrap_replicates = replicates;
  });
}

rmit_status rmit_config_set_confidence_level(rmit_config* config,
                                             double level) {
  if (!config) {
    return invalid("null argument");
  }
  return wrap([&] {
    if (!(level > 0.0) || !(level < 1.0)) {
      throw rmitbench::ConfigError(
          "confidence_level must be strictly between 0 and 1");
    }
    config->value.confidence_level = level;
  });
}

rmit_status rmit_config_set_fail_threshold(rmit_config* config, double pct) {
  if (!config) {
    return invalid("null argument");
  }
  return wrap([&] {
    if (!(pct >= 0.0)) {
      throw rmitbench::ConfigError("fail_threshold_pct must be >= 0");
    }
    config->value.fail_threshold_pct = pct;
  });
}

rmit_status rmit_config_mode(const rmit_config* config, rmit_mode* out) {
  if (!config || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    switch (config->value.mode) {
      case rmitbench::Mode::kRmit:
        *out = RMIT_MODE_RMIT;
        break;
      case rmitbench::Mode::kV1Only:
        *out = RMIT_MODE_V1_ONLY;
        break;
      case rmitbench::Mode::kV2Only:
        *out = RMIT_MODE_V2_ONLY;
        break;
    }
  });
}

rmit_status rmit_config_grid(const rmit_config* config,
                             int32_t* instance_count,
                             int32_t* calls_per_instance,
                             int32_t* iterations_per_call) {
  if (!config || !instance_count || !calls_per_instance ||
      !iterations_per_call) {
    return invalid("null argument");
  }
  return wrap([&] {
    *instance_count = config->value.instance_count;
    *calls_per_instance = config->value.calls_per_instance;
    *iterations_per_call = config->value.iterations_per_call;
  });
}

rmit_status rmit_config_seed(const rmit_config* config, uint64_t* out) {
  if (!config || !out) {
    return invalid("null argument");
  }
  return wrap([&] { *out = config->value.master_seed; });
}

rmit_status rmit_config_analysis_options(const rmit_config* config,
                                         rmit_analysis_options* out) {
  if (!config || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    out->replicates = config->value.bootstrap_replicates;
    out->confidence_level = config->value.confidence_level;
    out->fail_threshold_pct = config->value.fail_threshold_pct;
    out->master_seed = config->value.master_seed;
  });
}

rmit_status rmit_plan_generate(int32_t instance_count,
                               int32_t calls_per_instance,
                               int32_t iterations_per_call,
                               uint64_t master_seed, rmit_plan** out) {
  if (!out) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto plan = std::make_unique<rmit_plan>();
    plan->value = rmitbench::generate_plan(instance_count, calls_per_instance,
                                           iterations_per_call, master_seed);
    *out = plan.release();
  });
}

void rmit_plan_free(rmit_plan* plan) { delete plan; }

rmit_status rmit_plan_pair_count(const rmit_plan* plan, int64_t* out) {
  if (!plan || !out) {
    return invalid("null argument");
  }
  return wrap([&] { *out = static_cast<int64_t>(plan->value.pair_count()); });
}

rmit_status rmit_plan_order_counts(const rmit_plan* plan, int64_t* v1_first,
                                   int64_t* v2_first) {
  if (!plan || !v1_first || !v2_first) {
    return invalid("null argument");
  }
  return wrap([&] {
    const auto [first, second] = rmitbench::order_counts(plan->value);
    *v1_first = first;
    *v2_first = second;
  });
}

rmit_status rmit_plan_to_json(const rmit_plan* plan, char** out) {
  if (!plan || !out) {
    return invalid("null argument");
  }
  return wrap([&] { *out = copy_string(rmitbench::plan_to_json(plan->value)); });
}

rmit_status rmit_experiment_run(const rmit_config* config,
                                rmit_dataset** out) {
  if (!config || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto dataset = std::make_unique<rmit_dataset>();
    dataset->value = rmitbench::run_experiment(config->value);
    *out = dataset.release();
  });
}

rmit_status rmit_traditional_run(const rmit_config* config,
                                 rmit_dataset** out_v1,
                                 rmit_dataset** out_v2) {
  if (!config || !out_v1 || !out_v2) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto [v1, v2] = rmitbench::run_traditional_study(config->value);
    auto dataset_v1 = std::make_unique<rmit_dataset>();
    auto dataset_v2 = std::make_unique<rmit_dataset>();
    dataset_v1->value = std::move(v1);
    dataset_v2->value = std::move(v2);
    *out_v1 = dataset_v1.release();
    *out_v2 = dataset_v2.release();
  });
}

rmit_status rmit_dataset_read(const char* path, rmit_dataset** out) {
  if (!path || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto dataset = std::make_unique<rmit_dataset>();
    dataset->value = rmitbench::read_dataset(path);
    *out = dataset.release();
  });
}

rmit_status rmit_dataset_write(const rmit_dataset* dataset, const char* path) {
  if (!dataset || !path) {
    return invalid("null argument");
  }
  return wrap([&] { rmitbench::write_dataset(dataset->value, path); });
}

void rmit_dataset_free(rmit_dataset* dataset) { delete dataset; }

rmit_status rmit_dataset_record_count(const rmit_dataset* dataset,
                                      int64_t* out) {
  if (!dataset || !out) {
    return invalid("null argument");
  }
  return wrap(
      [&] { *out = static_cast<int64_t>(dataset->value.records.size()); });
}

rmit_status rmit_dataset_validate(const rmit_dataset* dataset, int32_t* ok,
                                  char** json_out) {
  if (!dataset || !ok || !json_out) {
    return invalid("null argument");
  }
  return wrap([&] {
    const auto report = rmitbench::validate_dataset(dataset->value);
    *ok = report.ok() ? 1 : 0;
    *json_out = copy_string(rmitbench::validation_report_to_json(report));
  });
}

rmit_status rmit_analyze_paired(const rmit_dataset* dataset,
                                const rmit_analysis_options* options,
                                rmit_estimate** out) {
  if (!dataset || !options || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto estimate = std::make_unique<rmit_estimate>();
    estimate->value =
        rmitbench::analyze_paired(dataset->value, to_options(*options));
    *out = estimate.release();
  });
}

rmit_status rmit_analyze_traditional(const rmit_dataset* v1_dataset,
                                     const rmit_dataset* v2_dataset,
                                     const rmit_analysis_options* options,
                                     rmit_estimate** out) {
  if (!v1_dataset || !v2_dataset || !options || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto estimate = std::make_unique<rmit_estimate>();
    estimate->value = rmitbench::analyze_traditional(
        v1_dataset->value, v2_dataset->value, to_options(*options));
    *out = estimate.release();
  });
}

void rmit_estimate_free(rmit_estimate* estimate) { delete estimate; }

rmit_status rmit_estimate_values(const rmit_estimate* estimate,
                                 double* median_change_pct, double* ci_low_pct,
                                 double* ci_high_pct) {
  if (!estimate || !median_change_pct || !ci_low_pct || !ci_high_pct) {
    return invalid("null argument");
  }
  return wrap([&] {
    *median_change_pct = estimate->value.median_change_pct;
    *ci_low_pct = estimate->value.ci_low_pct;
    *ci_high_pct = estimate->value.ci_high_pct;
  });
}

rmit_status rmit_estimate_verdict(const rmit_estimate* estimate,
                                  rmit_verdict* out) {
  if (!estimate || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    switch (estimate->value.verdict) {
      case rmitbench::Verdict::kNoChange:
        *out = RMIT_VERDICT_NO_CHANGE;
        break;
      case rmitbench::Verdict::kRegression:
        *out = RMIT_VERDICT_REGRESSION;
        break;
      case rmitbench::Verdict::kImprovement:
        *out = RMIT_VERDICT_IMPROVEMENT;
        break;
    }
  });
}

rmit_status rmit_estimate_to_json(const rmit_estimate* estimate, char** out) {
  if (!estimate || !out) {
    return invalid("null argument");
  }
  return wrap(
      [&] { *out = copy_string(rmitbench::estimate_to_json(estimate->value)); });
}

rmit_status rmit_study_run(const char* config_path, rmit_study_report** out) {
  if (!config_path || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    const rmitbench::StudyConfig config =
        rmitbench::load_study_config(config_path);
    auto report = std::make_unique<rmit_study_report>();
    report->value = rmitbench::run_grid(config.grid, config.base);
    *out = report.release();
  });
}

void rmit_study_report_free(rmit_study_report* report) { delete report; }

rmit_status rmit_study_report_row_count(const rmit_study_report* report,
                                        int64_t* out) {
  if (!report || !out) {
    return invalid("null argument");
  }
  return wrap(
      [&] { *out = static_cast<int64_t>(report->value.rows.size()); });
}

rmit_status rmit_study_report_failed_count(const rmit_study_report* report,
                                           int64_t* out) {
  if (!report || !out) {
    return invalid("null argument");
  }
  return wrap(
      [&] { *out = static_cast<int64_t>(report->value.failed_cells.size()); });
}

rmit_status rmit_study_report_write_csv(const rmit_study_report* report,
                                        const char* path) {
  if (!report || !path) {
    return invalid("null argument");
  }
  return wrap([&] { rmitbench::write_report_csv(report->value, path); });
}

rmit_status rmit_study_report_write_json(const rmit_study_report* report,
                                         const char* path) {
  if (!report || !path) {
    return invalid("null argument");
  }
  return wrap([&] { rmitbench::write_report_json(report->value, path); });
}

rmit_status rmit_study_report_to_json(const rmit_study_report* report,
                                      char** out) {
  if (!report || !out) {
    return invalid("null argument");
  }
  return wrap(
      [&] { *out = copy_string(rmitbench::report_to_json(report->value)); });
}

rmit_status rmit_study_report_read(const char* path,
                                   rmit_study_report** out) {
  if (!path || !out) {
    return invalid("null argument");
  }
  return wrap([&] {
    auto report = std::make_unique<rmit_study_report>();
    report->value = rmitbench::read_report(path);
    *out = report.release();
  });
}

rmit_status rmit_study_report_render(const rmit_study_report* report,
                                     char** out) {
  if (!report || !out) {
    return invalid("null argument");
  }
  return wrap(
      [&] { *out = copy_string(rmitbench::render_report_table(report->value)); });
}

rmit_status rmit_pi_estimate(int64_t values, uint64_t seed, double* out) {
  if (!out) {
    return invalid("null argument");
  }
  return wrap([&] { *out = rmitbench::run_pi_estimator(values, seed); });
}

}  // extern "C"
