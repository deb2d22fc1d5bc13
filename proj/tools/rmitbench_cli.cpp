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

// rmitbench: paired performance-regression benchmarking front end.
// Exit codes: 0 ok / no regression, 1 runtime error, 2 usage or config
// error, 3 regression detected under --fail-on-regression. Standard output
// carries only machine-parseable JSON or table data; diagnostics go to
// standard error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmitbench.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRegression = 3;

struct AnalysisFlags {
  std::uint64_t seed = 0;
  int replicates = 10'000;
  double level = 0.99;
  double threshold = 0.0;
  bool fail_on_regression = false;
  bool seed_set = false;
  bool replicates_set = false;
  bool level_set = false;
  bool threshold_set = false;
};

void add_analysis_flags(CLI::App& cmd, AnalysisFlags& flags) {
  cmd.add_flag("--fail-on-regression", flags.fail_on_regression,
               "Exit 3 when the verdict is regression");
  cmd.add_option("--seed", flags.seed, "Master seed override")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd.add_option("--replicates", flags.replicates,
                 "Bootstrap replicate count override")
      ->each([&](const std::string&) { flags.replicates_set = true; });
  cmd.add_option("--level", flags.level, "Confidence level override")
      ->each([&](const std::string&) { flags.level_set = true; });
  cmd.add_option("--fail-threshold", flags.threshold,
                 "Regression threshold override, percent")
      ->each([&](const std::string&) { flags.threshold_set = true; });
}

int fail(int code, const std::string& message) {
  std::cerr << "rmitbench: " << message << '\n';
  return code;
}

int fail_last(int code, const std::string& context) {
  return fail(code, context + ": " + rmit_last_error());
}

std::string take_string(char* text) {
  std::string out = text ? text : "";
  rmit_string_free(text);
  return out;
}

struct ConfigDeleter {
  void operator()(rmit_config* p) const { rmit_config_free(p); }
};
struct DatasetDeleter {
  void operator()(rmit_dataset* p) const { rmit_dataset_free(p); }
};
struct EstimateDeleter {
  void operator()(rmit_estimate* p) const { rmit_estimate_free(p); }
};
struct PlanDeleter {
  void operator()(rmit_plan* p) const { rmit_plan_free(p); }
};
struct ReportDeleter {
  void operator()(rmit_study_report* p) const { rmit_study_report_free(p); }
};

using ConfigPtr = std::unique_ptr<rmit_config, ConfigDeleter>;
using DatasetPtr = std::unique_ptr<rmit_dataset, DatasetDeleter>;
using EstimatePtr = std::unique_ptr<rmit_estimate, EstimateDeleter>;
using PlanPtr = std::unique_ptr<rmit_plan, PlanDeleter>;
using ReportPtr = std::unique_ptr<rmit_study_report, ReportDeleter>;

bool write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return false;
  }
  out << text;
  if (!text.empty() && text.back() != '\n') {
    out << '\n';
  }
  return static_cast<bool>(out.flush());
}

// Loads the config and applies flag overrides; usage errors exit 2.
int load_config(const std::string& path, const AnalysisFlags& flags,
                ConfigPtr& out) {
  rmit_config* raw = nullptr;
  if (rmit_config_load(path.c_str(), &raw) != RMIT_OK) {
    return fail_last(kExitUsage, "cannot load config '" + path + "'");
  }
  out.reset(raw);
  if (flags.seed_set && rmit_config_set_seed(raw, flags.seed) != RMIT_OK) {
    return fail_last(kExitUsage, "--seed");
  }
  if (flags.replicates_set &&
      rmit_config_set_replicates(raw, flags.replicates) != RMIT_OK) {
    return fail_last(kExitUsage, "--replicates");
  }
  if (flags.level_set &&
      rmit_config_set_confidence_level(raw, flags.level) != RMIT_OK) {
    return fail_last(kExitUsage, "--level");
  }
  if (flags.threshold_set &&
      rmit_config_set_fail_threshold(raw, flags.threshold) != RMIT_OK) {
    return fail_last(kExitUsage, "--fail-threshold");
  }
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool traditional, bool emit_plan, const AnalysisFlags& flags) {
  ConfigPtr config;
  if (const int code = load_config(config_path, flags, config)) {
    return code;
  }

  rmit_analysis_options options{};
  if (rmit_config_analysis_options(config.get(), &options) != RMIT_OK) {
    return fail_last(kExitUsage, "config");
  }
  if (options.replicates < 100) {
    return fail(kExitUsage, "bootstrap_replicates must be >= 100 to analyze");
  }
  rmit_mode mode{};
  rmit_config_mode(config.get(), &mode);

  std::error_code ec;
  const std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out, ec);
  if (ec) {
    return fail(kExitRuntime, "cannot create output directory '" + out_dir +
                                  "': " + ec.message());
  }

  if (emit_plan) {
    std::int32_t instances = 0, calls = 0, iterations = 0;
    std::uint64_t seed = 0;
    rmit_config_grid(config.get(), &instances, &calls, &iterations);
    rmit_config_seed(config.get(), &seed);
    rmit_plan* plan_raw = nullptr;
    if (rmit_plan_generate(instances, calls, iterations, seed, &plan_raw) !=
        RMIT_OK) {
      return fail_last(kExitRuntime, "plan generation failed");
    }
    const PlanPtr plan(plan_raw);
    char* json = nullptr;
    rmit_plan_to_json(plan.get(), &json);
    if (!write_text_file(out / "plan.json", take_string(json))) {
      return fail(kExitRuntime, "cannot write " + (out / "plan.json").string());
    }
    std::cerr << "wrote " << (out / "plan.json").string() << '\n';
  }

  rmit_dataset* dataset_raw = nullptr;
  if (rmit_experiment_run(config.get(), &dataset_raw) != RMIT_OK) {
    return fail_last(kExitRuntime, "experiment failed");
  }
  const DatasetPtr dataset(dataset_raw);
  const auto measurements_path = out / "measurements.csv";
  if (rmit_dataset_write(dataset.get(), measurements_path.c_str()) !=
      RMIT_OK) {
    return fail_last(kExitRuntime, "cannot write dataset");
  }
  std::cerr << "wrote " << measurements_path.string() << '\n';

  std::string stdout_doc;
  bool regression = false;

  EstimatePtr estimate;
  if (mode == RMIT_MODE_RMIT) {
    rmit_estimate* estimate_raw = nullptr;
    if (rmit_analyze_paired(dataset.get(), &options, &estimate_raw) !=
        RMIT_OK) {
      return fail_last(kExitRuntime, "analysis failed");
    }
    estimate.reset(estimate_raw);
    char* json = nullptr;
    rmit_estimate_to_json(estimate.get(), &json);
    const std::string estimate_json = take_string(json);
    if (!write_text_file(out / "analysis.json", estimate_json)) {
      return fail(kExitRuntime,
                  "cannot write " + (out / "analysis.json").string());
    }
    std::cerr << "wrote " << (out / "analysis.json").string() << '\n';
    rmit_verdict verdict{};
    rmit_estimate_verdict(estimate.get(), &verdict);
    regression = regression || verdict == RMIT_VERDICT_REGRESSION;
    stdout_doc = estimate_json;
  } else {
    // Single-version runs have nothing to compare; report dataset health.
    std::int32_t ok = 0;
    char* json = nullptr;
    if (rmit_dataset_validate(dataset.get(), &ok, &json) != RMIT_OK) {
      return fail_last(kExitRuntime, "validation failed");
    }
    stdout_doc = take_string(json);
  }

  if (traditional) {
    rmit_dataset* v1_raw = nullptr;
    rmit_dataset* v2_raw = nullptr;
    if (rmit_traditional_run(config.get(), &v1_raw, &v2_raw) != RMIT_OK) {
      return fail_last(kExitRuntime, "traditional study failed");
    }
    const DatasetPtr v1(v1_raw);
    const DatasetPtr v2(v2_raw);
    const auto v1_path = out / "measurements_v1.csv";
    const auto v2_path = out / "measurements_v2.csv";
    if (rmit_dataset_write(v1.get(), v1_path.c_str()) != RMIT_OK ||
        rmit_dataset_write(v2.get(), v2_path.c_str()) != RMIT_OK) {
      return fail_last(kExitRuntime, "cannot write traditional datasets");
    }
    std::cerr << "wrote " << v1_path.string() << '\n';
    std::cerr << "wrote " << v2_path.string() << '\n';

    rmit_estimate* estimate_raw = nullptr;
    if (rmit_analyze_traditional(v1.get(), v2.get(), &options,
                                 &estimate_raw) != RMIT_OK) {
      return fail_last(kExitRuntime, "traditional analysis failed");
    }
    const EstimatePtr traditional_estimate(estimate_raw);
    char* json = nullptr;
    rmit_estimate_to_json(traditional_estimate.get(), &json);
    const std::string traditional_json = take_string(json);
    if (!write_text_file(out / "analysis_traditional.json",
                         traditional_json)) {
      return fail(kExitRuntime, "cannot write " +
                                    (out / "analysis_traditional.json").string());
    }
    std::cerr << "wrote " << (out / "analysis_traditional.json").string()
              << '\n';
    rmit_verdict verdict{};
    rmit_estimate_verdict(traditional_estimate.get(), &verdict);
    regression = regression || verdict == RMIT_VERDICT_REGRESSION;

    // Combined comparison document when both methodologies ran.
    std::string combined = "{\n  \"";
    combined += mode == RMIT_MODE_RMIT ? "rmit" : "single_version";
    combined += "\": ";
    combined += stdout_doc;
    combined += ",\n  \"traditional\": ";
    combined += traditional_json;
    combined += "\n}";
    stdout_doc = combined;
  }

  std::cout << stdout_doc << '\n';
  return flags.fail_on_regression && regression ? kExitRegression : kExitOk;
}

int cmd_analyze(const std::vector<std::string>& dataset_paths,
                const AnalysisFlags& flags) {
  rmit_analysis_options options{};
  options.replicates = flags.replicates;
  options.confidence_level = flags.level;
  options.fail_threshold_pct = flags.threshold;
  options.master_seed = flags.seed;

  std::vector<DatasetPtr> datasets;
  for (const std::string& path : dataset_paths) {
    rmit_dataset* raw = nullptr;
    if (rmit_dataset_read(path.c_str(), &raw) != RMIT_OK) {
      return fail_last(kExitUsage, "cannot read dataset '" + path + "'");
    }
    datasets.emplace_back(raw);
  }

  rmit_estimate* estimate_raw = nullptr;
  rmit_status status;
  if (datasets.size() == 1) {
    status = rmit_analyze_paired(datasets[0].get(), &options, &estimate_raw);
  } else {
    status = rmit_analyze_traditional(datasets[0].get(), datasets[1].get(),
                                      &options, &estimate_raw);
  }
  if (status != RMIT_OK) {
    return fail_last(kExitUsage, "analysis failed");
  }
  const EstimatePtr estimate(estimate_raw);

  char* json = nullptr;
  rmit_estimate_to_json(estimate.get(), &json);
  std::cout << take_string(json) << '\n';

  rmit_verdict verdict{};
  rmit_estimate_verdict(estimate.get(), &verdict);
  return flags.fail_on_regression && verdict == RMIT_VERDICT_REGRESSION
             ? kExitRegression
             : kExitOk;
}

int cmd_study(const std::string& config_path, const std::string& out_dir,
              bool strict) {
  rmit_study_report* report_raw = nullptr;
  if (const rmit_status status =
          rmit_study_run(config_path.c_str(), &report_raw);
      status != RMIT_OK) {
    return fail_last(status == RMIT_ERR_RUNTIME ? kExitRuntime : kExitUsage,
                     "study failed");
  }
  const ReportPtr report(report_raw);

  std::error_code ec;
  const std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out, ec);
  if (ec) {
    return fail(kExitRuntime, "cannot create output directory '" + out_dir +
                                  "': " + ec.message());
  }
  const auto csv_path = out / "report.csv";
  const auto json_path = out / "report.json";
  if (rmit_study_report_write_csv(report.get(), csv_path.c_str()) != RMIT_OK ||
      rmit_study_report_write_json(report.get(), json_path.c_str()) !=
          RMIT_OK) {
    return fail_last(kExitRuntime, "cannot write report");
  }
  std::cerr << "wrote " << csv_path.string() << '\n';
  std::cerr << "wrote " << json_path.string() << '\n';

  char* json = nullptr;
  rmit_study_report_to_json(report.get(), &json);
  std::cout << take_string(json) << '\n';

  std::int64_t failed = 0;
  rmit_study_report_failed_count(report.get(), &failed);
  if (failed > 0) {
    std::cerr << "rmitbench: " << failed
              << " grid cell(s) failed; see failed_cells in the report\n";
    if (strict) {
      return kExitRuntime;
    }
  }
  return kExitOk;
}

int cmd_report(const std::string& report_path) {
  rmit_study_report* report_raw = nullptr;
  if (rmit_study_report_read(report_path.c_str(), &report_raw) != RMIT_OK) {
    return fail_last(kExitUsage, "cannot read report '" + report_path + "'");
  }
  const ReportPtr report(report_raw);
  char* table = nullptr;
  if (rmit_study_report_render(report.get(), &table) != RMIT_OK) {
    return fail_last(kExitRuntime, "cannot render report");
  }
  std::cout << take_string(table);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paired performance-regression benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string report_path;
  std::vector<std::string> dataset_paths;
  bool traditional = false;
  bool emit_plan = false;
  bool strict = false;
  AnalysisFlags run_flags;
  AnalysisFlags analyze_flags;

  CLI::App* run =
      app.add_subcommand("run", "Run one experiment and analyze it");
  run->add_option("--config", config_path, "Experiment config JSON")
      ->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--traditional", traditional,
                "Also run the two-deployment traditional study");
  run->add_flag("--emit-plan", emit_plan,
                "Write the randomized execution plan as plan.json");
  add_analysis_flags(*run, run_flags);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Analyze one rmit dataset or two single-version datasets");
  analyze
      ->add_option("datasets", dataset_paths,
                   "Dataset CSV path(s): one rmit, or v1 then v2")
      ->expected(1, 2)
      ->required();
  add_analysis_flags(*analyze, analyze_flags);

  CLI::App* study = app.add_subcommand(
      "study", "Run a methodology-comparison grid from a study config");
  study->add_option("--config", config_path, "Study config JSON")->required();
  study->add_option("--out", out_dir, "Output directory")->required();
  study->add_flag("--strict", strict, "Exit 1 when any grid cell fails");

  CLI::App* report =
      app.add_subcommand("report", "Render a study report as a table");
  report->add_option("report", report_path, "Report CSV or JSON path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) {
    return cmd_run(config_path, out_dir, traditional, emit_plan, run_flags);
  }
  if (analyze->parsed()) {
    return cmd_analyze(dataset_paths, analyze_flags);
  }
  if (study->parsed()) {
    return cmd_study(config_path, out_dir, strict);
  }
  if (report->parsed()) {
    return cmd_report(report_path);
  }
  return kExitUsage;
}
