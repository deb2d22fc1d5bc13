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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core/simulator.hpp"
#include "core/types.hpp"

namespace rmitbench {

struct SimulatedTarget {
  WorkloadModel workload;
  PlatformModel platform;
  // When false, simulator streams are rooted at the experiment master seed.
  bool platform_seed_set = false;
};

struct LocalProcessTarget {
  std::vector<std::string> command_v1;
  std::vector<std::string> command_v2;
  std::int64_t timeout_ms = 60'000;
};

struct HttpEndpointTarget {
  std::string url_v1;
  std::string url_v2;
  std::string body_v1 = "{}";
  std::string body_v2 = "{}";
  std::int64_t timeout_ms = 60'000;
};

// The two function versions under comparison. v1 and v2 always share a kind.
struct TargetSpec {
  std::variant<SimulatedTarget, LocalProcessTarget, HttpEndpointTarget> target =
      SimulatedTarget{};

  TargetKind kind() const {
    return static_cast<TargetKind>(target.index());
  }
  const SimulatedTarget& simulated() const {
    return std::get<SimulatedTarget>(target);
  }
  const LocalProcessTarget& local_process() const {
    return std::get<LocalProcessTarget>(target);
  }
  const HttpEndpointTarget& http_endpoint() const {
    return std::get<HttpEndpointTarget>(target);
  }
};

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  Mode mode = Mode::kRmit;
  int instance_count = 1;      // K: deployed wrapper instances
  int calls_per_instance = 1;  // C: calls to each instance
  int iterations_per_call = 1; // i: interleaved iterations per call
  double confidence_level = 0.99;
  int bootstrap_replicates = 10'000;
  std::uint64_t master_seed = 0;
  double fail_threshold_pct = 0.0;
  TargetSpec target;

  std::int64_t planned_pairs() const {
    return static_cast<std::int64_t>(instance_count) * calls_per_instance *
           iterations_per_call;
  }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// One timed function execution.
struct MeasurementRecord {
  std::string experiment_id;
  Mode mode = Mode::kRmit;
  int instance_id = 0;
  int call_index = 0;
  int iteration_index = 0;
  Version version = Version::kV1;
  Position position = Position::kFirst;
  std::int64_t start_ns = 0;
  std::int64_t end_ns = 0;
  std::int64_t duration_ns = 0;
  RunStatus status = RunStatus::kOk;

  bool operator==(const MeasurementRecord&) const = default;
};

// A matched v1/v2 duration pair from the same instance, call, and iteration.
struct MeasurementPair {
  int instance_id = 0;
  int call_index = 0;
  int iteration_index = 0;
  Version first_version = Version::kV1;
  std::int64_t v1_duration_ns = 0;
  std::int64_t v2_duration_ns = 0;

  bool operator==(const MeasurementPair&) const = default;
};

struct Dataset {
  std::optional<ExperimentConfig> config;
  std::vector<MeasurementRecord> records;

  // Mode of the dataset, from the attached config or the records. Throws
  // std::invalid_argument when neither is available (empty file dataset).
  Mode mode() const;
  std::string experiment_id() const;
};

struct ValidationIssue {
  // Index into Dataset::records, or npos for dataset-level findings.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t record_index = npos;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> violations;
  std::int64_t dropped_keys = 0;    // keys unusable for pairing (not violations)
  std::int64_t complete_pairs = 0;  // rmit datasets only
  std::int64_t record_count = 0;

  bool ok() const { return violations.empty(); }
};

// Checks every record and (for rmit datasets) the pairing structure.
// Validation never throws on bad data; it reports.
ValidationReport validate_dataset(const Dataset& dataset);

// One pair per complete key, sorted by (instance, call, iteration). Keys with
// a missing side, an error status, or duplicate records are dropped entirely.
// Throws std::invalid_argument for non-rmit datasets.
std::vector<MeasurementPair> pair_records(const Dataset& dataset);

// Measurement CSV, exact header:
//   experiment_id,mode,instance_id,call_index,iteration_index,version,
//   position,start_ns,end_ns,duration_ns,status
// version is written as 1 or 2; UTF-8, LF line endings, no quoting.
// read(write(d)) reproduces d's records field-for-field.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

std::string validation_report_to_json(const ValidationReport& report);

// Parses the experiment-config JSON document (keys mirror ExperimentConfig
// field names). Unknown keys are rejected unless listed in extra_allowed;
// the study config passes its own extra key through here. The parsed config
// is validated before it is returned.
ExperimentConfig parse_experiment_config(
    const std::string& json_text,
    std::span<const std::string_view> extra_allowed = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace rmitbench
