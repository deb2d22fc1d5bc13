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

#include "core/measurements.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

namespace rmitbench {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kCsvHeader =
    "experiment_id,mode,instance_id,call_index,iteration_index,version,"
    "position,start_ns,end_ns,duration_ns,status";

const char* const kCsvColumns[] = {
    "experiment_id", "mode",     "instance_id", "call_index",
    "iteration_index", "version", "position",    "start_ns",
    "end_ns",        "duration_ns", "status",
};
constexpr std::size_t kCsvColumnCount = std::size(kCsvColumns);

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void csv_error(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

template <typename Int>
Int parse_csv_int(std::string_view field, const char* column,
                  std::size_t line_no) {
  Int value{};
  const auto res =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    csv_error(line_no, std::string("column '") + column +
                           "' is not a valid integer: '" +
                           std::string(field) + "'");
  }
  return value;
}

struct PairKey {
  int instance_id;
  int call_index;
  int iteration_index;

  auto operator<=>(const PairKey&) const = default;
};

struct KeyBucket {
  int ok_v1 = 0;
  int ok_v2 = 0;
  int errors = 0;
  std::int64_t v1_duration_ns = 0;
  std::int64_t v2_duration_ns = 0;
  Version first_version = Version::kV1;
  bool has_first = false;
};

// Groups an rmit dataset's records by (instance, call, iteration).
std::map<PairKey, KeyBucket> bucket_records(const Dataset& dataset) {
  std::map<PairKey, KeyBucket> buckets;
  for (const auto& rec : dataset.records) {
    KeyBucket& b =
        buckets[{rec.instance_id, rec.call_index, rec.iteration_index}];
    if (rec.status == RunStatus::kError) {
      ++b.errors;
      continue;
    }
    if (rec.version == Version::kV1) {
      ++b.ok_v1;
      b.v1_duration_ns = rec.duration_ns;
    } else {
      ++b.ok_v2;
      b.v2_duration_ns = rec.duration_ns;
    }
    if (rec.position == Position::kFirst && !b.has_first) {
      b.first_version = rec.version;
      b.has_first = true;
    }
  }
  return buckets;
}

bool bucket_complete(const KeyBucket& b) {
  return b.errors == 0 && b.ok_v1 == 1 && b.ok_v2 == 1 &&
         b.v1_duration_ns > 0 && b.v2_duration_ns > 0;
}

// --- config JSON helpers ------------------------------------------------

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw ConfigError(what);
}

void reject_unknown_keys(const json& obj, std::span<const std::string_view> known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      config_error("unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json* find_key(const json& obj, std::string_view key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string get_string(const json& obj, const char* key, std::string fallback) {
  const json* v = find_key(obj, key);
  if (!v) {
    return fallback;
  }
  if (!v->is_string()) {
    config_error(std::string(key) + " must be a string");
  }
  return v->get<std::string>();
}

int get_int(const json& obj, const char* key, int fallback) {
  const json* v = find_key(obj, key);
  if (!v) {
    return fallback;
  }
  if (!v->is_number_integer()) {
    config_error(std::string(key) + " must be an integer");
  }
  const auto wide = v->get<std::int64_t>();
  if (wide < std::numeric_limits<int>::min() ||
      wide > std::numeric_limits<int>::max()) {
    config_error(std::string(key) + " is out of range");
  }
  return static_cast<int>(wide);
}

std::int64_t get_int64(const json& obj, const char* key, std::int64_t fallback) {
  const json* v = find_key(obj, key);
  if (!v) {
    return fallback;
  }
  if (!v->is_number_integer()) {
    config_error(std::string(key) + " must be an integer");
  }
  return v->get<std::int64_t>();
}

std::uint64_t get_uint64(const json& obj, const char* key,
                         std::uint64_t fallback) {
  const json* v = find_key(obj, key);
  if (!v) {
    return fallback;
  }
  if (v->is_number_unsigned()) {
    return v->get<std::uint64_t>();
  }
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v->get<std::int64_t>());
  }
  config_error(std::string(key) + " must be a non-negative integer");
}

double get_real(const json& obj, const char* key, double fallback) {
  const json* v = find_key(obj, key);
  if (!v) {
    return fallback;
  }
  if (!v->is_number()) {
    config_error(std::string(key) + " must be a number");
  }
  return v->get<double>();
}

std::vector<std::string> get_string_array(const json& obj, const char* key) {
  const json* v = find_key(obj, key);
  if (!v || !v->is_array() || v->empty()) {
    config_error(std::string(key) + " must be a non-empty array of strings");
  }
  std::vector<std::string> out;
  for (const auto& item : *v) {
    if (!item.is_string()) {
      config_error(std::string(key) + " must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

SimulatedTarget parse_simulated_target(const json& obj) {
  static constexpr std::string_view kKnown[] = {
      "kind", "v1", "v2", "ms_per_mega_value", "platform"};
  reject_unknown_keys(obj, kKnown, "target");

  SimulatedTarget target;
  target.workload.ms_per_mega_value =
      get_real(obj, "ms_per_mega_value", target.workload.ms_per_mega_value);
  if (const json* v1 = find_key(obj, "v1")) {
    if (!v1->is_object()) {
      config_error("target.v1 must be an object");
    }
    static constexpr std::string_view kVersionKeys[] = {"values"};
    reject_unknown_keys(*v1, kVersionKeys, "target.v1");
    target.workload.values_v1 =
        get_int64(*v1, "values", target.workload.values_v1);
  }
  if (const json* v2 = find_key(obj, "v2")) {
    if (!v2->is_object()) {
      config_error("target.v2 must be an object");
    }
    static constexpr std::string_view kVersionKeys[] = {"values"};
    reject_unknown_keys(*v2, kVersionKeys, "target.v2");
    target.workload.values_v2 =
        get_int64(*v2, "values", target.workload.values_v2);
  }
  if (const json* platform = find_key(obj, "platform")) {
    if (!platform->is_object()) {
      config_error("target.platform must be an object");
    }
    static constexpr std::string_view kPlatformKeys[] = {
        "sigma_instance", "sigma_invocation", "drift_step_sigma",
        "cold_start_ms", "seed"};
    reject_unknown_keys(*platform, kPlatformKeys, "target.platform");
    PlatformModel& m = target.platform;
    m.sigma_instance = get_real(*platform, "sigma_instance", m.sigma_instance);
    m.sigma_invocation =
        get_real(*platform, "sigma_invocation", m.sigma_invocation);
    m.drift_step_sigma =
        get_real(*platform, "drift_step_sigma", m.drift_step_sigma);
    m.cold_start_ms = get_real(*platform, "cold_start_ms", m.cold_start_ms);
    if (find_key(*platform, "seed")) {
      m.seed = get_uint64(*platform, "seed", 0);
      target.platform_seed_set = true;
    }
  }
  return target;
}

LocalProcessTarget parse_local_process_target(const json& obj) {
  static constexpr std::string_view kKnown[] = {"kind", "v1", "v2",
                                                "timeout_ms"};
  reject_unknown_keys(obj, kKnown, "target");

  LocalProcessTarget target;
  const json* v1 = find_key(obj, "v1");
  const json* v2 = find_key(obj, "v2");
  if (!v1 || !v1->is_object() || !v2 || !v2->is_object()) {
    config_error("local_process target requires v1 and v2 objects");
  }
  static constexpr std::string_view kVersionKeys[] = {"command"};
  reject_unknown_keys(*v1, kVersionKeys, "target.v1");
  reject_unknown_keys(*v2, kVersionKeys, "target.v2");
  target.command_v1 = get_string_array(*v1, "command");
  target.command_v2 = get_string_array(*v2, "command");
  target.timeout_ms = get_int64(obj, "timeout_ms", target.timeout_ms);
  return target;
}

HttpEndpointTarget parse_http_target(const json& obj) {
  static constexpr std::string_view kKnown[] = {"kind", "v1", "v2",
                                                "timeout_ms"};
  reject_unknown_keys(obj, kKnown, "target");

  HttpEndpointTarget target;
  const json* v1 = find_key(obj, "v1");
  const json* v2 = find_key(obj, "v2");
  if (!v1 || !v1->is_object() || !v2 || !v2->is_object()) {
    config_error("http_endpoint target requires v1 and v2 objects");
  }
  static constexpr std::string_view kVersionKeys[] = {"url", "body"};
  reject_unknown_keys(*v1, kVersionKeys, "target.v1");
  reject_unknown_keys(*v2, kVersionKeys, "target.v2");
  target.url_v1 = get_string(*v1, "url", "");
  target.url_v2 = get_string(*v2, "url", "");
  target.body_v1 = get_string(*v1, "body", target.body_v1);
  target.body_v2 = get_string(*v2, "body", target.body_v2);
  target.timeout_ms = get_int64(obj, "timeout_ms", target.timeout_ms);
  return target;
}

TargetSpec parse_target(const json& obj) {
  if (!obj.is_object()) {
    config_error("target must be an object");
  }
  const std::string kind_text = get_string(obj, "kind", "");
  TargetKind kind;
  if (!parse_target_kind(kind_text, kind)) {
    config_error("target.kind must be one of simulated, local_process, "
                 "http_endpoint");
  }
  TargetSpec spec;
  switch (kind) {
    case TargetKind::kSimulated:
      spec.target = parse_simulated_target(obj);
      break;
    case TargetKind::kLocalProcess:
      spec.target = parse_local_process_target(obj);
      break;
    case TargetKind::kHttpEndpoint:
      spec.target = parse_http_target(obj);
      break;
  }
  return spec;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (experiment_id.empty() ||
      experiment_id.find_first_of(",\r\n") != std::string::npos) {
    throw ConfigError(
        "experiment_id must be non-empty and free of commas and newlines");
  }
  if (instance_count < 1) {
    throw ConfigError("instance_count must be >= 1");
  }
  if (calls_per_instance < 1) {
    throw ConfigError("calls_per_instance must be >= 1");
  }
  if (iterations_per_call < 1) {
    throw ConfigError("iterations_per_call must be >= 1");
  }
  if (!(confidence_level > 0.0) || !(confidence_level < 1.0)) {
    throw ConfigError("confidence_level must be strictly between 0 and 1");
  }
  if (bootstrap_replicates < 1) {
    throw ConfigError("bootstrap_replicates must be >= 1");
  }
  if (!(fail_threshold_pct >= 0.0) || !std::isfinite(fail_threshold_pct)) {
    throw ConfigError("fail_threshold_pct must be >= 0");
  }
  switch (target.kind()) {
    case TargetKind::kSimulated:
      target.simulated().workload.validate();
      target.simulated().platform.validate();
      break;
    case TargetKind::kLocalProcess: {
      const auto& t = target.local_process();
      if (t.command_v1.empty() || t.command_v2.empty()) {
        throw ConfigError("target commands must be non-empty");
      }
      if (t.timeout_ms < 1) {
        throw ConfigError("timeout_ms must be >= 1");
      }
      break;
    }
    case TargetKind::kHttpEndpoint: {
      const auto& t = target.http_endpoint();
      if (t.url_v1.empty() || t.url_v2.empty()) {
        throw ConfigError("target urls must be non-empty");
      }
      if (t.timeout_ms < 1) {
        throw ConfigError("timeout_ms must be >= 1");
      }
      break;
    }
  }
}

Mode Dataset::mode() const {
  if (config) {
    return config->mode;
  }
  if (records.empty()) {
    throw std::invalid_argument("dataset has no config and no records");
  }
  return records.front().mode;
}

std::string Dataset::experiment_id() const {
  if (config) {
    return config->experiment_id;
  }
  if (records.empty()) {
    throw std::invalid_argument("dataset has no config and no records");
  }
  return records.front().experiment_id;
}

ValidationReport validate_dataset(const Dataset& dataset) {
  ValidationReport report;
  report.record_count = static_cast<std::int64_t>(dataset.records.size());
  if (dataset.records.empty() && !dataset.config) {
    return report;
  }

  const Mode mode = dataset.mode();
  const std::string id = dataset.experiment_id();

  for (std::size_t n = 0; n < dataset.records.size(); ++n) {
    const MeasurementRecord& rec = dataset.records[n];
    const std::string where = "record " + std::to_string(n) + " (instance " +
                              std::to_string(rec.instance_id) + ", call " +
                              std::to_string(rec.call_index) + ", iteration " +
                              std::to_string(rec.iteration_index) + "): ";
    if (rec.end_ns < rec.start_ns) {
      report.violations.push_back({n, where + "end_ns < start_ns"});
    } else if (rec.duration_ns != rec.end_ns - rec.start_ns) {
      report.violations.push_back({n, where + "duration_ns != end_ns - start_ns"});
    }
    if (rec.instance_id < 0 || rec.call_index < 0 || rec.iteration_index < 0) {
      report.violations.push_back({n, where + "negative coordinate"});
    }
    if (rec.mode != mode) {
      report.violations.push_back({n, where + "mode differs from the dataset's"});
    }
    if (rec.experiment_id != id) {
      report.violations.push_back(
          {n, where + "experiment_id differs from the dataset's"});
    }
    if (mode == Mode::kV1Only && rec.version != Version::kV1) {
      report.violations.push_back({n, where + "v2 record in a v1_only dataset"});
    }
    if (mode == Mode::kV2Only && rec.version != Version::kV2) {
      report.violations.push_back({n, where + "v1 record in a v2_only dataset"});
    }
    if (dataset.config) {
      if (rec.instance_id >= dataset.config->instance_count) {
        report.violations.push_back({n, where + "instance_id >= instance_count"});
      }
      if (rec.call_index >= dataset.config->calls_per_instance) {
        report.violations.push_back(
            {n, where + "call_index >= calls_per_instance"});
      }
      if (rec.iteration_index >= dataset.config->iterations_per_call) {
        report.violations.push_back(
            {n, where + "iteration_index >= iterations_per_call"});
      }
    }
  }

  if (mode == Mode::kRmit) {
    const auto buckets = bucket_records(dataset);
    for (const auto& [key, bucket] : buckets) {
      const std::string where = "key (instance " +
                                std::to_string(key.instance_id) + ", call " +
                                std::to_string(key.call_index) +
                                ", iteration " +
                                std::to_string(key.iteration_index) + "): ";
      if (bucket.ok_v1 > 1 || bucket.ok_v2 > 1) {
        report.violations.push_back(
            {ValidationIssue::npos, where + "duplicate ok records"});
      }
      if (bucket_complete(bucket)) {
        ++report.complete_pairs;
      } else {
        ++report.dropped_keys;
      }
    }
  }

  return report;
}

std::vector<MeasurementPair> pair_records(const Dataset& dataset) {
  if (dataset.mode() != Mode::kRmit) {
    throw std::invalid_argument("pairing requires an rmit-mode dataset");
  }
  std::vector<MeasurementPair> pairs;
  for (const auto& [key, bucket] : bucket_records(dataset)) {
    if (!bucket_complete(bucket)) {
      continue;
    }
    MeasurementPair pair;
    pair.instance_id = key.instance_id;
    pair.call_index = key.call_index;
    pair.iteration_index = key.iteration_index;
    pair.first_version = bucket.first_version;
    pair.v1_duration_ns = bucket.v1_duration_ns;
    pair.v2_duration_ns = bucket.v2_duration_ns;
    pairs.push_back(pair);
  }
  return pairs;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << kCsvHeader << '\n';
  for (const auto& rec : dataset.records) {
    out << rec.experiment_id << ',' << to_string(rec.mode) << ','
        << rec.instance_id << ',' << rec.call_index << ','
        << rec.iteration_index << ','
        << (rec.version == Version::kV1 ? '1' : '2') << ','
        << to_string(rec.position) << ',' << rec.start_ns << ','
        << rec.end_ns << ',' << rec.duration_ns << ','
        << to_string(rec.status) << '\n';
  }
  if (!out.flush()) {
    throw IoError("write failed: " + path.string());
  }
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("line 1: missing header");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  {
    const auto header_fields = split_csv_line(line);
    if (header_fields.size() != kCsvColumnCount) {
      csv_error(1, "expected " + std::to_string(kCsvColumnCount) +
                       " header columns, found " +
                       std::to_string(header_fields.size()));
    }
    for (std::size_t n = 0; n < kCsvColumnCount; ++n) {
      if (header_fields[n] != kCsvColumns[n]) {
        csv_error(1, std::string("expected column '") + kCsvColumns[n] +
                         "', found '" + std::string(header_fields[n]) + "'");
      }
    }
  }

  Dataset dataset;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != kCsvColumnCount) {
      csv_error(line_no, "expected " + std::to_string(kCsvColumnCount) +
                             " fields, found " +
                             std::to_string(fields.size()));
    }

    MeasurementRecord rec;
    rec.experiment_id = std::string(fields[0]);
    if (!parse_mode(fields[1], rec.mode)) {
      csv_error(line_no, "column 'mode' has unknown value '" +
                             std::string(fields[1]) + "'");
    }
    rec.instance_id = parse_csv_int<int>(fields[2], "instance_id", line_no);
    rec.call_index = parse_csv_int<int>(fields[3], "call_index", line_no);
    rec.iteration_index =
        parse_csv_int<int>(fields[4], "iteration_index", line_no);
    if (fields[5] == "1") {
      rec.version = Version::kV1;
    } else if (fields[5] == "2") {
      rec.version = Version::kV2;
    } else {
      csv_error(line_no, "column 'version' must be 1 or 2, found '" +
                             std::string(fields[5]) + "'");
    }
    if (!parse_position(fields[6], rec.position)) {
      csv_error(line_no, "column 'position' has unknown value '" +
                             std::string(fields[6]) + "'");
    }
    rec.start_ns = parse_csv_int<std::int64_t>(fields[7], "start_ns", line_no);
    rec.end_ns = parse_csv_int<std::int64_t>(fields[8], "end_ns", line_no);
    rec.duration_ns =
        parse_csv_int<std::int64_t>(fields[9], "duration_ns", line_no);
    if (!parse_run_status(fields[10], rec.status)) {
      csv_error(line_no, "column 'status' has unknown value '" +
                             std::string(fields[10]) + "'");
    }
    dataset.records.push_back(std::move(rec));
  }
  return dataset;
}

std::string validation_report_to_json(const ValidationReport& report) {
  ordered_json doc;
  doc["ok"] = report.ok();
  doc["record_count"] = report.record_count;
  doc["complete_pairs"] = report.complete_pairs;
  doc["dropped_keys"] = report.dropped_keys;
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json item;
    if (v.record_index == ValidationIssue::npos) {
      item["record_index"] = nullptr;
    } else {
      item["record_index"] = v.record_index;
    }
    item["message"] = v.message;
    violations.push_back(std::move(item));
  }
  doc["violations"] = std::move(violations);
  return doc.dump(2);
}

ExperimentConfig parse_experiment_config(
    const std::string& json_text,
    std::span<const std::string_view> extra_allowed) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("config document must be a JSON object");
  }

  static constexpr std::string_view kKnown[] = {
      "experiment_id",       "mode",
      "instance_count",      "calls_per_instance",
      "iterations_per_call", "confidence_level",
      "bootstrap_replicates", "master_seed",
      "fail_threshold_pct",  "target",
  };
  for (const auto& item : doc.items()) {
    const bool known =
        std::find(std::begin(kKnown), std::end(kKnown), item.key()) !=
            std::end(kKnown) ||
        std::find(extra_allowed.begin(), extra_allowed.end(), item.key()) !=
            extra_allowed.end();
    if (!known) {
      config_error("unknown config key '" + item.key() + "'");
    }
  }

  ExperimentConfig config;
  config.experiment_id =
      get_string(doc, "experiment_id", config.experiment_id);
  const std::string mode_text =
      get_string(doc, "mode", std::string(to_string(config.mode)));
  if (!parse_mode(mode_text, config.mode)) {
    config_error("mode must be one of rmit, v1_only, v2_only");
  }
  config.instance_count = get_int(doc, "instance_count", config.instance_count);
  config.calls_per_instance =
      get_int(doc, "calls_per_instance", config.calls_per_instance);
  config.iterations_per_call =
      get_int(doc, "iterations_per_call", config.iterations_per_call);
  config.confidence_level =
      get_real(doc, "confidence_level", config.confidence_level);
  config.bootstrap_replicates =
      get_int(doc, "bootstrap_replicates", config.bootstrap_replicates);
  config.master_seed = get_uint64(doc, "master_seed", config.master_seed);
  config.fail_threshold_pct =
      get_real(doc, "fail_threshold_pct", config.fail_threshold_pct);
  if (const json* target = find_key(doc, "target")) {
    config.target = parse_target(*target);
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

}  // namespace rmitbench
