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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "core/errors.hpp"

namespace rmitbench {
namespace {

namespace fs = std::filesystem;

constexpr const char* kHeader =
    "experiment_id,mode,instance_id,call_index,iteration_index,version,"
    "position,start_ns,end_ns,duration_ns,status";

fs::path temp_file(const std::string& name) {
  return fs::path(::testing::TempDir()) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

MeasurementRecord make_record(int instance, int call, int iteration,
                              Version version, Position position,
                              std::int64_t start, std::int64_t duration,
                              RunStatus status = RunStatus::kOk) {
  MeasurementRecord rec;
  rec.experiment_id = "demo";
  rec.mode = Mode::kRmit;
  rec.instance_id = instance;
  rec.call_index = call;
  rec.iteration_index = iteration;
  rec.version = version;
  rec.position = position;
  rec.start_ns = start;
  rec.end_ns = start + duration;
  rec.duration_ns = duration;
  rec.status = status;
  return rec;
}

// K=2, C=2, i=1: four complete pairs, v1 first everywhere.
Dataset clean_rmit_dataset() {
  Dataset dataset;
  std::int64_t clock = 0;
  for (int k = 0; k < 2; ++k) {
    for (int c = 0; c < 2; ++c) {
      dataset.records.push_back(make_record(k, c, 0, Version::kV1,
                                            Position::kFirst, clock, 100));
      clock += 100;
      dataset.records.push_back(make_record(k, c, 0, Version::kV2,
                                            Position::kSecond, clock, 105));
      clock += 105;
    }
  }
  return dataset;
}

TEST(ExperimentConfigTest, DefaultsAreValid) {
  EXPECT_NO_THROW(ExperimentConfig{}.validate());
}

TEST(ExperimentConfigTest, ValidateNamesTheField) {
  const auto expect_mentions = [](ExperimentConfig config,
                                  const std::string& field) {
    try {
      config.validate();
      FAIL() << "expected ConfigError for " << field;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos)
          << e.what();
    }
  };

  ExperimentConfig config;
  config.instance_count = 0;
  expect_mentions(config, "instance_count");

  config = ExperimentConfig{};
  config.calls_per_instance = -1;
  expect_mentions(config, "calls_per_instance");

  config = ExperimentConfig{};
  config.iterations_per_call = 0;
  expect_mentions(config, "iterations_per_call");

  config = ExperimentConfig{};
  config.confidence_level = 1.0;
  expect_mentions(config, "confidence_level");

  config = ExperimentConfig{};
  config.confidence_level = 0.0;
  expect_mentions(config, "confidence_level");

  config = ExperimentConfig{};
  config.bootstrap_replicates = 0;
  expect_mentions(config, "bootstrap_replicates");

  config = ExperimentConfig{};
  config.fail_threshold_pct = -0.5;
  expect_mentions(config, "fail_threshold_pct");

  config = ExperimentConfig{};
  config.experiment_id = "";
  expect_mentions(config, "experiment_id");

  config = ExperimentConfig{};
  config.experiment_id = "has,comma";
  expect_mentions(config, "experiment_id");
}

TEST(ExperimentConfigTest, PlannedPairs) {
  ExperimentConfig config;
  config.instance_count = 5;
  config.calls_per_instance = 10;
  config.iterations_per_call = 3;
  EXPECT_EQ(config.planned_pairs(), 150);
}

TEST(ParseConfigTest, EmptyObjectYieldsDefaults) {
  const ExperimentConfig config = parse_experiment_config("{}");
  EXPECT_EQ(config.experiment_id, "experiment");
  EXPECT_EQ(config.mode, Mode::kRmit);
  EXPECT_EQ(config.instance_count, 1);
  EXPECT_EQ(config.bootstrap_replicates, 10'000);
  EXPECT_DOUBLE_EQ(config.confidence_level, 0.99);
  EXPECT_EQ(config.target.kind(), TargetKind::kSimulated);
  EXPECT_FALSE(config.target.simulated().platform_seed_set);
}

TEST(ParseConfigTest, ParsesEveryField) {
  const std::string text = R"({
    "experiment_id": "demo",
    "mode": "rmit",
    "instance_count": 5,
    "calls_per_instance": 10,
    "iterations_per_call": 3,
    "confidence_level": 0.95,
    "bootstrap_replicates": 2000,
    "master_seed": 42,
    "fail_threshold_pct": 1.5,
    "target": {
      "kind": "simulated",
      "v1": {"values": 5000000},
      "v2": {"values": 5250000},
      "ms_per_mega_value": 20.0,
      "platform": {
        "sigma_instance": 0.05,
        "sigma_invocation": 0.01,
        "drift_step_sigma": 0.005,
        "cold_start_ms": 200.0,
        "seed": 7
      }
    }
  })";
  const ExperimentConfig config = parse_experiment_config(text);
  EXPECT_EQ(config.experiment_id, "demo");
  EXPECT_EQ(config.instance_count, 5);
  EXPECT_EQ(config.calls_per_instance, 10);
  EXPECT_EQ(config.iterations_per_call, 3);
  EXPECT_DOUBLE_EQ(config.confidence_level, 0.95);
  EXPECT_EQ(config.bootstrap_replicates, 2000);
  EXPECT_EQ(config.master_seed, 42u);
  EXPECT_DOUBLE_EQ(config.fail_threshold_pct, 1.5);
  const SimulatedTarget& target = config.target.simulated();
  EXPECT_EQ(target.workload.values_v1, 5'000'000);
  EXPECT_EQ(target.workload.values_v2, 5'250'000);
  EXPECT_DOUBLE_EQ(target.workload.ms_per_mega_value, 20.0);
  EXPECT_DOUBLE_EQ(target.platform.sigma_instance, 0.05);
  EXPECT_DOUBLE_EQ(target.platform.cold_start_ms, 200.0);
  EXPECT_EQ(target.platform.seed, 7u);
  EXPECT_TRUE(target.platform_seed_set);
}

TEST(ParseConfigTest, ParsesModes) {
  EXPECT_EQ(parse_experiment_config(R"({"mode": "v1_only"})").mode,
            Mode::kV1Only);
  EXPECT_EQ(parse_experiment_config(R"({"mode": "v2_only"})").mode,
            Mode::kV2Only);
  EXPECT_THROW(parse_experiment_config(R"({"mode": "both"})"), ConfigError);
}

TEST(ParseConfigTest, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_experiment_config("{not json"), ParseError);
  EXPECT_THROW(parse_experiment_config("[1, 2]"), ParseError);
  EXPECT_THROW(parse_experiment_config(R"({"instance_count": "five"})"),
               ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"confidence_level": "high"})"),
               ConfigError);
}

TEST(ParseConfigTest, RejectsUnknownKeysByName) {
  try {
    parse_experiment_config(R"({"instances": 5})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("instances"), std::string::npos);
  }
  EXPECT_THROW(
      parse_experiment_config(R"({"target": {"kind": "simulated", "z": 1}})"),
      ConfigError);
  EXPECT_THROW(parse_experiment_config(
                   R"({"target": {"kind": "simulated",
                       "platform": {"sigma": 0.1}}})"),
               ConfigError);
}

TEST(ParseConfigTest, RejectsInvalidParsedValues) {
  EXPECT_THROW(parse_experiment_config(R"({"instance_count": 0})"),
               ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"confidence_level": 1.0})"),
               ConfigError);
}

TEST(ParseConfigTest, LocalProcessTarget) {
  const std::string text = R"({
    "target": {
      "kind": "local_process",
      "v1": {"command": ["./work", "100"]},
      "v2": {"command": ["./work", "105"]},
      "timeout_ms": 5000
    }
  })";
  const ExperimentConfig config = parse_experiment_config(text);
  ASSERT_EQ(config.target.kind(), TargetKind::kLocalProcess);
  const LocalProcessTarget& target = config.target.local_process();
  EXPECT_EQ(target.command_v1, (std::vector<std::string>{"./work", "100"}));
  EXPECT_EQ(target.command_v2, (std::vector<std::string>{"./work", "105"}));
  EXPECT_EQ(target.timeout_ms, 5000);

  EXPECT_THROW(parse_experiment_config(
                   R"({"target": {"kind": "local_process",
                       "v1": {"command": ["./work"]}}})"),
               ConfigError);
  EXPECT_THROW(parse_experiment_config(
                   R"({"target": {"kind": "local_process",
                       "v1": {"command": []}, "v2": {"command": []}}})"),
               ConfigError);
}

TEST(ParseConfigTest, HttpEndpointTarget) {
  const std::string text = R"({
    "target": {
      "kind": "http_endpoint",
      "v1": {"url": "http://localhost:8080/v1", "body": "{\"n\": 1}"},
      "v2": {"url": "http://localhost:8080/v2"}
    }
  })";
  const ExperimentConfig config = parse_experiment_config(text);
  ASSERT_EQ(config.target.kind(), TargetKind::kHttpEndpoint);
  const HttpEndpointTarget& target = config.target.http_endpoint();
  EXPECT_EQ(target.url_v1, "http://localhost:8080/v1");
  EXPECT_EQ(target.body_v1, "{\"n\": 1}");
  EXPECT_EQ(target.body_v2, "{}");
  EXPECT_EQ(target.timeout_ms, 60'000);
}

TEST(ParseConfigTest, RejectsUnknownTargetKind) {
  try {
    parse_experiment_config(R"({"target": {"kind": "lambda"}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("simulated"), std::string::npos);
  }
}

TEST(ParseConfigTest, LoadFromMissingFileThrowsIo) {
  EXPECT_THROW(load_experiment_config(temp_file("no_such_config.json")),
               IoError);
}

TEST(ParseConfigTest, LoadFromFile) {
  const fs::path path = temp_file("config_load.json");
  write_text(path, R"({"experiment_id": "from_file", "master_seed": 9})");
  const ExperimentConfig config = load_experiment_config(path);
  EXPECT_EQ(config.experiment_id, "from_file");
  EXPECT_EQ(config.master_seed, 9u);
}

TEST(DatasetTest, ModeAndIdComeFromConfigThenRecords) {
  Dataset dataset = clean_rmit_dataset();
  EXPECT_EQ(dataset.mode(), Mode::kRmit);
  EXPECT_EQ(dataset.experiment_id(), "demo");

  ExperimentConfig config;
  config.experiment_id = "configured";
  config.mode = Mode::kV1Only;
  dataset.config = config;
  EXPECT_EQ(dataset.mode(), Mode::kV1Only);
  EXPECT_EQ(dataset.experiment_id(), "configured");

  EXPECT_THROW(Dataset{}.mode(), std::invalid_argument);
  EXPECT_THROW(Dataset{}.experiment_id(), std::invalid_argument);
}

TEST(CsvTest, RoundTripPreservesRecords) {
  Dataset dataset = clean_rmit_dataset();
  dataset.records.push_back(make_record(1, 1, 0, Version::kV2,
                                        Position::kFirst, 900, 50,
                                        RunStatus::kError));
  const fs::path path = temp_file("round_trip.csv");
  write_dataset(dataset, path);
  const Dataset loaded = read_dataset(path);
  EXPECT_EQ(loaded.records, dataset.records);
  EXPECT_FALSE(loaded.config.has_value());
}

TEST(CsvTest, WritesExactHeaderAndLfEndings) {
  const fs::path path = temp_file("header.csv");
  write_dataset(clean_rmit_dataset(), path);
  const std::string bytes = read_bytes(path);
  EXPECT_EQ(bytes.substr(0, std::string(kHeader).size()), kHeader);
  EXPECT_EQ(bytes.find('\r'), std::string::npos);
  EXPECT_EQ(bytes.back(), '\n');
}

TEST(CsvTest, HeaderOnlyFileIsAnEmptyDataset) {
  const fs::path path = temp_file("header_only.csv");
  write_text(path, std::string(kHeader) + "\n");
  EXPECT_TRUE(read_dataset(path).records.empty());
}

TEST(CsvTest, ToleratesCrlfEndings) {
  const fs::path path = temp_file("crlf.csv");
  write_text(path, std::string(kHeader) +
                       "\r\ndemo,rmit,0,0,0,1,first,0,100,100,ok\r\n");
  const Dataset dataset = read_dataset(path);
  ASSERT_EQ(dataset.records.size(), 1u);
  EXPECT_EQ(dataset.records[0].duration_ns, 100);
}

TEST(CsvTest, MissingFileThrowsIo) {
  EXPECT_THROW(read_dataset(temp_file("no_such.csv")), IoError);
}

TEST(CsvTest, EmptyFileThrowsParse) {
  const fs::path path = temp_file("empty.csv");
  write_text(path, "");
  EXPECT_THROW(read_dataset(path), ParseError);
}

TEST(CsvTest, RenamedHeaderColumnIsNamedInError) {
  const fs::path path = temp_file("bad_header.csv");
  std::string header(kHeader);
  header.replace(header.find("duration_ns"), 11, "elapsed_nsx");
  write_text(path, header + "\n");
  try {
    read_dataset(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("duration_ns"), std::string::npos) << what;
    EXPECT_NE(what.find("elapsed_nsx"), std::string::npos) << what;
  }
}

TEST(CsvTest, BadFieldsReportLineAndColumn) {
  const auto expect_parse_error = [](const std::string& row,
                                     const std::string& needle) {
    const fs::path path = temp_file("bad_field.csv");
    write_text(path, std::string(kHeader) + "\n" + row + "\n");
    try {
      read_dataset(path);
      FAIL() << "expected ParseError for: " << row;
    } catch (const ParseError& e) {
      const std::string what = e.what();
      EXPECT_NE(what.find("line 2"), std::string::npos) << what;
      EXPECT_NE(what.find(needle), std::string::npos) << what;
    }
  };
  expect_parse_error("demo,rmit,zero,0,0,1,first,0,100,100,ok", "instance_id");
  expect_parse_error("demo,rmit,0,0,0,3,first,0,100,100,ok", "version");
  expect_parse_error("demo,rmit,0,0,0,1,middle,0,100,100,ok", "position");
  expect_parse_error("demo,rmit,0,0,0,1,first,0,100,100,fine", "status");
  expect_parse_error("demo,walk,0,0,0,1,first,0,100,100,ok", "mode");
  expect_parse_error("demo,rmit,0,0,0,1,first,0,100,100", "10");
}

TEST(ValidateTest, CleanDatasetPasses) {
  const ValidationReport report = validate_dataset(clean_rmit_dataset());
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.record_count, 8);
  EXPECT_EQ(report.complete_pairs, 4);
  EXPECT_EQ(report.dropped_keys, 0);
}

TEST(ValidateTest, EmptyDatasetPasses) {
  const ValidationReport report = validate_dataset(Dataset{});
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.record_count, 0);
}

TEST(ValidateTest, FlagsTimestampViolations) {
  Dataset dataset = clean_rmit_dataset();
  dataset.records[2].end_ns = dataset.records[2].start_ns - 1;
  ValidationReport report = validate_dataset(dataset);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].record_index, 2u);
  EXPECT_NE(report.violations[0].message.find("end_ns < start_ns"),
            std::string::npos);

  dataset = clean_rmit_dataset();
  dataset.records[3].duration_ns += 1;
  report = validate_dataset(dataset);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_NE(report.violations[0].message.find("duration_ns"),
            std::string::npos);
}

TEST(ValidateTest, FlagsIdentityMismatches) {
  Dataset dataset = clean_rmit_dataset();
  dataset.records[1].experiment_id = "other";
  EXPECT_FALSE(validate_dataset(dataset).ok());

  dataset = clean_rmit_dataset();
  dataset.records[0].instance_id = -1;
  EXPECT_FALSE(validate_dataset(dataset).ok());

  // A config overrides the dataset identity, so every record now mismatches.
  dataset = clean_rmit_dataset();
  ExperimentConfig config;
  config.experiment_id = "configured";
  config.mode = Mode::kV1Only;
  dataset.config = config;
  const ValidationReport report = validate_dataset(dataset);
  EXPECT_GE(report.violations.size(), dataset.records.size());
}

TEST(ValidateTest, FlagsRecordsOutsideConfigBounds) {
  Dataset dataset = clean_rmit_dataset();
  ExperimentConfig config;
  config.experiment_id = "demo";
  config.instance_count = 2;
  config.calls_per_instance = 2;
  config.iterations_per_call = 1;
  dataset.config = config;
  EXPECT_TRUE(validate_dataset(dataset).ok());

  dataset.records[0].instance_id = 2;
  const ValidationReport report = validate_dataset(dataset);
  bool found = false;
  for (const auto& v : report.violations) {
    found = found ||
            v.message.find("instance_id >= instance_count") !=
                std::string::npos;
  }
  EXPECT_TRUE(found);
}

TEST(ValidateTest, WrongVersionForSingleVersionMode) {
  Dataset dataset;
  MeasurementRecord rec = make_record(0, 0, 0, Version::kV2, Position::kFirst,
                                      0, 100);
  rec.mode = Mode::kV1Only;
  dataset.records.push_back(rec);
  const ValidationReport report = validate_dataset(dataset);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_NE(report.violations[0].message.find("v1_only"), std::string::npos);
}

TEST(ValidateTest, MissingSideIsDroppedNotViolation) {
  Dataset dataset = clean_rmit_dataset();
  dataset.records.pop_back();  // drop one v2 record
  const ValidationReport report = validate_dataset(dataset);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.complete_pairs, 3);
  EXPECT_EQ(report.dropped_keys, 1);
}

TEST(ValidateTest, DuplicateOkRecordsAreViolations) {
  Dataset dataset = clean_rmit_dataset();
  dataset.records.push_back(dataset.records[0]);
  const ValidationReport report = validate_dataset(dataset);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].record_index, ValidationIssue::npos);
  EXPECT_NE(report.violations[0].message.find("duplicate"), std::string::npos);
}

TEST(ValidateTest, ReportJsonHasStableKeys) {
  Dataset dataset = clean_rmit_dataset();
  dataset.records[0].duration_ns += 1;
  const std::string text = validation_report_to_json(validate_dataset(dataset));
  EXPECT_NE(text.find("\"ok\": false"), std::string::npos);
  EXPECT_NE(text.find("\"record_count\": 8"), std::string::npos);
  EXPECT_NE(text.find("\"violations\""), std::string::npos);
  EXPECT_NE(text.find("\"complete_pairs\""), std::string::npos);
}

TEST(PairTest, PairsCompleteKeysSorted) {
  Dataset dataset = clean_rmit_dataset();
  const std::vector<MeasurementPair> pairs = pair_records(dataset);
  ASSERT_EQ(pairs.size(), 4u);
  EXPECT_EQ(pairs[0].instance_id, 0);
  EXPECT_EQ(pairs[0].call_index, 0);
  EXPECT_EQ(pairs[3].instance_id, 1);
  EXPECT_EQ(pairs[3].call_index, 1);
  for (const auto& pair : pairs) {
    EXPECT_EQ(pair.v1_duration_ns, 100);
    EXPECT_EQ(pair.v2_duration_ns, 105);
    EXPECT_EQ(pair.first_version, Version::kV1);
  }
}

TEST(PairTest, TracksWhichVersionRanFirst) {
  Dataset dataset;
  dataset.records.push_back(
      make_record(0, 0, 0, Version::kV2, Position::kFirst, 0, 105));
  dataset.records.push_back(
      make_record(0, 0, 0, Version::kV1, Position::kSecond, 105, 100));
  const auto pairs = pair_records(dataset);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].first_version, Version::kV2);
  EXPECT_EQ(pairs[0].v1_duration_ns, 100);
  EXPECT_EQ(pairs[0].v2_duration_ns, 105);
}

TEST(PairTest, ErrorStatusDropsTheWholeKey) {
  Dataset dataset = clean_rmit_dataset();
  dataset.records[0].status = RunStatus::kError;
  const auto pairs = pair_records(dataset);
  EXPECT_EQ(pairs.size(), 3u);
  for (const auto& pair : pairs) {
    EXPECT_FALSE(pair.instance_id == 0 && pair.call_index == 0);
  }
}

TEST(PairTest, NonRmitDatasetThrows) {
  Dataset dataset;
  MeasurementRecord rec = make_record(0, 0, 0, Version::kV1, Position::kFirst,
                                      0, 100);
  rec.mode = Mode::kV1Only;
  dataset.records.push_back(rec);
  EXPECT_THROW(pair_records(dataset), std::invalid_argument);
}

}  // namespace
}  // namespace rmitbench
