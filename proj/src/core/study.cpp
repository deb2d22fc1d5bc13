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

#include "core/study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"

namespace rmitbench {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kReportHeader =
    "label,mode,K,C,i,injected_pct,median_pct,ci_low,ci_high,ci_width";

std::string cell_label(const GridCell& cell) {
  return "K" + std::to_string(cell.instance_count) + "_C" +
         std::to_string(cell.calls_per_instance) + "_inj" +
         double_to_string(cell.regression_pct);
}

StudyRow make_row(const GridCell& cell, const ExperimentConfig& config,
                  std::string_view mode, const ChangeEstimate& estimate) {
  StudyRow row;
  row.label = cell_label(cell);
  row.mode = std::string(mode);
  row.instance_count = cell.instance_count;
  row.calls_per_instance = cell.calls_per_instance;
  row.iterations_per_call = config.iterations_per_call;
  row.injected_pct = cell.regression_pct;
  row.median_pct = estimate.median_change_pct;
  row.ci_low = estimate.ci_low_pct;
  row.ci_high = estimate.ci_high_pct;
  row.ci_width = estimate.ci_high_pct - estimate.ci_low_pct;
  return row;
}

ordered_json row_to_json(const StudyRow& row) {
  ordered_json doc;
  doc["label"] = row.label;
  doc["mode"] = row.mode;
  doc["K"] = row.instance_count;
  doc["C"] = row.calls_per_instance;
  doc["i"] = row.iterations_per_call;
  doc["injected_pct"] = row.injected_pct;
  doc["median_pct"] = row.median_pct;
  doc["ci_low"] = row.ci_low;
  doc["ci_high"] = row.ci_high;
  doc["ci_width"] = row.ci_width;
  return doc;
}

template <typename Number>
Number parse_report_number(std::string_view field, const char* column,
                           std::size_t line_no) {
  Number value{};
  const auto res =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": column '" +
                     column + "' is not a valid number: '" +
                     std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_line(std::string_view line) {
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

StudyReport report_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
    throw ParseError("report document must be an object with a rows array");
  }

  StudyReport report;
  if (doc.contains("master_seed") && doc["master_seed"].is_number()) {
    report.master_seed = doc["master_seed"].get<std::uint64_t>();
  }
  if (doc.contains("failed_cells") && doc["failed_cells"].is_array()) {
    for (const auto& item : doc["failed_cells"]) {
      if (item.is_string()) {
        report.failed_cells.push_back(item.get<std::string>());
      }
    }
  }
  for (const auto& item : doc["rows"]) {
    if (!item.is_object()) {
      throw ParseError("report rows must be objects");
    }
    try {
      StudyRow row;
      row.label = item.at("label").get<std::string>();
      row.mode = item.at("mode").get<std::string>();
      row.instance_count = item.at("K").get<int>();
      row.calls_per_instance = item.at("C").get<int>();
      row.iterations_per_call = item.at("i").get<int>();
      row.injected_pct = item.at("injected_pct").get<double>();
      row.median_pct = item.at("median_pct").get<double>();
      row.ci_low = item.at("ci_low").get<double>();
      row.ci_high = item.at("ci_high").get<double>();
      row.ci_width = item.at("ci_width").get<double>();
      report.rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed report row: ") + e.what());
    }
  }
  return report;
}

StudyReport report_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("line 1: missing header");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != kReportHeader) {
    throw ParseError("line 1: expected header '" + std::string(kReportHeader) +
                     "'");
  }

  StudyReport report;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split_line(line);
    if (fields.size() != 10) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 10 fields, found " +
                       std::to_string(fields.size()));
    }
    StudyRow row;
    row.label = std::string(fields[0]);
    row.mode = std::string(fields[1]);
    if (row.mode != "rmit" && row.mode != "traditional") {
      throw ParseError("line " + std::to_string(line_no) +
                       ": column 'mode' has unknown value '" + row.mode + "'");
    }
    row.instance_count = parse_report_number<int>(fields[2], "K", line_no);
    row.calls_per_instance = parse_report_number<int>(fields[3], "C", line_no);
    row.iterations_per_call = parse_report_number<int>(fields[4], "i", line_no);
    row.injected_pct =
        parse_report_number<double>(fields[5], "injected_pct", line_no);
    row.median_pct =
        parse_report_number<double>(fields[6], "median_pct", line_no);
    row.ci_low = parse_report_number<double>(fields[7], "ci_low", line_no);
    row.ci_high = parse_report_number<double>(fields[8], "ci_high", line_no);
    row.ci_width = parse_report_number<double>(fields[9], "ci_width", line_no);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_cell_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

}  // namespace

StudyConfig parse_study_config(const std::string& json_text) {
  static constexpr std::string_view kExtraKeys[] = {"grid"};
  StudyConfig config;
  config.base = parse_experiment_config(json_text, kExtraKeys);

  const json doc = json::parse(json_text);  // revalidated above
  if (!doc.contains("grid")) {
    throw ConfigError("study config requires a grid array");
  }
  const json& grid = doc["grid"];
  if (!grid.is_array() || grid.empty()) {
    throw ConfigError("grid must be a non-empty array");
  }
  for (const auto& item : grid) {
    if (!item.is_object()) {
      throw ConfigError("grid cells must be objects");
    }
    GridCell cell;
    for (const auto& entry : item.items()) {
      if (entry.key() == "K" && entry.value().is_number_integer()) {
        cell.instance_count = entry.value().get<int>();
      } else if (entry.key() == "C" && entry.value().is_number_integer()) {
        cell.calls_per_instance = entry.value().get<int>();
      } else if (entry.key() == "regression_pct" &&
                 entry.value().is_number()) {
        cell.regression_pct = entry.value().get<double>();
      } else {
        throw ConfigError("grid cells accept only integer K, integer C, and "
                          "numeric regression_pct; got key '" + entry.key() +
                          "'");
      }
    }
    if (cell.instance_count < 1 || cell.calls_per_instance < 1) {
      throw ConfigError("grid cell K and C must be >= 1");
    }
    if (cell.regression_pct <= -100.0) {
      throw ConfigError("grid cell regression_pct must be > -100");
    }
    config.grid.push_back(cell);
  }
  return config;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_study_config(buffer.str());
}

StudyReport run_grid(std::span<const GridCell> grid,
                     const ExperimentConfig& base) {
  base.validate();
  if (grid.empty()) {
    throw ConfigError("grid must be non-empty");
  }
  if (base.target.kind() != TargetKind::kSimulated) {
    throw ConfigError("study grids require a simulated target");
  }

  StudyReport report;
  report.master_seed = base.master_seed;
  const std::uint64_t grid_root =
      substream_seed(base.master_seed, stream_tag::kStudyGrid);

  for (std::size_t n = 0; n < grid.size(); ++n) {
    const GridCell& cell = grid[n];

    ExperimentConfig config = base;
    config.mode = Mode::kRmit;
    config.instance_count = cell.instance_count;
    config.calls_per_instance = cell.calls_per_instance;
    config.master_seed = substream_seed(grid_root, n);

    // Inject the cell's change through the v2 workload size; platform
    // streams re-root at the cell seed so cells are independent.
    SimulatedTarget target = base.target.simulated();
    target.platform_seed_set = false;
    target.workload.values_v2 = std::llround(
        static_cast<double>(target.workload.values_v1) *
        (1.0 + cell.regression_pct / 100.0));
    config.target.target = target;

    AnalysisOptions options;
    options.replicates = config.bootstrap_replicates;
    options.confidence_level = config.confidence_level;
    options.fail_threshold_pct = config.fail_threshold_pct;
    options.master_seed = config.master_seed;

    try {
      config.validate();
      const Dataset paired_run = run_experiment(config);
      const ChangeEstimate rmit_estimate = analyze_paired(paired_run, options);
      const auto [v1_run, v2_run] = run_traditional_study(config);
      const ChangeEstimate traditional_estimate =
          analyze_traditional(v1_run, v2_run, options);
      report.rows.push_back(make_row(cell, config, "rmit", rmit_estimate));
      report.rows.push_back(
          make_row(cell, config, "traditional", traditional_estimate));
    } catch (const std::exception& e) {
      report.failed_cells.push_back(cell_label(cell) + ": " + e.what());
    }
  }
  return report;
}

void write_report_csv(const StudyReport& report,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << kReportHeader << '\n';
  for (const StudyRow& row : report.rows) {
    out << row.label << ',' << row.mode << ',' << row.instance_count << ','
        << row.calls_per_instance << ',' << row.iterations_per_call << ','
        << double_to_string(row.injected_pct) << ','
        << double_to_string(row.median_pct) << ','
        << double_to_string(row.ci_low) << ','
        << double_to_string(row.ci_high) << ','
        << double_to_string(row.ci_width) << '\n';
  }
  if (!out.flush()) {
    throw IoError("write failed: " + path.string());
  }
}

std::string report_to_json(const StudyReport& report) {
  ordered_json doc;
  doc["master_seed"] = report.master_seed;
  ordered_json rows = ordered_json::array();
  for (const StudyRow& row : report.rows) {
    rows.push_back(row_to_json(row));
  }
  doc["rows"] = std::move(rows);
  doc["failed_cells"] = report.failed_cells;
  return doc.dump(2);
}

void write_report_json(const StudyReport& report,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << report_to_json(report) << '\n';
  if (!out.flush()) {
    throw IoError("write failed: " + path.string());
  }
}

StudyReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return report_from_json_text(text);
  }
  return report_from_csv_text(text);
}

std::string render_report_table(const StudyReport& report) {
  static constexpr const char* kColumns[] = {
      "label",      "mode",   "K",      "C",       "i",
      "injected_pct", "median_pct", "ci_low", "ci_high", "ci_width"};
  constexpr std::size_t kColumnCount = std::size(kColumns);

  std::vector<std::vector<std::string>> cells;
  cells.reserve(report.rows.size());
  for (const StudyRow& row : report.rows) {
    cells.push_back({row.label, row.mode,
                     std::to_string(row.instance_count),
                     std::to_string(row.calls_per_instance),
                     std::to_string(row.iterations_per_call),
                     format_cell_real(row.injected_pct),
                     format_cell_real(row.median_pct),
                     format_cell_real(row.ci_low),
                     format_cell_real(row.ci_high),
                     format_cell_real(row.ci_width)});
  }

  std::size_t widths[kColumnCount];
  for (std::size_t col = 0; col < kColumnCount; ++col) {
    widths[col] = std::string_view(kColumns[col]).size();
    for (const auto& row : cells) {
      widths[col] = std::max(widths[col], row[col].size());
    }
  }

  // First two columns are text (left-aligned), the rest numeric.
  const auto emit_row = [&](std::string& out,
                            const std::vector<std::string>& row) {
    out += '|';
    for (std::size_t col = 0; col < kColumnCount; ++col) {
      const std::string& value = row[col];
      const std::string pad(widths[col] - value.size(), ' ');
      out += ' ';
      out += col < 2 ? value + pad : pad + value;
      out += " |";
    }
    out += '\n';
  };

  std::string out;
  emit_row(out, std::vector<std::string>(kColumns, kColumns + kColumnCount));
  out += '|';
  for (std::size_t col = 0; col < kColumnCount; ++col) {
    out += ' ';
    out += std::string(widths[col], '-');
    out += " |";
  }
  out += '\n';
  for (const auto& row : cells) {
    emit_row(out, row);
  }
  return out;
}

}  // namespace rmitbench
