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
#include <span>
#include <string>
#include <vector>

#include "core/measurements.hpp"

namespace rmitbench {

// One study-grid cell: a (K, C) load profile with an injected change.
struct GridCell {
  int instance_count = 1;      // K
  int calls_per_instance = 1;  // C
  double regression_pct = 0.0;

  bool operator==(const GridCell&) const = default;
};

// One analyzed (cell, methodology) result.
struct StudyRow {
  std::string label;
  std::string mode;  // "rmit" | "traditional"
  int instance_count = 0;
  int calls_per_instance = 0;
  int iterations_per_call = 0;
  double injected_pct = 0.0;
  double median_pct = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double ci_width = 0.0;

  bool operator==(const StudyRow&) const = default;
};

struct StudyReport {
  std::uint64_t master_seed = 0;
  std::vector<StudyRow> rows;
  std::vector<std::string> failed_cells;  // "label: reason"

  bool operator==(const StudyReport&) const = default;
};

struct StudyConfig {
  ExperimentConfig base;
  std::vector<GridCell> grid;
};

// Study config document: the experiment-config fields plus a "grid" array of
// {"K": int, "C": int, "regression_pct": real} cells. Simulated targets only;
// each cell derives values_v2 from values_v1 and its regression percentage.
StudyConfig parse_study_config(const std::string& json_text);
StudyConfig load_study_config(const std::filesystem::path& path);

// Runs both methodologies for every cell and analyzes each: two rows per
// cell (rmit first). Cells draw independent sub-streams of the master seed,
// and a failing cell is recorded in failed_cells without stopping the rest.
// Throws ConfigError for an empty grid or a non-simulated target.
StudyReport run_grid(std::span<const GridCell> grid, const ExperimentConfig& base);

// Report CSV, exact header:
//   label,mode,K,C,i,injected_pct,median_pct,ci_low,ci_high,ci_width
void write_report_csv(const StudyReport& report, const std::filesystem::path& path);
void write_report_json(const StudyReport& report, const std::filesystem::path& path);
std::string report_to_json(const StudyReport& report);

// Reads a report back from its JSON or CSV form (sniffed from the content).
StudyReport read_report(const std::filesystem::path& path);

// Aligned markdown table of cells x methodologies with CI bounds.
std::string render_report_table(const StudyReport& report);

}  // namespace rmitbench
