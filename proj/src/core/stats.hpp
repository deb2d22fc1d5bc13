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
#include <span>
#include <string>
#include <vector>

#include "core/measurements.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"

namespace rmitbench {

enum class Verdict { kNoChange, kRegression, kImprovement };

std::string_view to_string(Verdict v);

// Median performance change of v2 relative to v1 with percentile-bootstrap
// confidence bounds.
struct ChangeEstimate {
  double median_change_pct = 0.0;
  double ci_low_pct = 0.0;
  double ci_high_pct = 0.0;
  double confidence_level = 0.99;
  bool paired = true;
  std::int64_t n_v1 = 0;  // == n_v2 == pair count in paired form
  std::int64_t n_v2 = 0;
  int replicates_used = 0;
  double fail_threshold_pct = 0.0;
  std::uint64_t seed = 0;  // master seed, for reproduction from the report
  Verdict verdict = Verdict::kNoChange;
};

// Duration pair of one interleaved iteration, in nanoseconds.
struct PairedLeaf {
  double v1 = 0.0;
  double v2 = 0.0;

  bool operator==(const PairedLeaf&) const = default;
};

// Nested duration structure mirroring the experiment hierarchy:
// instances -> calls -> iteration leaves.
struct HierarchicalSample {
  std::vector<std::vector<std::vector<double>>> instances;
};

// Paired form: (v1, v2) leaves travel together through resampling.
struct PairedSample {
  std::vector<std::vector<std::vector<PairedLeaf>>> instances;

  bool operator==(const PairedSample&) const = default;
};

// Median: middle element for odd n, mean of the two middle elements for even
// n. Throws std::invalid_argument on empty input.
double median(std::vector<double> values);

// Percentile with linear interpolation between closest ranks at position
// h = (n-1)*p. Throws std::invalid_argument on empty input or p outside
// [0, 1].
double percentile(std::vector<double> values, double p);

// 100 * (median(v2) - median(v1)) / median(v1). Throws on an empty side or a
// zero v1 median.
double change_statistic(std::span<const double> v1_durations,
                        std::span<const double> v2_durations);

// Resamples with replacement level by level: instances, then calls within
// each drawn instance, then iterations within each drawn call. Shape counts
// follow the drawn parents, so regular samples keep their shape exactly.
PairedSample hierarchical_resample(const PairedSample& sample, SplitMix64& rng);
HierarchicalSample hierarchical_resample(const HierarchicalSample& sample,
                                         SplitMix64& rng);

struct AnalysisOptions {
  int replicates = 10'000;        // B
  double confidence_level = 0.99;
  double fail_threshold_pct = 0.0;
  std::uint64_t master_seed = 0;
};

// Percentile-bootstrap confidence interval of the change statistic. The point
// estimate is the statistic on the original sample; bounds are the
// (1-level)/2 and 1-(1-level)/2 percentiles over `replicates` hierarchical
// resamples. Replicate r draws from the r-th sub-stream of the bootstrap
// stream, so results do not depend on evaluation order. Deterministic for a
// fixed (sample, options). Throws std::invalid_argument for replicates < 100,
// an empty sample, or a confidence level outside (0, 1).
ChangeEstimate bootstrap_ci(const PairedSample& sample,
                            const AnalysisOptions& options);

// Unpaired (traditional) form: the two version hierarchies are resampled
// independently with independent sub-streams.
ChangeEstimate bootstrap_ci(const HierarchicalSample& v1_sample,
                            const HierarchicalSample& v2_sample,
                            const AnalysisOptions& options);

Verdict classify(double ci_low_pct, double ci_high_pct,
                 double fail_threshold_pct);

// Sample builders. Leaves are grouped by instance then call, iteration order
// within each call; only ok records contribute.
PairedSample to_paired_sample(std::span<const MeasurementPair> pairs);
HierarchicalSample to_duration_sample(const Dataset& dataset);

// End-to-end analyses: dataset(s) -> pairs/samples -> bootstrap_ci.
ChangeEstimate analyze_paired(const Dataset& dataset,
                              const AnalysisOptions& options);
ChangeEstimate analyze_traditional(const Dataset& v1_dataset,
                                   const Dataset& v2_dataset,
                                   const AnalysisOptions& options);

// Analysis report document: {median_change_pct, ci_low_pct, ci_high_pct,
// confidence_level, n_pairs | n_v1 + n_v2, replicates, verdict, seed}.
std::string estimate_to_json(const ChangeEstimate& estimate);

}  // namespace rmitbench
