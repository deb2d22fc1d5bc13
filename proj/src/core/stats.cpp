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

#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace rmitbench {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename Leaf>
using Nested = std::vector<std::vector<std::vector<Leaf>>>;

template <typename Leaf>
void require_nonempty(const Nested<Leaf>& instances) {
  if (instances.empty()) {
    throw std::invalid_argument("sample has no instances");
  }
  for (const auto& inst : instances) {
    if (inst.empty()) {
      throw std::invalid_argument("sample has an instance with no calls");
    }
    for (const auto& call : inst) {
      if (call.empty()) {
        throw std::invalid_argument("sample has a call with no iterations");
      }
    }
  }
}

template <typename Leaf>
std::int64_t leaf_count(const Nested<Leaf>& instances) {
  std::int64_t n = 0;
  for (const auto& inst : instances) {
    for (const auto& call : inst) {
      n += static_cast<std::int64_t>(call.size());
    }
  }
  return n;
}

// Depth-first resampling walk shared by the nested and the flat builders, so
// both consume the RNG stream identically. Draw order per output leaf slot:
// instance index, then call index, then iteration index.
template <typename Leaf, typename InstanceFn, typename CallFn, typename LeafFn>
void resample_walk(const Nested<Leaf>& instances, SplitMix64& rng,
                   InstanceFn&& on_instance, CallFn&& on_call,
                   LeafFn&& on_leaf) {
  const std::uint64_t instance_slots = instances.size();
  for (std::uint64_t k = 0; k < instance_slots; ++k) {
    const auto& inst = instances[rng.next_below(instance_slots)];
    const std::uint64_t call_slots = inst.size();
    on_instance(call_slots);
    for (std::uint64_t c = 0; c < call_slots; ++c) {
      const auto& call = inst[rng.next_below(call_slots)];
      const std::uint64_t leaf_slots = call.size();
      on_call(leaf_slots);
      for (std::uint64_t t = 0; t < leaf_slots; ++t) {
        on_leaf(call[rng.next_below(leaf_slots)]);
      }
    }
  }
}

template <typename Leaf>
Nested<Leaf> resample_nested(const Nested<Leaf>& instances, SplitMix64& rng) {
  require_nonempty(instances);
  Nested<Leaf> out;
  out.reserve(instances.size());
  resample_walk(
      instances, rng,
      [&](std::uint64_t calls) {
        out.emplace_back();
        out.back().reserve(calls);
      },
      [&](std::uint64_t leaves) {
        out.back().emplace_back();
        out.back().back().reserve(leaves);
      },
      [&](const Leaf& leaf) { out.back().back().push_back(leaf); });
  return out;
}

double percentile_of_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) {
    return sorted.back();
  }
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void flatten(const PairedSample& sample, std::vector<double>& v1,
             std::vector<double>& v2) {
  for (const auto& inst : sample.instances) {
    for (const auto& call : inst) {
      for (const PairedLeaf& leaf : call) {
        v1.push_back(leaf.v1);
        v2.push_back(leaf.v2);
      }
    }
  }
}

std::vector<double> flatten(const HierarchicalSample& sample) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(leaf_count(sample.instances)));
  for (const auto& inst : sample.instances) {
    for (const auto& call : inst) {
      out.insert(out.end(), call.begin(), call.end());
    }
  }
  return out;
}

void check_options(const AnalysisOptions& options) {
  if (options.replicates < 100) {
    throw std::invalid_argument("replicates must be >= 100");
  }
  if (!(options.confidence_level > 0.0) || !(options.confidence_level < 1.0)) {
    throw std::invalid_argument(
        "confidence_level must be strictly between 0 and 1");
  }
}

ChangeEstimate finish_estimate(double point, std::vector<double> replicate_stats,
                               const AnalysisOptions& options) {
  std::sort(replicate_stats.begin(), replicate_stats.end());
  const double tail = (1.0 - options.confidence_level) / 2.0;

  ChangeEstimate estimate;
  estimate.median_change_pct = point;
  estimate.ci_low_pct = percentile_of_sorted(replicate_stats, tail);
  estimate.ci_high_pct = percentile_of_sorted(replicate_stats, 1.0 - tail);
  estimate.confidence_level = options.confidence_level;
  estimate.replicates_used = static_cast<int>(replicate_stats.size());
  estimate.fail_threshold_pct = options.fail_threshold_pct;
  estimate.seed = options.master_seed;
  estimate.verdict = classify(estimate.ci_low_pct, estimate.ci_high_pct,
                              options.fail_threshold_pct);
  return estimate;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kNoChange:
      return "no_change";
    case Verdict::kRegression:
      return "regression";
    case Verdict::kImprovement:
      return "improvement";
  }
  return "no_change";
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median of an empty list");
  }
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) {
    return upper;
  }
  const double lower =
      *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / 2.0;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) {
    throw std::invalid_argument("percentile of an empty list");
  }
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("percentile fraction must be in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  return percentile_of_sorted(values, p);
}

double change_statistic(std::span<const double> v1_durations,
                        std::span<const double> v2_durations) {
  if (v1_durations.empty() || v2_durations.empty()) {
    throw std::invalid_argument("change statistic of an empty side");
  }
  const double m1 =
      median(std::vector<double>(v1_durations.begin(), v1_durations.end()));
  const double m2 =
      median(std::vector<double>(v2_durations.begin(), v2_durations.end()));
  if (m1 == 0.0) {
    throw std::invalid_argument("v1 median is zero");
  }
  return 100.0 * (m2 - m1) / m1;
}

PairedSample hierarchical_resample(const PairedSample& sample,
                                   SplitMix64& rng) {
  return {resample_nested(sample.instances, rng)};
}

HierarchicalSample hierarchical_resample(const HierarchicalSample& sample,
                                         SplitMix64& rng) {
  return {resample_nested(sample.instances, rng)};
}

ChangeEstimate bootstrap_ci(const PairedSample& sample,
                            const AnalysisOptions& options) {
  check_options(options);
  require_nonempty(sample.instances);

  std::vector<double> v1;
  std::vector<double> v2;
  flatten(sample, v1, v2);
  const double point = change_statistic(v1, v2);

  const std::uint64_t root =
      substream_seed(options.master_seed, stream_tag::kBootstrapPaired);
  std::vector<double> stats(static_cast<std::size_t>(options.replicates));
  std::vector<double> r1;
  std::vector<double> r2;
  for (int r = 0; r < options.replicates; ++r) {
    SplitMix64 rng(substream_seed(root, static_cast<std::uint64_t>(r)));
    r1.clear();
    r2.clear();
    resample_walk(
        sample.instances, rng, [](std::uint64_t) {}, [](std::uint64_t) {},
        [&](const PairedLeaf& leaf) {
          r1.push_back(leaf.v1);
          r2.push_back(leaf.v2);
        });
    stats[static_cast<std::size_t>(r)] = change_statistic(r1, r2);
  }

  ChangeEstimate estimate = finish_estimate(point, std::move(stats), options);
  estimate.paired = true;
  estimate.n_v1 = static_cast<std::int64_t>(v1.size());
  estimate.n_v2 = static_cast<std::int64_t>(v2.size());
  return estimate;
}

ChangeEstimate bootstrap_ci(const HierarchicalSample& v1_sample,
                            const HierarchicalSample& v2_sample,
                            const AnalysisOptions& options) {
  check_options(options);
  require_nonempty(v1_sample.instances);
  require_nonempty(v2_sample.instances);

  const std::vector<double> v1 = flatten(v1_sample);
  const std::vector<double> v2 = flatten(v2_sample);
  const double point = change_statistic(v1, v2);

  const std::uint64_t root_v1 =
      substream_seed(options.master_seed, stream_tag::kBootstrapV1);
  const std::uint64_t root_v2 =
      substream_seed(options.master_seed, stream_tag::kBootstrapV2);
  std::vector<double> stats(static_cast<std::size_t>(options.replicates));
  std::vector<double> r1;
  std::vector<double> r2;
  for (int r = 0; r < options.replicates; ++r) {
    SplitMix64 rng1(substream_seed(root_v1, static_cast<std::uint64_t>(r)));
    SplitMix64 rng2(substream_seed(root_v2, static_cast<std::uint64_t>(r)));
    r1.clear();
    r2.clear();
    resample_walk(
        v1_sample.instances, rng1, [](std::uint64_t) {}, [](std::uint64_t) {},
        [&](double leaf) { r1.push_back(leaf); });
    resample_walk(
        v2_sample.instances, rng2, [](std::uint64_t) {}, [](std::uint64_t) {},
        [&](double leaf) { r2.push_back(leaf); });
    stats[static_cast<std::size_t>(r)] = change_statistic(r1, r2);
  }

  ChangeEstimate estimate = finish_estimate(point, std::move(stats), options);
  estimate.paired = false;
  estimate.n_v1 = static_cast<std::int64_t>(v1.size());
  estimate.n_v2 = static_cast<std::int64_t>(v2.size());
  return estimate;
}

Verdict classify(double ci_low_pct, double ci_high_pct,
                 double fail_threshold_pct) {
  if (ci_low_pct > fail_threshold_pct) {
    return Verdict::kRegression;
  }
  if (ci_high_pct < -fail_threshold_pct) {
    return Verdict::kImprovement;
  }
  return Verdict::kNoChange;
}

PairedSample to_paired_sample(std::span<const MeasurementPair> pairs) {
  std::map<int, std::map<int, std::vector<std::pair<int, PairedLeaf>>>> grouped;
  for (const MeasurementPair& pair : pairs) {
    grouped[pair.instance_id][pair.call_index].push_back(
        {pair.iteration_index,
         {static_cast<double>(pair.v1_duration_ns),
          static_cast<double>(pair.v2_duration_ns)}});
  }

  PairedSample sample;
  sample.instances.reserve(grouped.size());
  for (auto& [instance_id, calls] : grouped) {
    auto& inst = sample.instances.emplace_back();
    inst.reserve(calls.size());
    for (auto& [call_index, leaves] : calls) {
      std::sort(leaves.begin(), leaves.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      auto& call = inst.emplace_back();
      call.reserve(leaves.size());
      for (const auto& [iteration, leaf] : leaves) {
        call.push_back(leaf);
      }
    }
  }
  return sample;
}

HierarchicalSample to_duration_sample(const Dataset& dataset) {
  std::map<int, std::map<int, std::vector<double>>> grouped;
  for (const MeasurementRecord& rec : dataset.records) {
    if (rec.status != RunStatus::kOk) {
      continue;
    }
    grouped[rec.instance_id][rec.call_index].push_back(
        static_cast<double>(rec.duration_ns));
  }

  HierarchicalSample sample;
  sample.instances.reserve(grouped.size());
  for (auto& [instance_id, calls] : grouped) {
    auto& inst = sample.instances.emplace_back();
    inst.reserve(calls.size());
    for (auto& [call_index, leaves] : calls) {
      inst.push_back(std::move(leaves));
    }
  }
  return sample;
}

ChangeEstimate analyze_paired(const Dataset& dataset,
                              const AnalysisOptions& options) {
  const std::vector<MeasurementPair> pairs = pair_records(dataset);
  if (pairs.empty()) {
    throw std::invalid_argument("dataset has no complete measurement pairs");
  }
  return bootstrap_ci(to_paired_sample(pairs), options);
}

ChangeEstimate analyze_traditional(const Dataset& v1_dataset,
                                   const Dataset& v2_dataset,
                                   const AnalysisOptions& options) {
  if (v1_dataset.mode() != Mode::kV1Only) {
    throw std::invalid_argument("first dataset must have mode v1_only");
  }
  if (v2_dataset.mode() != Mode::kV2Only) {
    throw std::invalid_argument("second dataset must have mode v2_only");
  }
  return bootstrap_ci(to_duration_sample(v1_dataset),
                      to_duration_sample(v2_dataset), options);
}

std::string estimate_to_json(const ChangeEstimate& estimate) {
  ordered_json doc;
  doc["median_change_pct"] = estimate.median_change_pct;
  doc["ci_low_pct"] = estimate.ci_low_pct;
  doc["ci_high_pct"] = estimate.ci_high_pct;
  doc["confidence_level"] = estimate.confidence_level;
  if (estimate.paired) {
    doc["n_pairs"] = estimate.n_v1;
  } else {
    doc["n_v1"] = estimate.n_v1;
    doc["n_v2"] = estimate.n_v2;
  }
  doc["replicates"] = estimate.replicates_used;
  doc["verdict"] = to_string(estimate.verdict);
  doc["seed"] = estimate.seed;
  return doc.dump(2);
}

}  // namespace rmitbench
