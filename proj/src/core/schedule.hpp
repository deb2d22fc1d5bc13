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
#include <string>
#include <utility>
#include <vector>

namespace rmitbench {

enum class ExecOrder { kV1First, kV2First };

// One planned v1+v2 measurement pair.
struct PlannedInvocation {
  int instance_id = 0;
  int call_index = 0;
  int iteration_index = 0;
  ExecOrder order = ExecOrder::kV1First;

  bool operator==(const PlannedInvocation&) const = default;
};

// The fully materialized interleaved-trial schedule. Invocations are stored
// in generation order (instance-major, then call, then iteration); iterations
// within a call are never reordered, only the v1/v2 order inside each pair is
// randomized.
struct ExecutionPlan {
  int instance_count = 0;
  int calls_per_instance = 0;
  int iterations_per_call = 0;
  std::uint64_t seed = 0;  // master seed the plan was derived from
  std::vector<PlannedInvocation> invocations;

  std::size_t pair_count() const { return invocations.size(); }

  const PlannedInvocation& at(int instance_id, int call_index,
                              int iteration_index) const;

  bool operator==(const ExecutionPlan&) const = default;
};

// Deterministic seeded plan: the order bit of pair n (global index in
// generation order) is bit 63 of value n of the scheduler sub-stream
// (substream_seed(master_seed, stream_tag::kScheduler)), 0 -> v1 first,
// 1 -> v2 first. Throws std::invalid_argument for non-positive grid sizes.
ExecutionPlan generate_plan(int instance_count, int calls_per_instance,
                            int iterations_per_call, std::uint64_t master_seed);

// (count v1-first, count v2-first); sums to the pair count.
std::pair<std::int64_t, std::int64_t> order_counts(const ExecutionPlan& plan);

// Debug export: JSON array of {instance_id, call_index, iteration_index,
// order} with order "v1_first" | "v2_first".
std::string plan_to_json(const ExecutionPlan& plan);

}  // namespace rmitbench
