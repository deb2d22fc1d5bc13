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

#include "core/schedule.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "core/rng.hpp"

namespace rmitbench {

const PlannedInvocation& ExecutionPlan::at(int instance_id, int call_index,
                                           int iteration_index) const {
  if (instance_id < 0 || instance_id >= instance_count || call_index < 0 ||
      call_index >= calls_per_instance || iteration_index < 0 ||
      iteration_index >= iterations_per_call) {
    throw std::invalid_argument("plan coordinates out of range");
  }
  const std::size_t n =
      (static_cast<std::size_t>(instance_id) * calls_per_instance +
       call_index) *
          iterations_per_call +
      iteration_index;
  return invocations[n];
}

ExecutionPlan generate_plan(int instance_count, int calls_per_instance,
                            int iterations_per_call,
                            std::uint64_t master_seed) {
  if (instance_count < 1) {
    throw std::invalid_argument("instance_count must be >= 1");
  }
  if (calls_per_instance < 1) {
    throw std::invalid_argument("calls_per_instance must be >= 1");
  }
  if (iterations_per_call < 1) {
    throw std::invalid_argument("iterations_per_call must be >= 1");
  }

  ExecutionPlan plan;
  plan.instance_count = instance_count;
  plan.calls_per_instance = calls_per_instance;
  plan.iterations_per_call = iterations_per_call;
  plan.seed = master_seed;
  plan.invocations.reserve(static_cast<std::size_t>(instance_count) *
                           calls_per_instance * iterations_per_call);

  SplitMix64 rng(substream_seed(master_seed, stream_tag::kScheduler));
  for (int k = 0; k < instance_count; ++k) {
    for (int c = 0; c < calls_per_instance; ++c) {
      for (int t = 0; t < iterations_per_call; ++t) {
        const ExecOrder order =
            (rng.next() >> 63) ? ExecOrder::kV2First : ExecOrder::kV1First;
        plan.invocations.push_back({k, c, t, order});
      }
    }
  }
  return plan;
}

std::pair<std::int64_t, std::int64_t> order_counts(const ExecutionPlan& plan) {
  std::int64_t v1_first = 0;
  for (const auto& inv : plan.invocations) {
    if (inv.order == ExecOrder::kV1First) {
      ++v1_first;
    }
  }
  return {v1_first,
          static_cast<std::int64_t>(plan.invocations.size()) - v1_first};
}

std::string plan_to_json(const ExecutionPlan& plan) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& inv : plan.invocations) {
    doc.push_back({{"instance_id", inv.instance_id},
                   {"call_index", inv.call_index},
                   {"iteration_index", inv.iteration_index},
                   {"order", inv.order == ExecOrder::kV1First ? "v1_first"
                                                              : "v2_first"}});
  }
  return doc.dump(2);
}

}  // namespace rmitbench
