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

#include "core/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"

namespace rmitbench {

void WorkloadModel::validate() const {
  if (!(ms_per_mega_value > 0.0) || !std::isfinite(ms_per_mega_value)) {
    throw ConfigError("ms_per_mega_value must be a positive real");
  }
  if (values_v1 < 1) {
    throw ConfigError("values_v1 must be >= 1");
  }
  if (values_v2 < 1) {
    throw ConfigError("values_v2 must be >= 1");
  }
}

void PlatformModel::validate() const {
  if (!(sigma_instance >= 0.0) || !std::isfinite(sigma_instance)) {
    throw ConfigError("sigma_instance must be >= 0");
  }
  if (!(sigma_invocation >= 0.0) || !std::isfinite(sigma_invocation)) {
    throw ConfigError("sigma_invocation must be >= 0");
  }
  if (!(drift_step_sigma >= 0.0) || !std::isfinite(drift_step_sigma)) {
    throw ConfigError("drift_step_sigma must be >= 0");
  }
  if (!(cold_start_ms >= 0.0) || !std::isfinite(cold_start_ms)) {
    throw ConfigError("cold_start_ms must be >= 0");
  }
}

SimPlatform::SimPlatform(const PlatformModel& model,
                         const WorkloadModel& workload)
    : model_(model), workload_(workload) {
  model_.validate();
  workload_.validate();
}

std::vector<int> SimPlatform::deploy_instances(int count) {
  if (count < 1) {
    throw std::invalid_argument("instance count must be >= 1");
  }
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const int id = static_cast<int>(instances_.size());
    SplitMix64 rng(substream_seed(model_.seed, static_cast<std::uint64_t>(id)));
    SimInstance inst;
    inst.id = id;
    inst.speed_factor = std::exp(model_.sigma_instance * rng.next_normal());
    instances_.push_back(inst);
    instance_rngs_.push_back(rng);
    ids.push_back(id);
  }
  return ids;
}

std::int64_t SimPlatform::invoke(int instance_id, Version version) {
  if (instance_id < 0 ||
      instance_id >= static_cast<int>(instances_.size())) {
    throw std::invalid_argument("unknown instance id");
  }
  SimInstance& inst = instances_[static_cast<std::size_t>(instance_id)];
  SplitMix64& rng = instance_rngs_[static_cast<std::size_t>(instance_id)];

  double ms = workload_.base_ms(version) * inst.speed_factor *
              inst.drift_state *
              std::exp(model_.sigma_invocation * rng.next_normal());
  if (inst.invocation_count == 0) {
    ms += model_.cold_start_ms;
  }
  inst.drift_state *= std::exp(model_.drift_step_sigma * rng.next_normal());
  ++inst.invocation_count;

  return std::max<std::int64_t>(1, std::llround(ms * 1e6));
}

const SimInstance& SimPlatform::instance(int id) const {
  if (id < 0 || id >= static_cast<int>(instances_.size())) {
    throw std::invalid_argument("unknown instance id");
  }
  return instances_[static_cast<std::size_t>(id)];
}

double run_pi_estimator(std::int64_t values, std::uint64_t seed) {
  if (values < 1) {
    throw std::invalid_argument("values must be >= 1");
  }
  SplitMix64 rng(seed);
  std::int64_t inside = 0;
  for (std::int64_t n = 0; n < values; ++n) {
    const double x = rng.next_unit();
    const double y = rng.next_unit();
    if (x * x + y * y <= 1.0) {
      ++inside;
    }
  }
  return 4.0 * static_cast<double>(inside) / static_cast<double>(values);
}

}  // namespace rmitbench
