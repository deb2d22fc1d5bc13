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
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace rmitbench {

// Linear cost model of the study workload: a Monte-Carlo estimator whose
// runtime is proportional to the number of generated values. The two version
// value counts encode the injected performance change.
struct WorkloadModel {
  double ms_per_mega_value = 20.0;  // milliseconds per 10^6 generated values
  std::int64_t values_v1 = 5'000'000;
  std::int64_t values_v2 = 5'250'000;

  std::int64_t value_count(Version v) const {
    return v == Version::kV1 ? values_v1 : values_v2;
  }

  double base_ms(Version v) const {
    return ms_per_mega_value * static_cast<double>(value_count(v)) / 1e6;
  }

  void validate() const;  // throws ConfigError naming the field
};

// Parametric noise model of a FaaS platform. Noise is multiplicative
// lognormal at three scopes plus an additive cold start:
//
//   duration_ms = base_ms(version) * speed_factor            (per instance)
//                                  * drift_state             (random walk)
//                                  * exp(N(0, sigma_invocation))
//               + cold_start_ms on the instance's first invocation
//
// after which drift_state <- drift_state * exp(N(0, drift_step_sigma)).
// Separate deployments disagree at percent scale through speed_factor while
// back-to-back executions on one instance agree closely; that asymmetry is
// what paired interleaved runs exploit. The default constants are calibration
// values, not measurements of any real provider, and are config-overridable.
struct PlatformModel {
  double sigma_instance = 0.05;    // lognormal sigma of the per-instance factor
  double sigma_invocation = 0.01;  // lognormal sigma per execution
  double drift_step_sigma = 0.005; // per-invocation geometric random-walk step
  double cold_start_ms = 200.0;    // added to each instance's first invocation
  std::uint64_t seed = 0;

  void validate() const;
};

// One deployed executor instance.
struct SimInstance {
  int id = 0;
  double speed_factor = 1.0;  // fixed at creation
  double drift_state = 1.0;
  std::int64_t invocation_count = 0;
};

// Deterministic platform: deploy instances, invoke versions, get durations.
// Instance `id` draws from sub-stream substream_seed(model.seed, id), so a
// given instance's duration sequence depends only on the seed and on the
// invocations issued to that instance.
class SimPlatform {
 public:
  SimPlatform(const PlatformModel& model, const WorkloadModel& workload);

  // Deploys `count` fresh instances (count >= 1); returns their consecutive
  // ids. Speed factors are drawn lognormal(0, sigma_instance) at creation.
  std::vector<int> deploy_instances(int count);

  // Runs one execution of `version` on `instance_id` and returns its duration
  // in nanoseconds (> 0). Advances the instance's drift state. Throws
  // std::invalid_argument for unknown instance ids.
  std::int64_t invoke(int instance_id, Version version);

  int instance_count() const { return static_cast<int>(instances_.size()); }
  const SimInstance& instance(int id) const;
  const PlatformModel& model() const { return model_; }
  const WorkloadModel& workload() const { return workload_; }

 private:
  PlatformModel model_;
  WorkloadModel workload_;
  std::vector<SimInstance> instances_;
  std::vector<SplitMix64> instance_rngs_;
};

// Monte-Carlo estimate of pi from `values` points uniform on the unit square,
// counting those inside the quarter circle. This is the real workload behind
// the local-process runner, not part of the simulator's timing model.
// Deterministic per seed; throws std::invalid_argument for values < 1.
double run_pi_estimator(std::int64_t values, std::uint64_t seed);

}  // namespace rmitbench
