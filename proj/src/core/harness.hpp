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
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/measurements.hpp"
#include "core/types.hpp"

namespace rmitbench {

// Executes one version against a concrete target and measures it with the
// monotonic clock (a virtual one for simulated targets). Adapters measure the
// target execution only; per-invocation failures come back as status=error.
class RunnerAdapter {
 public:
  struct Execution {
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;
    RunStatus status = RunStatus::kOk;
  };

  virtual ~RunnerAdapter() = default;
  virtual Execution execute(int instance_id, Version version) = 0;
};

// Builds the adapter for the config's target kind. `platform_seed` roots the
// simulator streams; local-process and HTTP targets ignore it. Throws
// TargetError when the adapter cannot be set up.
std::unique_ptr<RunnerAdapter> make_runner_adapter(const ExperimentConfig& config,
                                                   std::uint64_t platform_seed);

// Spawns argv, waits for exit (or kills at the timeout), and reports the
// wall time of the process measured with the monotonic clock. A nonzero exit
// or a timeout yields status=error with the duration still recorded. Throws
// TargetError when the command cannot be spawned at all.
RunnerAdapter::Execution execute_local(const std::vector<std::string>& argv,
                                       std::int64_t timeout_ms);

// Runs one experiment. rmit mode executes the seeded plan: for every planned
// pair, both versions back-to-back on the pair's instance in the planned
// order. v1_only / v2_only modes execute K*C calls of i iterations each of
// the single version, matching the interleaved modes' per-version execution
// counts. Instances are driven round-robin by call index (call 0 on every
// instance, then call 1, ...) so temporal drift affects all instances
// comparably. Returns a dataset carrying the config; emits exactly one record
// per execution, ok or error.
Dataset run_experiment(const ExperimentConfig& config);

// As above with an explicit simulator stream root (used by the traditional
// study and the grid driver to keep deployments independent).
Dataset run_experiment(const ExperimentConfig& config,
                       std::uint64_t platform_seed);

// Two independent experiments with modes v1_only and v2_only, same grid.
// Each version gets a fresh deployment: simulator streams are rooted at
// distinct derived seeds, so no instance state is shared across versions.
std::pair<Dataset, Dataset> run_traditional_study(const ExperimentConfig& config);

}  // namespace rmitbench
