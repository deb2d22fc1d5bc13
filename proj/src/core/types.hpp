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
#include <string_view>

namespace rmitbench {

// Execution mode of an experiment. rmit interleaves both versions per pair;
// the *_only modes reproduce traditional one-version-at-a-time benchmarking.
enum class Mode { kRmit, kV1Only, kV2Only };

enum class Version { kV1, kV2 };

// Slot of an execution inside its measurement pair.
enum class Position { kFirst, kSecond };

enum class RunStatus { kOk, kError };

enum class TargetKind { kSimulated, kLocalProcess, kHttpEndpoint };

std::string_view to_string(Mode m);
std::string_view to_string(Version v);
std::string_view to_string(Position p);
std::string_view to_string(RunStatus s);
std::string_view to_string(TargetKind k);

bool parse_mode(std::string_view text, Mode& out);
bool parse_position(std::string_view text, Position& out);
bool parse_run_status(std::string_view text, RunStatus& out);
bool parse_target_kind(std::string_view text, TargetKind& out);

// Shortest round-trip decimal form (via std::to_chars), so emitted CSV and
// labels are byte-stable across runs.
std::string double_to_string(double value);

}  // namespace rmitbench
