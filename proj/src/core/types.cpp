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

#include "core/types.hpp"

#include <charconv>
#include <system_error>

namespace rmitbench {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kRmit:
      return "rmit";
    case Mode::kV1Only:
      return "v1_only";
    case Mode::kV2Only:
      return "v2_only";
  }
  return "rmit";
}

std::string_view to_string(Version v) {
  return v == Version::kV1 ? "v1" : "v2";
}

std::string_view to_string(Position p) {
  return p == Position::kFirst ? "first" : "second";
}

std::string_view to_string(RunStatus s) {
  return s == RunStatus::kOk ? "ok" : "error";
}

std::string_view to_string(TargetKind k) {
  switch (k) {
    case TargetKind::kSimulated:
      return "simulated";
    case TargetKind::kLocalProcess:
      return "local_process";
    case TargetKind::kHttpEndpoint:
      return "http_endpoint";
  }
  return "simulated";
}

bool parse_mode(std::string_view text, Mode& out) {
  if (text == "rmit") {
    out = Mode::kRmit;
  } else if (text == "v1_only") {
    out = Mode::kV1Only;
  } else if (text == "v2_only") {
    out = Mode::kV2Only;
  } else {
    return false;
  }
  return true;
}

bool parse_position(std::string_view text, Position& out) {
  if (text == "first") {
    out = Position::kFirst;
  } else if (text == "second") {
    out = Position::kSecond;
  } else {
    return false;
  }
  return true;
}

bool parse_run_status(std::string_view text, RunStatus& out) {
  if (text == "ok") {
    out = RunStatus::kOk;
  } else if (text == "error") {
    out = RunStatus::kError;
  } else {
    return false;
  }
  return true;
}

bool parse_target_kind(std::string_view text, TargetKind& out) {
  if (text == "simulated") {
    out = TargetKind::kSimulated;
  } else if (text == "local_process") {
    out = TargetKind::kLocalProcess;
  } else if (text == "http_endpoint") {
    out = TargetKind::kHttpEndpoint;
  } else {
    return false;
  }
  return true;
}

std::string double_to_string(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace rmitbench
