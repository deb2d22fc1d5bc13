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

// Example local-process workload: Monte-Carlo estimate of pi. Runtime is
// linear in the value count, which makes the two command lines of a
// local_process target a controlled performance-change pair.
//
// usage: pi_workload <values> <seed>

#include <cstdio>
#include <cstdlib>

#include "rmitbench.h"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: pi_workload <values> <seed>\n");
    return 2;
  }
  char* end = nullptr;
  const long long values = std::strtoll(argv[1], &end, 10);
  if (*end != '\0') {
    std::fprintf(stderr, "pi_workload: bad value count '%s'\n", argv[1]);
    return 2;
  }
  const unsigned long long seed = std::strtoull(argv[2], &end, 10);
  if (*end != '\0') {
    std::fprintf(stderr, "pi_workload: bad seed '%s'\n", argv[2]);
    return 2;
  }

  double estimate = 0.0;
  if (rmit_pi_estimate(values, seed, &estimate) != RMIT_OK) {
    std::fprintf(stderr, "pi_workload: %s\n", rmit_last_error());
    return 1;
  }
  std::printf("%.9f\n", estimate);
  return 0;
}
