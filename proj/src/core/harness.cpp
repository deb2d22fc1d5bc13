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

#include "core/harness.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <string>
#include <utility>

#include <httplib.h>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/schedule.hpp"
#include "core/simulator.hpp"

extern char** environ;

namespace rmitbench {

namespace {

std::int64_t steady_now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

class SimulatedAdapter final : public RunnerAdapter {
 public:
  SimulatedAdapter(const ExperimentConfig& config, std::uint64_t platform_seed)
      : platform_(make_platform(config, platform_seed)) {
    platform_.deploy_instances(config.instance_count);
  }

  Execution execute(int instance_id, Version version) override {
    const std::int64_t duration = platform_.invoke(instance_id, version);
    Execution exec;
    exec.start_ns = now_ns_;
    exec.end_ns = now_ns_ + duration;
    exec.status = RunStatus::kOk;
    now_ns_ = exec.end_ns;
    return exec;
  }

 private:
  static SimPlatform make_platform(const ExperimentConfig& config,
                                   std::uint64_t platform_seed) {
    const SimulatedTarget& target = config.target.simulated();
    PlatformModel model = target.platform;
    model.seed = platform_seed;
    return SimPlatform(model, target.workload);
  }

  SimPlatform platform_;
  std::int64_t now_ns_ = 0;  // virtual clock; simulated time, not wall time
};

class LocalProcessAdapter final : public RunnerAdapter {
 public:
  explicit LocalProcessAdapter(const LocalProcessTarget& target)
      : target_(target) {}

  Execution execute(int /*instance_id*/, Version version) override {
    const auto& command =
        version == Version::kV1 ? target_.command_v1 : target_.command_v2;
    return execute_local(command, target_.timeout_ms);
  }

 private:
  LocalProcessTarget target_;
};

// Splits "scheme://authority/path..." into the client base and the request
// path. Throws TargetError for URLs httplib cannot be pointed at.
void split_url(const std::string& url, std::string& base, std::string& path) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) {
    throw TargetError("malformed target url: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    base = url;
    path = "/";
  } else {
    base = url.substr(0, path_start);
    path = url.substr(path_start);
  }
  if (base.size() == scheme_end + 3) {
    throw TargetError("malformed target url (empty host): " + url);
  }
}

class HttpAdapter final : public RunnerAdapter {
 public:
  explicit HttpAdapter(const HttpEndpointTarget& target) : target_(target) {
    split_url(target.url_v1, base_v1_, path_v1_);
    split_url(target.url_v2, base_v2_, path_v2_);
    client_v1_ = std::make_unique<httplib::Client>(base_v1_);
    client_v2_ = std::make_unique<httplib::Client>(base_v2_);
    for (httplib::Client* client : {client_v1_.get(), client_v2_.get()}) {
      if (!client->is_valid()) {
        throw TargetError("unsupported target url scheme");
      }
      const auto seconds = std::chrono::milliseconds(target.timeout_ms);
      client->set_connection_timeout(seconds);
      client->set_read_timeout(seconds);
      client->set_write_timeout(seconds);
    }
  }

  Execution execute(int /*instance_id*/, Version version) override {
    httplib::Client& client =
        version == Version::kV1 ? *client_v1_ : *client_v2_;
    const std::string& path = version == Version::kV1 ? path_v1_ : path_v2_;
    const std::string& body =
        version == Version::kV1 ? target_.body_v1 : target_.body_v2;

    Execution exec;
    exec.start_ns = steady_now_ns();
    const httplib::Result res = client.Post(path, body, "application/json");
    exec.end_ns = steady_now_ns();
    exec.status = res && res->status >= 200 && res->status < 300
                      ? RunStatus::kOk
                      : RunStatus::kError;
    return exec;
  }

 private:
  HttpEndpointTarget target_;
  std::string base_v1_, path_v1_;
  std::string base_v2_, path_v2_;
  std::unique_ptr<httplib::Client> client_v1_;
  std::unique_ptr<httplib::Client> client_v2_;
};

MeasurementRecord make_record(const ExperimentConfig& config, int instance_id,
                              int call_index, int iteration_index,
                              Version version, Position position,
                              const RunnerAdapter::Execution& exec) {
  MeasurementRecord rec;
  rec.experiment_id = config.experiment_id;
  rec.mode = config.mode;
  rec.instance_id = instance_id;
  rec.call_index = call_index;
  rec.iteration_index = iteration_index;
  rec.version = version;
  rec.position = position;
  rec.start_ns = exec.start_ns;
  rec.end_ns = exec.end_ns;
  rec.duration_ns = exec.end_ns - exec.start_ns;
  rec.status = exec.status;
  return rec;
}

std::uint64_t default_platform_seed(const ExperimentConfig& config) {
  if (config.target.kind() == TargetKind::kSimulated &&
      config.target.simulated().platform_seed_set) {
    return config.target.simulated().platform.seed;
  }
  return substream_seed(config.master_seed, stream_tag::kPlatform);
}

// Parent seed for deriving the two traditional deployments.
std::uint64_t traditional_seed_parent(const ExperimentConfig& config) {
  if (config.target.kind() == TargetKind::kSimulated &&
      config.target.simulated().platform_seed_set) {
    return config.target.simulated().platform.seed;
  }
  return config.master_seed;
}

}  // namespace

std::unique_ptr<RunnerAdapter> make_runner_adapter(
    const ExperimentConfig& config, std::uint64_t platform_seed) {
  switch (config.target.kind()) {
    case TargetKind::kSimulated:
      return std::make_unique<SimulatedAdapter>(config, platform_seed);
    case TargetKind::kLocalProcess:
      return std::make_unique<LocalProcessAdapter>(
          config.target.local_process());
    case TargetKind::kHttpEndpoint:
      return std::make_unique<HttpAdapter>(config.target.http_endpoint());
  }
  throw TargetError("unknown target kind");
}

RunnerAdapter::Execution execute_local(const std::vector<std::string>& argv,
                                       std::int64_t timeout_ms) {
  if (argv.empty()) {
    throw TargetError("empty command");
  }
  std::vector<char*> argv_c;
  argv_c.reserve(argv.size() + 1);
  for (const std::string& arg : argv) {
    argv_c.push_back(const_cast<char*>(arg.c_str()));
  }
  argv_c.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null",
                                   O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null",
                                   O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null",
                                   O_WRONLY, 0);

  RunnerAdapter::Execution exec;
  exec.start_ns = steady_now_ns();

  pid_t pid = -1;
  const int rc =
      posix_spawnp(&pid, argv_c[0], &actions, nullptr, argv_c.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw TargetError("cannot spawn '" + argv[0] + "': " + std::strerror(rc));
  }

  const std::int64_t deadline_ns = exec.start_ns + timeout_ms * 1'000'000;
  bool timed_out = false;
  int status = 0;
  while (true) {
    const pid_t waited = waitpid(pid, &status, WNOHANG);
    if (waited == pid) {
      break;
    }
    if (waited < 0) {
      exec.end_ns = steady_now_ns();
      exec.status = RunStatus::kError;
      return exec;
    }
    if (steady_now_ns() >= deadline_ns) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    timespec pause{0, 50'000};  // 50 microseconds
    nanosleep(&pause, nullptr);
  }
  exec.end_ns = steady_now_ns();
  exec.status = !timed_out && WIFEXITED(status) && WEXITSTATUS(status) == 0
                    ? RunStatus::kOk
                    : RunStatus::kError;
  return exec;
}

Dataset run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, default_platform_seed(config));
}

Dataset run_experiment(const ExperimentConfig& config,
                       std::uint64_t platform_seed) {
  config.validate();
  const std::unique_ptr<RunnerAdapter> adapter =
      make_runner_adapter(config, platform_seed);

  Dataset dataset;
  dataset.config = config;
  const std::size_t executions_per_pair = config.mode == Mode::kRmit ? 2 : 1;
  dataset.records.reserve(static_cast<std::size_t>(config.planned_pairs()) *
                          executions_per_pair);

  ExecutionPlan plan;
  if (config.mode == Mode::kRmit) {
    plan = generate_plan(config.instance_count, config.calls_per_instance,
                         config.iterations_per_call, config.master_seed);
  }
  const Version single_version =
      config.mode == Mode::kV2Only ? Version::kV2 : Version::kV1;

  for (int c = 0; c < config.calls_per_instance; ++c) {
    for (int k = 0; k < config.instance_count; ++k) {
      for (int t = 0; t < config.iterations_per_call; ++t) {
        if (config.mode == Mode::kRmit) {
          const PlannedInvocation& planned = plan.at(k, c, t);
          const Version first = planned.order == ExecOrder::kV1First
                                    ? Version::kV1
                                    : Version::kV2;
          const Version second =
              first == Version::kV1 ? Version::kV2 : Version::kV1;
          dataset.records.push_back(
              make_record(config, k, c, t, first, Position::kFirst,
                          adapter->execute(k, first)));
          dataset.records.push_back(
              make_record(config, k, c, t, second, Position::kSecond,
                          adapter->execute(k, second)));
        } else {
          dataset.records.push_back(
              make_record(config, k, c, t, single_version, Position::kFirst,
                          adapter->execute(k, single_version)));
        }
      }
    }
  }
  return dataset;
}

std::pair<Dataset, Dataset> run_traditional_study(
    const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t parent = traditional_seed_parent(config);

  ExperimentConfig config_v1 = config;
  config_v1.mode = Mode::kV1Only;
  ExperimentConfig config_v2 = config;
  config_v2.mode = Mode::kV2Only;

  Dataset v1 = run_experiment(
      config_v1, substream_seed(parent, stream_tag::kPlatformTraditionalV1));
  Dataset v2 = run_experiment(
      config_v2, substream_seed(parent, stream_tag::kPlatformTraditionalV2));
  return {std::move(v1), std::move(v2)};
}

}  // namespace rmitbench
