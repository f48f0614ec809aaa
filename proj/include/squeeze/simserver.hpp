// Copyright 2026 The sQueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQUEEZE_SIMSERVER_HPP
#define SQUEEZE_SIMSERVER_HPP

#include <memory>
#include <string>

#include "squeeze/device.hpp"

namespace squeeze {

// JSON-over-HTTP front for a SimBackend so remote processes (the
// calibration daemon, the CLI) can target it like the in-process one.
//   POST /v1/jobs     {"schedules": [...], "shots": n} -> counts
//   GET  /v1/device   -> vendor device description
//   POST /v1/advance  {"seconds": s} -> {"clock": t}
//   GET  /v1/health   -> {"status": "ok"}
// Batch-limit violations return 400 with an explanatory error body.
class SimServer {
 public:
  explicit SimServer(DeviceModel model);
  ~SimServer();

  int start(int port = 0);
  void stop();
  SimBackend& backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Client-side Backend speaking the SimServer protocol. 400 responses
// mentioning the batch limit surface as BatchLimitError, matching the
// in-process backend's behaviour.
class HttpBackend : public Backend {
 public:
  HttpBackend(const std::string& host, int port);
  ~HttpBackend() override;

  JobResult submit(const JobRequest& req) override;
  nlohmann::json device_info() override;
  void advance_time(double seconds) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace squeeze

#endif  // SQUEEZE_SIMSERVER_HPP
