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

#include "squeeze/simserver.hpp"

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace squeeze {

namespace {

nlohmann::json job_result_to_json(const JobResult& r) {
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& c : r.counts) counts.push_back(c);
  return {{"counts", counts}, {"completed_at", r.completed_at}};
}

JobResult job_result_from_json(const nlohmann::json& j) {
  JobResult r;
  r.completed_at = j.at("completed_at").get<double>();
  for (const auto& c : j.at("counts"))
    r.counts.push_back(c.get<std::map<std::string, int64_t>>());
  return r;
}

}  // namespace

struct SimServer::Impl {
  SimBackend backend;
  httplib::Server srv;
  std::thread worker;
  int port = 0;

  explicit Impl(DeviceModel model) : backend(std::move(model)) {}
};

SimServer::SimServer(DeviceModel model)
    : impl_(std::make_unique<Impl>(std::move(model))) {
  auto& srv = impl_->srv;
  auto* backend = &impl_->backend;
  srv.Post("/v1/jobs", [backend](const httplib::Request& req,
                                 httplib::Response& res) {
    try {
      nlohmann::json body = nlohmann::json::parse(req.body);
      JobRequest job;
      job.shots = body.value("shots", 1024);
      for (const auto& s : body.at("schedules"))
        job.schedules.push_back(Schedule::from_json(s));
      JobResult result = backend->submit(job);
      res.set_content(job_result_to_json(result).dump(), "application/json");
    } catch (const BatchLimitError& e) {
      res.status = 400;
      res.set_content(
          nlohmann::json{{"error", e.what()}, {"code", "batch-limit"}}.dump(),
          "application/json");
    } catch (const std::exception& e) {
      res.status = 422;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(),
                      "application/json");
    }
  });
  srv.Get("/v1/device", [backend](const httplib::Request&,
                                  httplib::Response& res) {
    res.set_content(backend->device_info().dump(), "application/json");
  });
  srv.Post("/v1/advance", [backend](const httplib::Request& req,
                                    httplib::Response& res) {
    try {
      double seconds =
          nlohmann::json::parse(req.body).at("seconds").get<double>();
      backend->advance_time(seconds);
      double clock = backend->device_info().at("clock").get<double>();
      res.set_content(nlohmann::json{{"clock", clock}}.dump(),
                      "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(),
                      "application/json");
    }
  });
  srv.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
}

SimServer::~SimServer() { stop(); }

int SimServer::start(int port) {
  if (port == 0) {
    impl_->port = impl_->srv.bind_to_any_port("127.0.0.1");
  } else {
    if (!impl_->srv.bind_to_port("127.0.0.1", port))
      throw std::runtime_error("cannot bind port " + std::to_string(port));
    impl_->port = port;
  }
  impl_->worker = std::thread([this] { impl_->srv.listen_after_bind(); });
  impl_->srv.wait_until_ready();
  return impl_->port;
}

void SimServer::stop() {
  if (impl_->worker.joinable()) {
    impl_->srv.stop();
    impl_->worker.join();
  }
}

SimBackend& SimServer::backend() { return impl_->backend; }

struct HttpBackend::Impl {
  httplib::Client cli;
  Impl(const std::string& host, int port) : cli(host, port) {
    cli.set_connection_timeout(5);
    // Large jobs take a while to simulate.
    cli.set_read_timeout(600);
  }
};

HttpBackend::HttpBackend(const std::string& host, int port)
    : impl_(std::make_unique<Impl>(host, port)) {}

HttpBackend::~HttpBackend() = default;

JobResult HttpBackend::submit(const JobRequest& req) {
  nlohmann::json schedules = nlohmann::json::array();
  for (const Schedule& s : req.schedules) schedules.push_back(s.to_json());
  nlohmann::json body = {{"schedules", schedules}, {"shots", req.shots}};
  auto res = impl_->cli.Post("/v1/jobs", body.dump(), "application/json");
  if (!res) throw DeviceError("backend unreachable");
  if (res->status == 400) {
    nlohmann::json err = nlohmann::json::parse(res->body);
    if (err.value("code", "") == "batch-limit")
      throw BatchLimitError(err.value("error", "batch limit exceeded"));
    throw DeviceError(err.value("error", "bad request"));
  }
  if (res->status != 200)
    throw DeviceError("job failed with status " + std::to_string(res->status));
  return job_result_from_json(nlohmann::json::parse(res->body));
}

nlohmann::json HttpBackend::device_info() {
  auto res = impl_->cli.Get("/v1/device");
  if (!res || res->status != 200)
    throw DeviceError("cannot fetch device description");
  return nlohmann::json::parse(res->body);
}

void HttpBackend::advance_time(double seconds) {
  auto res = impl_->cli.Post("/v1/advance",
                             nlohmann::json{{"seconds", seconds}}.dump(),
                             "application/json");
  if (!res || res->status != 200) throw DeviceError("advance_time failed");
}

}  // namespace squeeze
