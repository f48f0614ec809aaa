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

// Calibration daemon front end.  Connects a backend device and a query
// server, then runs calibration cycles until stopped, streaming one cycle
// report per line to stdout and appending the same reports to the database
// directory.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "squeeze/daemon.hpp"
#include "squeeze/simserver.hpp"

namespace {

std::atomic<squeeze::Daemon*> g_daemon{nullptr};

void handle_signal(int) {
  if (auto* d = g_daemon.load()) d->request_stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous pulse calibration daemon"};

  std::string config_path;
  double simulated_time = 0.0;
  bool once = false;
  app.add_option("--config", config_path, "Daemon configuration JSON file")
      ->required();
  app.add_option("--simulated-time", simulated_time,
                 "Run against simulated device time, compressing each "
                 "cadence wait by this factor");
  app.add_flag("--once", once, "Run a single cycle and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path);
    nlohmann::json config = nlohmann::json::parse(in);

    if (!config.contains("backend"))
      throw std::invalid_argument("config needs a \"backend\" endpoint");
    if (!config.contains("query"))
      throw std::invalid_argument("config needs a \"query\" endpoint");

    squeeze::DaemonConfig cfg = squeeze::DaemonConfig::from_json(config);
    if (simulated_time > 0) cfg.time_factor = simulated_time;

    auto [bhost, bport] =
        squeeze::parse_endpoint(config.at("backend").get<std::string>());
    auto [qhost, qport] =
        squeeze::parse_endpoint(config.at("query").get<std::string>());

    squeeze::HttpBackend backend(bhost, bport);
    squeeze::HttpParamClient params(qhost, qport);

    squeeze::Daemon daemon(cfg, backend, params);
    daemon.set_report_sink([](const squeeze::CycleReport& report) {
      std::cout << report.to_json().dump() << "\n" << std::flush;
    });

    g_daemon.store(&daemon);
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    if (once) {
      daemon.run_cycle();
    } else {
      daemon.run_forever();
    }
    g_daemon.store(nullptr);
  } catch (const std::exception& e) {
    std::cerr << "calibd: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
