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

// Simulated transmon device exposed over HTTP.  Loads a device description
// (qubit pulses, gains, readout confusion, drift parameters) and serves job
// submission, device info and clock-advance endpoints.

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "squeeze/simserver.hpp"

namespace {
std::atomic<bool> g_stop{false};
void handle_signal(int) { g_stop.store(true); }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated transmon device server"};

  std::string config_path;
  int port = 8900;
  std::optional<uint64_t> seed;
  app.add_option("--config", config_path, "Device description JSON file")
      ->required();
  app.add_option("--port", port, "TCP port to listen on");
  app.add_option("--seed", seed, "Override the noise seed in the config");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path);
    nlohmann::json config = nlohmann::json::parse(in);
    if (seed) config["seed"] = *seed;

    squeeze::SimServer server(squeeze::DeviceModel::from_json(config));
    int bound = server.start(port);
    std::cout << "devsimd listening on 127.0.0.1:" << bound << "\n"
              << std::flush;

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop.load())
      std::this_thread::sleep_for(std::chrono::milliseconds(50));

    server.stop();
    std::cout << "devsimd stopped\n";
  } catch (const std::exception& e) {
    std::cerr << "devsimd: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
