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

// Standalone pulse-parameter query server.  Serves the versioned parameter
// store over HTTP and persists every accepted write to a JSONL log so a
// restart replays the full history.

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "squeeze/qserver.hpp"

namespace {
std::atomic<bool> g_stop{false};
void handle_signal(int) { g_stop.store(true); }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-parameter query server"};

  int port = 8765;
  std::string data_dir = "querydb";
  app.add_option("--port", port, "TCP port to listen on");
  app.add_option("--data-dir", data_dir, "Directory for the write-ahead log");

  CLI11_PARSE(app, argc, argv);

  try {
    squeeze::QueryServer server(data_dir);
    int bound = server.start(port);
    std::cout << "queryd listening on 127.0.0.1:" << bound << ", data in "
              << data_dir << "\n"
              << std::flush;

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop.load())
      std::this_thread::sleep_for(std::chrono::milliseconds(50));

    server.stop();
    std::cout << "queryd stopped\n";
  } catch (const std::exception& e) {
    std::cerr << "queryd: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
