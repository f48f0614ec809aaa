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

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "squeeze/qserver.hpp"

using namespace squeeze;

namespace {

std::string fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("squeeze_qserver_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir.string();
}

// An rx payload whose fields are correlated: ts and beta carry the same
// tag and a0 mirrors the pulse amplitude, so a reader can detect a
// record assembled from two different writes.
nlohmann::json tagged_rx(int64_t tag) {
  double amp = 0.1 + static_cast<double>(tag % 800) / 1000.0;
  RxEntry e = ideal_rx_entry(
      DragPulse(amp, 160, 40.0, static_cast<double>(tag)),
      static_cast<double>(tag));
  return e.to_json();
}

bool tag_consistent(const nlohmann::json& payload) {
  RxEntry e = RxEntry::from_json(payload);
  return e.ts == e.x_pulse.beta && e.a0 == e.x_pulse.amp;
}

nlohmann::json sample_zx() {
  ZxEntry z;
  z.cr = GaussianSquarePulse(0.3, 192.0, 448, 64.0);
  z.c = 1.2;
  z.k = 1.05;
  z.ts = 5.0;
  return z.to_json();
}

}  // namespace

TEST_SUITE("qserver") {

TEST_CASE("puts assign versions per key and reads return them whole") {
  ParamStore store(fresh_dir("versions"));
  CHECK(store.put("rx", "0", tagged_rx(1), 10.0) == 1);
  CHECK(store.put("rx", "0", tagged_rx(2), 11.0) == 2);
  CHECK(store.put("rx", "1", tagged_rx(3), 12.0) == 1);
  CHECK(store.put("zx", "0-1", sample_zx(), 13.0) == 1);

  auto rec = store.get("rx", "0");
  REQUIRE(rec.has_value());
  CHECK(rec->version == 2);
  CHECK(rec->timestamp == 11.0);
  CHECK(rec->payload == tagged_rx(2));
  CHECK(!store.get("rx", "7").has_value());
  CHECK(!store.get("zx", "1-0").has_value());

  auto h = store.health();
  CHECK(h.at("rx").get<int>() == 2);
  CHECK(h.at("zx").get<int>() == 1);
  CHECK(h.at("last_update").get<double>() == 13.0);
}

TEST_CASE("malformed puts are rejected") {
  ParamStore store(fresh_dir("validate"));
  CHECK_THROWS_AS(store.put("gate", "0", tagged_rx(1), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(store.put("rx", "0-1", tagged_rx(1), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(store.put("rx", "banana", tagged_rx(1), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(store.put("zx", "3", sample_zx(), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(store.put("rx", "0", nlohmann::json{{"beta", 1}}, 0.0),
                  std::invalid_argument);
  // Nothing was stored along the way.
  CHECK(store.health().at("records").get<int>() == 0);
}

TEST_CASE("snapshot exposes the current library view") {
  ParamStore store(fresh_dir("snapshot"));
  CHECK(store.snapshot().rx.empty());
  CHECK(store.snapshot().zx.empty());

  store.put("rx", "0", tagged_rx(4), 1.0);
  store.put("rx", "0", tagged_rx(9), 2.0);
  store.put("rx", "2", tagged_rx(5), 3.0);
  store.put("zx", "0-1", sample_zx(), 4.0);

  PulseLibrary lib = store.snapshot();
  REQUIRE(lib.rx.size() == 2);
  REQUIRE(lib.zx.size() == 1);
  CHECK(lib.rx.at(0).ts == 9.0);  // the later write wins
  CHECK(lib.rx.at(2).ts == 5.0);
  CHECK(lib.zx.at({0, 1}).c == doctest::Approx(1.2));
  CHECK(lib.find_rx(0) != nullptr);
  CHECK(lib.find_rx(1) == nullptr);
}

TEST_CASE("restart replays the write-ahead log") {
  std::string dir = fresh_dir("replay");
  {
    ParamStore store(dir);
    store.put("rx", "0", tagged_rx(1), 1.0);
    store.put("rx", "0", tagged_rx(2), 2.0);
    store.put("zx", "1-2", sample_zx(), 3.0);
  }
  ParamStore reopened(dir);
  auto rec = reopened.get("rx", "0");
  REQUIRE(rec.has_value());
  CHECK(rec->version == 2);
  CHECK(rec->payload == tagged_rx(2));
  CHECK(reopened.get("zx", "1-2").has_value());
  // Version numbering continues rather than restarting.
  CHECK(reopened.put("rx", "0", tagged_rx(3), 4.0) == 3);
}

TEST_CASE("concurrent writers never produce a torn read") {
  ParamStore store(fresh_dir("torn"));
  store.put("rx", "0", tagged_rx(0), 0.0);
  store.put("rx", "1", tagged_rx(0), 0.0);

  std::atomic<bool> stop{false};
  std::atomic<int> bad_reads{0};
  std::atomic<int64_t> reads_done{0};

  std::vector<std::thread> readers;
  for (int r = 0; r < 4; ++r) {
    readers.emplace_back([&, r] {
      std::string key = std::to_string(r % 2);
      int64_t last_version = 0;
      while (!stop.load()) {
        auto rec = store.get("rx", key);
        if (!rec.has_value() || !tag_consistent(rec->payload) ||
            rec->version < last_version)
          ++bad_reads;
        else
          last_version = rec->version;
        ++reads_done;
      }
    });
  }
  std::vector<std::thread> writers;
  for (int w = 0; w < 4; ++w) {
    writers.emplace_back([&, w] {
      std::string key = std::to_string(w % 2);
      for (int i = 0; i < 50; ++i)
        store.put("rx", key, tagged_rx(w * 1000 + i), i);
    });
  }
  for (auto& t : writers) t.join();
  stop = true;
  for (auto& t : readers) t.join();

  CHECK(bad_reads.load() == 0);
  CHECK(reads_done.load() > 0);
  // Interleaved writers still account for every version bump.
  CHECK(store.get("rx", "0")->version == 101);
  CHECK(store.get("rx", "1")->version == 101);
}

TEST_CASE("endpoint parsing") {
  auto [h1, p1] = parse_endpoint("http://localhost:8765");
  CHECK(h1 == "localhost");
  CHECK(p1 == 8765);
  auto [h2, p2] = parse_endpoint("127.0.0.1:9000");
  CHECK(h2 == "127.0.0.1");
  CHECK(p2 == 9000);
  auto [h3, p3] = parse_endpoint("https://calib.example.org:443/");
  CHECK(h3 == "calib.example.org");
  CHECK(p3 == 443);
  CHECK_THROWS_AS(parse_endpoint("localhost"), std::invalid_argument);
  CHECK_THROWS_AS(parse_endpoint("host:notaport"), std::invalid_argument);
  CHECK_THROWS_AS(parse_endpoint("host:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_endpoint("host:70000"), std::invalid_argument);
}

TEST_CASE("http front serves puts, gets, snapshots and health") {
  QueryServer server(fresh_dir("http"));
  int port = server.start(0);
  REQUIRE(port > 0);
  QueryClient client("127.0.0.1", port);

  CHECK(client.healthy());
  CHECK(!client.get("rx", "0").has_value());

  CHECK(client.put("rx", "0", tagged_rx(42), 5.0) == 1);
  CHECK(client.put("rx", "0", tagged_rx(43), 6.0) == 2);
  auto rec = client.get("rx", "0");
  REQUIRE(rec.has_value());
  CHECK(rec->version == 2);
  CHECK(rec->timestamp == 6.0);
  CHECK(tag_consistent(rec->payload));

  CHECK_THROWS_AS(client.put("rx", "zzz", tagged_rx(1), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(client.put("rx", "1", nlohmann::json{{"junk", true}}, 0.0),
                  std::invalid_argument);

  client.put("zx", "0-1", sample_zx(), 7.0);
  PulseLibrary lib = client.snapshot();
  CHECK(lib.rx.size() == 1);
  CHECK(lib.zx.size() == 1);
  CHECK(lib.rx.at(0).ts == 43.0);

  server.stop();
  CHECK_THROWS_AS(client.get("rx", "0"), ParamError);
}

TEST_CASE("server restart picks the store back up") {
  std::string dir = fresh_dir("http_restart");
  int version = 0;
  {
    QueryServer server(dir);
    int port = server.start(0);
    QueryClient client("127.0.0.1", port);
    version = static_cast<int>(client.put("rx", "3", tagged_rx(8), 1.0));
    server.stop();
  }
  QueryServer server(dir);
  int port = server.start(0);
  QueryClient client("127.0.0.1", port);
  auto rec = client.get("rx", "3");
  REQUIRE(rec.has_value());
  CHECK(rec->version == version);
  server.stop();
}

}  // TEST_SUITE
