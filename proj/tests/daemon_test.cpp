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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "squeeze/daemon.hpp"

using namespace squeeze;

namespace {

std::string fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("squeeze_daemon_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir.string();
}

DeviceModel daemon_device(int n, double qubit_gain, double pair_gain) {
  DeviceModel d;
  d.n_qubits = n;
  for (int q = 0; q < n; ++q) {
    QubitModel qm;
    qm.vendor_x = DragPulse(0.25, 160, 40.0, 0.75);
    qm.gain = qubit_gain;
    d.qubits.push_back(qm);
  }
  for (int q = 0; q + 1 < n; ++q) {
    d.coupling.edges.insert({q, q + 1});
    PairModel pm;
    pm.vendor_cr = GaussianSquarePulse(0.3, 192.0, 448, 64.0);
    pm.gain = pair_gain;
    d.pairs[{q, q + 1}] = pm;
    d.pairs[{q + 1, q}] = pm;
  }
  d.drift.sigma = 0.0;
  d.seed = 11;
  d.rng.seed(d.seed);
  return d;
}

// Param client whose posts can be switched off to simulate an
// unreachable query server; fetches keep working.
class FlakyParams : public ParamClient {
 public:
  explicit FlakyParams(ParamStore& store) : inner_(store) {}
  std::optional<ParamRecord> fetch(const std::string& kind,
                                   const std::string& key) override {
    return inner_.fetch(kind, key);
  }
  int64_t post(const std::string& kind, const std::string& key,
               const nlohmann::json& payload, double timestamp) override {
    if (fail) throw ParamError("params offline");
    return inner_.post(kind, key, payload, timestamp);
  }
  StoreParamClient inner_;
  bool fail = false;
};

class DeadBackend : public Backend {
 public:
  JobResult submit(const JobRequest&) override {
    throw std::runtime_error("backend down");
  }
  nlohmann::json device_info() override {
    throw std::runtime_error("backend down");
  }
  void advance_time(double) override {}
};

}  // namespace

TEST_SUITE("daemon") {

TEST_CASE("first cycle calibrates a weak qubit and posts the winner") {
  SimBackend backend(daemon_device(1, 0.9, 1.0));
  ParamStore store(fresh_dir("rx_first"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = fresh_dir("rx_first_db");
  cfg.calibrate_zx = false;
  cfg.sweep_shots = 2048;
  cfg.validate_shots = 4096;
  Daemon daemon(cfg, backend, params);

  CycleReport report = daemon.run_cycle();
  CHECK(report.cycle == 0);
  CHECK(report.backend_ok);
  CHECK(report.pending_puts == 0);
  REQUIRE(report.actions.size() == 1);
  const auto& action = report.actions[0];
  CHECK(action.at("kind") == "rx");
  CHECK(action.at("qubit") == 0);
  // The full-scale 64 dt pulse still clears the pi area at gain 0.9, so
  // the sweep lands on the shortest grid duration.
  CHECK(action.at("t0").get<int64_t>() == 64);
  CHECK(action.at("accepted").get<bool>() == true);
  CHECK(action.at("posted").get<bool>() == true);

  auto rec = store.get("rx", "0");
  REQUIRE(rec.has_value());
  RxEntry entry = RxEntry::from_json(rec->payload);
  CHECK(entry.t0 == 64);
  // The fitted pi amplitude compensates the 0.9 gain.
  CHECK(std::abs(entry.x_pulse.amp - 0.25 / 0.9 * 160.0 / 64.0) < 0.03);

  CHECK(daemon.db().last_cycle() == 0);
  CHECK(daemon.db().load_rx_samples(0, 64).size() == 51);
}

TEST_CASE("repeated cycles append to the sample history") {
  SimBackend backend(daemon_device(1, 0.9, 1.0));
  ParamStore store(fresh_dir("rx_repeat"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = fresh_dir("rx_repeat_db");
  cfg.calibrate_zx = false;
  cfg.sweep_shots = 2048;
  Daemon daemon(cfg, backend, params);

  CHECK(daemon.run_cycle().cycle == 0);
  CHECK(daemon.run_cycle().cycle == 1);
  CHECK(daemon.db().load_rx_samples(0, 64).size() == 102);
  CHECK(daemon.db().last_cycle() == 1);
}

TEST_CASE("pair calibration corrects a weak CR drive") {
  SimBackend backend(daemon_device(2, 1.0, 0.8));
  ParamStore store(fresh_dir("zx_weak"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = fresh_dir("zx_weak_db");
  cfg.calibrate_rx = false;
  cfg.pairs = {{0, 1}};
  cfg.particle_shots = 4096;
  Daemon daemon(cfg, backend, params);

  CycleReport report = daemon.run_cycle();
  REQUIRE(report.actions.size() == 1);
  const auto& action = report.actions[0];
  CHECK(action.at("kind") == "zx");
  CHECK(action.at("key") == "0-1");
  CHECK(action.at("generation") == 0);
  // A 20 percent under-rotation is best compensated by the largest k in
  // the grid, and any such particle beats the untouched baseline.
  CHECK(action.at("accepted").get<bool>() == true);
  CHECK(action.at("best_k").get<double>() == doctest::Approx(1.1));

  auto rec = store.get("zx", "0-1");
  REQUIRE(rec.has_value());
  ZxEntry entry = ZxEntry::from_json(rec->payload);
  CHECK(entry.k == doctest::Approx(1.1));

  // The next cycle evolves the surviving generation instead of
  // restarting from the grid.
  CycleReport second = daemon.run_cycle();
  CHECK(second.actions[0].at("generation") == 1);
}

TEST_CASE("a healthy vendor pulse triggers a baseline reset") {
  // The narrow flat top leaves no room to shrink, so every c > 1
  // particle is invalid and the k-only survivors all lose to the exact
  // vendor pulse: the baseline wins outright and the grid is reseeded.
  DeviceModel d = daemon_device(2, 1.0, 1.0);
  d.pairs[{0, 1}].vendor_cr = GaussianSquarePulse(0.55, 16.0, 256, 64.0);
  d.pairs[{1, 0}].vendor_cr = GaussianSquarePulse(0.55, 16.0, 256, 64.0);
  SimBackend backend(std::move(d));
  ParamStore store(fresh_dir("zx_reset"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = fresh_dir("zx_reset_db");
  cfg.calibrate_rx = false;
  cfg.pairs = {{0, 1}};
  cfg.particle_shots = 4096;
  Daemon daemon(cfg, backend, params);

  CycleReport first = daemon.run_cycle();
  CHECK(first.actions[0].at("accepted").get<bool>() == false);
  CHECK(!store.get("zx", "0-1").has_value());

  CycleReport second = daemon.run_cycle();
  CHECK(second.actions[0].at("generation") == 1);
  // A reseeded generation carries the exact grid coordinates; an evolved
  // one would have jittered them off-grid.
  auto state = daemon.db().load_zx_state(0, 1);
  REQUIRE(state.have);
  for (const auto& p : state.particles) {
    double nearest = 1.0 + 0.2 * std::round((p.c - 1.0) / 0.2);
    CHECK(p.c == doctest::Approx(nearest).epsilon(1e-12));
  }
}

TEST_CASE("posts queue while the param sink is down and flush later") {
  SimBackend backend(daemon_device(1, 0.9, 1.0));
  ParamStore store(fresh_dir("pending"));
  FlakyParams params(store);
  params.fail = true;
  DaemonConfig cfg;
  cfg.db_dir = fresh_dir("pending_db");
  cfg.calibrate_zx = false;
  cfg.sweep_shots = 2048;
  Daemon daemon(cfg, backend, params);

  CycleReport first = daemon.run_cycle();
  CHECK(first.actions[0].at("posted").get<bool>() == false);
  CHECK(first.pending_puts == 1);
  CHECK(!store.get("rx", "0").has_value());

  params.fail = false;
  CycleReport second = daemon.run_cycle();
  CHECK(second.pending_puts == 0);
  bool retried = false;
  for (const auto& a : second.actions)
    if (a.value("retried", false)) retried = true;
  CHECK(retried);
  CHECK(store.get("rx", "0").has_value());
}

TEST_CASE("an unreachable backend is reported, not fatal") {
  DeadBackend backend;
  ParamStore store(fresh_dir("dead"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = fresh_dir("dead_db");
  Daemon daemon(cfg, backend, params);

  std::vector<CycleReport> seen;
  daemon.set_report_sink([&](const CycleReport& r) { seen.push_back(r); });

  CycleReport report = daemon.run_cycle();
  CHECK(report.backend_ok == false);
  REQUIRE(report.actions.size() == 1);
  CHECK(report.actions[0].contains("error"));
  CHECK(daemon.run_cycle().cycle == 1);
  CHECK(seen.size() == 2);
}

TEST_CASE("restart resumes the cycle counter") {
  std::string db = fresh_dir("resume_db");
  SimBackend backend(daemon_device(1, 1.0, 1.0));
  ParamStore store(fresh_dir("resume"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = db;
  cfg.calibrate_rx = false;
  cfg.calibrate_zx = false;
  {
    Daemon daemon(cfg, backend, params);
    daemon.run_cycle();
    daemon.run_cycle();
  }
  Daemon resumed(cfg, backend, params);
  CHECK(resumed.run_cycle().cycle == 2);
}

TEST_CASE("restart resumes the particle generation") {
  std::string db = fresh_dir("resume_zx_db");
  SimBackend backend(daemon_device(2, 1.0, 0.8));
  ParamStore store(fresh_dir("resume_zx"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = db;
  cfg.calibrate_rx = false;
  cfg.pairs = {{0, 1}};
  cfg.particle_shots = 1024;
  {
    Daemon daemon(cfg, backend, params);
    daemon.run_cycle();
  }
  Daemon resumed(cfg, backend, params);
  CycleReport report = resumed.run_cycle();
  CHECK(report.cycle == 1);
  CHECK(report.actions[0].at("generation") == 1);
}

TEST_CASE("run_forever compresses simulated time and stops on request") {
  SimBackend backend(daemon_device(1, 1.0, 1.0));
  ParamStore store(fresh_dir("forever"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = fresh_dir("forever_db");
  cfg.calibrate_rx = false;
  cfg.calibrate_zx = false;
  cfg.cadence_seconds = 3600.0;
  cfg.time_factor = 1.0e6;
  Daemon daemon(cfg, backend, params);

  std::thread runner([&] { daemon.run_forever(); });
  std::this_thread::sleep_for(std::chrono::milliseconds(400));
  daemon.request_stop();
  runner.join();
  CHECK(daemon.stopped());
  CHECK(daemon.db().last_cycle() >= 2);
  // Each cadence wait advanced the backend clock by a full hour.
  double clock = backend.device_info().at("clock").get<double>();
  CHECK(clock >= 3600.0);
  CHECK(clock == doctest::Approx(daemon.db().last_cycle() * 3600.0)
                     .epsilon(0.5));
}

TEST_CASE("backend failures back off instead of spinning") {
  DeadBackend backend;
  ParamStore store(fresh_dir("backoff"));
  StoreParamClient params(store);
  DaemonConfig cfg;
  cfg.db_dir = fresh_dir("backoff_db");
  cfg.cadence_seconds = 60.0;
  cfg.time_factor = 6000.0;  // 30 s of backoff sleeps 5 ms of wall time
  Daemon daemon(cfg, backend, params);

  std::thread runner([&] { daemon.run_forever(); });
  std::this_thread::sleep_for(std::chrono::milliseconds(300));
  daemon.request_stop();
  runner.join();
  int cycles = daemon.db().last_cycle() + 1;
  CHECK(cycles >= 2);
  // 300 ms of wall time fits at most a handful of backoff waits; an
  // unthrottled loop would have logged thousands.
  CHECK(cycles < 40);
}

TEST_CASE("config parsing ignores unrelated keys and keeps defaults") {
  nlohmann::json j = {{"db_dir", "x"},
                      {"cadence_seconds", 60.0},
                      {"qubits", {1, 3}},
                      {"pairs", {{0, 1}, {1, 2}}},
                      {"backend", "http://localhost:8900"},
                      {"query", "http://localhost:8765"}};
  DaemonConfig cfg = DaemonConfig::from_json(j);
  CHECK(cfg.db_dir == "x");
  CHECK(cfg.cadence_seconds == 60.0);
  CHECK(cfg.qubits == std::vector<int>{1, 3});
  REQUIRE(cfg.pairs.size() == 2);
  CHECK(cfg.pairs[0] == std::pair<int, int>{0, 1});
  CHECK(cfg.calibrate_rx == true);
  CHECK(cfg.sweep_shots == 1024);

  DaemonConfig back = DaemonConfig::from_json(cfg.to_json());
  CHECK(back.pairs == cfg.pairs);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("particles and cycle reports serialize") {
  Particle p;
  p.c = 1.4;
  p.k = 1.02;
  p.score = 0.93;
  p.valid = true;
  p.baseline = false;
  Particle q = particle_from_json(particle_to_json(p));
  CHECK(q.c == p.c);
  CHECK(q.k == p.k);
  CHECK(q.score == p.score);
  CHECK(q.baseline == p.baseline);

  CycleReport r;
  r.cycle = 3;
  r.started = 42.0;
  r.pending_puts = 1;
  nlohmann::json j = r.to_json();
  CHECK(j.at("cycle") == 3);
  CHECK(j.at("started") == 42.0);
  CHECK(j.at("backend_ok") == true);
  CHECK(j.at("pending_puts") == 1);
  CHECK(j.at("actions").is_array());
}

}  // TEST_SUITE
