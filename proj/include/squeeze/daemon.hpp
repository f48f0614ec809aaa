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

#ifndef SQUEEZE_DAEMON_HPP
#define SQUEEZE_DAEMON_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "squeeze/calib.hpp"
#include "squeeze/device.hpp"
#include "squeeze/qserver.hpp"

namespace squeeze {

// Parameter sink the daemon posts winners to: either an in-process
// store or a remote query server.
class ParamClient {
 public:
  virtual ~ParamClient() = default;
  virtual std::optional<ParamRecord> fetch(const std::string& kind,
                                           const std::string& key) = 0;
  virtual int64_t post(const std::string& kind, const std::string& key,
                       const nlohmann::json& payload, double timestamp) = 0;
};

class StoreParamClient : public ParamClient {
 public:
  explicit StoreParamClient(ParamStore& store) : store_(store) {}
  std::optional<ParamRecord> fetch(const std::string& kind,
                                   const std::string& key) override;
  int64_t post(const std::string& kind, const std::string& key,
               const nlohmann::json& payload, double timestamp) override;

 private:
  ParamStore& store_;
};

class HttpParamClient : public ParamClient {
 public:
  HttpParamClient(const std::string& host, int port) : client_(host, port) {}
  std::optional<ParamRecord> fetch(const std::string& kind,
                                   const std::string& key) override;
  int64_t post(const std::string& kind, const std::string& key,
               const nlohmann::json& payload, double timestamp) override;

 private:
  QueryClient client_;
};

struct DaemonConfig {
  std::string db_dir = "calibdb";
  double cadence_seconds = 7200.0;
  bool calibrate_rx = true;
  bool calibrate_zx = true;
  // Empty means every qubit / every directed coupled pair on the device.
  std::vector<int> qubits;
  std::vector<std::pair<int, int>> pairs;
  int sweep_shots = 1024;
  int validate_shots = 1024;
  int particle_shots = 256;
  uint64_t seed = 1;
  // > 0 compresses time: each cadence wait advances the backend clock by
  // the full cadence but sleeps only cadence / factor wall seconds.
  double time_factor = 0.0;

  nlohmann::json to_json() const;
  static DaemonConfig from_json(const nlohmann::json& j);
};

// Append-only calibration history, one JSONL file per key plus a cycle
// log. Each line carries a "kind" tag.
class CalibDb {
 public:
  explicit CalibDb(const std::string& dir);

  void append_rx(int qubit, const nlohmann::json& line);
  void append_zx(int a, int b, const nlohmann::json& line);
  void append_cycle(const nlohmann::json& line);

  // Samples recorded for a qubit, optionally restricted to one pulse
  // duration (mixing durations would corrupt the amplitude curve).
  std::vector<CalibSample> load_rx_samples(int qubit, int64_t t0 = -1) const;

  struct ZxState {
    std::vector<Particle> particles;  // last scored generation
    int generation = 0;
    bool baseline_reset = false;
    bool have = false;
  };
  ZxState load_zx_state(int a, int b) const;

  // Highest cycle index in the cycle log, -1 when none.
  int last_cycle() const;

  const std::string& dir() const { return dir_; }

 private:
  std::string rx_path(int qubit) const;
  std::string zx_path(int a, int b) const;
  std::string dir_;
};

nlohmann::json particle_to_json(const Particle& p);
Particle particle_from_json(const nlohmann::json& j);

struct CycleReport {
  int cycle = 0;
  double started = 0.0;  // backend clock seconds
  bool backend_ok = true;
  nlohmann::json actions = nlohmann::json::array();
  int pending_puts = 0;

  nlohmann::json to_json() const;
};

class Daemon {
 public:
  Daemon(DaemonConfig cfg, Backend& backend, ParamClient& params);

  CycleReport run_cycle();
  // Cycles every cadence_seconds until request_stop; repeated backend
  // failures back off exponentially (capped at the cadence) instead of
  // spinning.
  void run_forever();
  void request_stop() { stop_.store(true); }
  bool stopped() const { return stop_.load(); }

  // Called with every finished cycle report, in addition to the database
  // append.  The calibd front end uses this to stream JSON lines to stdout.
  void set_report_sink(std::function<void(const CycleReport&)> sink) {
    sink_ = std::move(sink);
  }

  const CalibDb& db() const { return db_; }

 private:
  void calibrate_qubit(int qubit, double now, CycleReport& report);
  void calibrate_pair(std::pair<int, int> pair, double now,
                      CycleReport& report);
  void flush_pending(CycleReport& report);
  void sleep_interruptible(double wall_seconds);

  DaemonConfig cfg_;
  Backend& backend_;
  ParamClient& params_;
  CalibDb db_;
  nlohmann::json device_info_;  // refreshed at each cycle start
  PulseLibrary vendor_lib_;
  int cycle_ = 0;
  int consecutive_failures_ = 0;
  std::map<std::pair<int, int>, CalibDb::ZxState> cr_state_;
  std::function<void(const CycleReport&)> sink_;
  struct PendingPut {
    std::string kind, key;
    nlohmann::json payload;
    double timestamp;
  };
  std::vector<PendingPut> pending_;
  std::atomic<bool> stop_{false};
};

}  // namespace squeeze

#endif  // SQUEEZE_DAEMON_HPP
