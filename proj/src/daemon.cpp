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

#include "squeeze/daemon.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

namespace squeeze {

std::optional<ParamRecord> StoreParamClient::fetch(const std::string& kind,
                                                   const std::string& key) {
  return store_.get(kind, key);
}

int64_t StoreParamClient::post(const std::string& kind, const std::string& key,
                               const nlohmann::json& payload,
                               double timestamp) {
  return store_.put(kind, key, payload, timestamp);
}

std::optional<ParamRecord> HttpParamClient::fetch(const std::string& kind,
                                                  const std::string& key) {
  return client_.get(kind, key);
}

int64_t HttpParamClient::post(const std::string& kind, const std::string& key,
                              const nlohmann::json& payload,
                              double timestamp) {
  return client_.put(kind, key, payload, timestamp);
}

nlohmann::json DaemonConfig::to_json() const {
  nlohmann::json pairs_json = nlohmann::json::array();
  for (const auto& [a, b] : pairs) pairs_json.push_back({a, b});
  return {{"db_dir", db_dir},
          {"cadence_seconds", cadence_seconds},
          {"calibrate_rx", calibrate_rx},
          {"calibrate_zx", calibrate_zx},
          {"qubits", qubits},
          {"pairs", pairs_json},
          {"sweep_shots", sweep_shots},
          {"validate_shots", validate_shots},
          {"particle_shots", particle_shots},
          {"seed", seed},
          {"time_factor", time_factor}};
}

DaemonConfig DaemonConfig::from_json(const nlohmann::json& j) {
  DaemonConfig c;
  c.db_dir = j.value("db_dir", c.db_dir);
  c.cadence_seconds = j.value("cadence_seconds", c.cadence_seconds);
  c.calibrate_rx = j.value("calibrate_rx", c.calibrate_rx);
  c.calibrate_zx = j.value("calibrate_zx", c.calibrate_zx);
  if (j.contains("qubits")) c.qubits = j.at("qubits").get<std::vector<int>>();
  if (j.contains("pairs"))
    for (const auto& p : j.at("pairs"))
      c.pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  c.sweep_shots = j.value("sweep_shots", c.sweep_shots);
  c.validate_shots = j.value("validate_shots", c.validate_shots);
  c.particle_shots = j.value("particle_shots", c.particle_shots);
  c.seed = j.value("seed", c.seed);
  c.time_factor = j.value("time_factor", c.time_factor);
  if (c.cadence_seconds <= 0)
    throw std::invalid_argument("cadence must be positive");
  if (c.sweep_shots <= 0 || c.validate_shots <= 0 || c.particle_shots <= 0)
    throw std::invalid_argument("shot budgets must be positive");
  return c;
}

CalibDb::CalibDb(const std::string& dir) : dir_(dir) {
  std::filesystem::create_directories(dir_);
}

std::string CalibDb::rx_path(int qubit) const {
  return dir_ + "/rx_q" + std::to_string(qubit) + ".jsonl";
}

std::string CalibDb::zx_path(int a, int b) const {
  return dir_ + "/zx_" + std::to_string(a) + "-" + std::to_string(b) +
         ".jsonl";
}

namespace {

void append_line(const std::string& path, const nlohmann::json& line) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + path);
  out << line.dump() << '\n';
}

}  // namespace

void CalibDb::append_rx(int qubit, const nlohmann::json& line) {
  append_line(rx_path(qubit), line);
}

void CalibDb::append_zx(int a, int b, const nlohmann::json& line) {
  append_line(zx_path(a, b), line);
}

void CalibDb::append_cycle(const nlohmann::json& line) {
  append_line(dir_ + "/cycles.jsonl", line);
}

std::vector<CalibSample> CalibDb::load_rx_samples(int qubit,
                                                  int64_t t0) const {
  std::vector<CalibSample> out;
  std::ifstream in(rx_path(qubit));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.value("kind", "") != "rx-sample") continue;
    if (t0 >= 0 && j.value("t0", int64_t{-1}) != t0) continue;
    out.push_back(CalibSample::from_json(j));
  }
  return out;
}

nlohmann::json particle_to_json(const Particle& p) {
  return {{"c", p.c},         {"k", p.k},
          {"weight", p.weight}, {"score", p.score},
          {"valid", p.valid}, {"baseline", p.baseline}};
}

Particle particle_from_json(const nlohmann::json& j) {
  Particle p;
  p.c = j.at("c").get<double>();
  p.k = j.at("k").get<double>();
  p.weight = j.value("weight", 0.0);
  p.score = j.value("score", 0.0);
  p.valid = j.value("valid", true);
  p.baseline = j.value("baseline", false);
  return p;
}

CalibDb::ZxState CalibDb::load_zx_state(int a, int b) const {
  ZxState st;
  std::ifstream in(zx_path(a, b));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    const std::string kind = j.value("kind", "");
    if (kind == "zx-gen") {
      st.particles.clear();
      for (const auto& pj : j.at("particles"))
        st.particles.push_back(particle_from_json(pj));
      st.generation = j.at("generation").get<int>();
      st.baseline_reset = false;
      st.have = true;
    } else if (kind == "zx-best") {
      if (j.value("generation", -1) == st.generation)
        st.baseline_reset = j.value("baseline_best", false);
    }
  }
  return st;
}

int CalibDb::last_cycle() const {
  std::ifstream in(dir_ + "/cycles.jsonl");
  std::string line;
  int last = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    last = std::max(last, j.value("cycle", -1));
  }
  return last;
}

nlohmann::json CycleReport::to_json() const {
  return {{"cycle", cycle},
          {"started", started},
          {"backend_ok", backend_ok},
          {"actions", actions},
          {"pending_puts", pending_puts}};
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t x = splitmix64(seed);
  x = splitmix64(x ^ a);
  x = splitmix64(x ^ b);
  return splitmix64(x ^ c);
}

std::string pair_key(std::pair<int, int> p) {
  return std::to_string(p.first) + "-" + std::to_string(p.second);
}

}  // namespace

Daemon::Daemon(DaemonConfig cfg, Backend& backend, ParamClient& params)
    : cfg_(std::move(cfg)),
      backend_(backend),
      params_(params),
      db_(cfg_.db_dir) {
  cycle_ = db_.last_cycle() + 1;
}

void Daemon::flush_pending(CycleReport& report) {
  std::vector<PendingPut> still;
  for (PendingPut& p : pending_) {
    try {
      params_.post(p.kind, p.key, p.payload, p.timestamp);
      report.actions.push_back(
          {{"kind", p.kind}, {"key", p.key}, {"retried", true}});
    } catch (const std::exception&) {
      still.push_back(std::move(p));
    }
  }
  pending_ = std::move(still);
}

void Daemon::calibrate_qubit(int qubit, double now, CycleReport& report) {
  nlohmann::json action = {{"kind", "rx"}, {"qubit", qubit}};
  try {
    const DragPulse* vendor = vendor_lib_.find_vendor_x(qubit);
    if (vendor == nullptr)
      throw CalibrationInfeasibleError("device has no x pulse for qubit " +
                                       std::to_string(qubit));
    SweepResult sweep =
        sweep_fastest_x(backend_, qubit, vendor->beta, cfg_.sweep_shots);
    double ts = sweep.samples.empty() ? now : sweep.samples.back().ts;
    db_.append_rx(qubit, {{"kind", "rx-meta"},
                          {"ts", ts},
                          {"cycle", cycle_},
                          {"t0", sweep.t0},
                          {"a0", sweep.a0}});
    for (const CalibSample& s : sweep.samples) {
      nlohmann::json line = s.to_json();
      line["kind"] = "rx-sample";
      line["t0"] = sweep.t0;
      db_.append_rx(qubit, line);
    }
    std::vector<CalibSample> history =
        db_.load_rx_samples(qubit, sweep.t0);
    OutlierResult clean = remove_outliers(history);
    std::vector<AveragedPoint> points = trailing_average(clean.samples, ts);
    SinFit fit = fit_sin2(points);
    RxEntry candidate;
    candidate.fit = fit;
    candidate.a0 = sweep.a0;
    candidate.t0 = sweep.t0;
    candidate.ts = ts;
    candidate.x_pulse =
        DragPulse(amplitude_for_theta(fit, 3.14159265358979323846), sweep.t0,
                  static_cast<double>(sweep.t0) / 4.0, vendor->beta);
    RxEntry incumbent;
    const std::string key = std::to_string(qubit);
    if (auto rec = params_.fetch("rx", key); rec.has_value())
      incumbent = RxEntry::from_json(rec->payload);
    else
      incumbent = ideal_rx_entry(*vendor);
    bool accepted =
        validate_rx(candidate, incumbent, backend_, qubit, cfg_.validate_shots);
    db_.append_rx(qubit, {{"kind", "rx-fit"},
                          {"ts", ts},
                          {"cycle", cycle_},
                          {"t0", sweep.t0},
                          {"fit", fit.to_json()},
                          {"accepted", accepted}});
    action["t0"] = sweep.t0;
    action["a0"] = sweep.a0;
    action["accepted"] = accepted;
    if (accepted) {
      try {
        params_.post("rx", key, candidate.to_json(), ts);
        action["posted"] = true;
      } catch (const std::exception& e) {
        pending_.push_back({"rx", key, candidate.to_json(), ts});
        action["posted"] = false;
        action["pending"] = e.what();
      }
    }
  } catch (const std::exception& e) {
    action["error"] = e.what();
  }
  report.actions.push_back(std::move(action));
}

void Daemon::calibrate_pair(std::pair<int, int> pair, double now,
                            CycleReport& report) {
  nlohmann::json action = {{"kind", "zx"}, {"key", pair_key(pair)}};
  try {
    const GaussianSquarePulse* base =
        vendor_lib_.find_vendor_cr(pair.first, pair.second);
    if (base == nullptr)
      throw CalibrationInfeasibleError("device has no CR channel for pair " +
                                       pair_key(pair));
    auto& st = cr_state_[pair];
    if (!st.have) st = db_.load_zx_state(pair.first, pair.second);
    std::vector<Particle> gen;
    int generation = 0;
    if (!st.have) {
      gen = initial_particle_grid();
    } else {
      generation = st.generation + 1;
      if (st.baseline_reset) {
        gen = initial_particle_grid();
      } else {
        std::mt19937_64 rng(
            mix_seed(cfg_.seed, static_cast<uint64_t>(pair.first),
                     static_cast<uint64_t>(pair.second),
                     static_cast<uint64_t>(st.generation)));
        gen = particle_filter_round(st.particles, rng);
      }
    }
    score_particles(gen, pair, backend_, cfg_.particle_shots);
    double baseline_score = 0.0;
    const Particle* best = nullptr;
    for (const Particle& p : gen) {
      if (p.baseline) {
        baseline_score = p.score;
      } else if (p.valid && (best == nullptr || p.score > best->score)) {
        best = &p;
      }
    }
    bool baseline_best = best == nullptr || baseline_score > best->score;
    bool accepted = best != nullptr && best->score > baseline_score;
    nlohmann::json particles = nlohmann::json::array();
    for (const Particle& p : gen) particles.push_back(particle_to_json(p));
    db_.append_zx(pair.first, pair.second,
                  {{"kind", "zx-gen"},
                   {"cycle", cycle_},
                   {"generation", generation},
                   {"particles", particles}});
    db_.append_zx(pair.first, pair.second,
                  {{"kind", "zx-best"},
                   {"cycle", cycle_},
                   {"generation", generation},
                   {"c", best != nullptr ? best->c : 1.0},
                   {"k", best != nullptr ? best->k : 1.0},
                   {"score", best != nullptr ? best->score : 0.0},
                   {"baseline_score", baseline_score},
                   {"baseline_best", baseline_best},
                   {"accepted", accepted}});
    action["generation"] = generation;
    action["baseline_score"] = baseline_score;
    action["accepted"] = accepted;
    if (best != nullptr) {
      action["best_c"] = best->c;
      action["best_k"] = best->k;
      action["best_score"] = best->score;
    }
    if (accepted) {
      ZxEntry entry;
      entry.cr = *base;
      entry.c = best->c;
      entry.k = best->k;
      entry.ts = now;
      const std::string key = pair_key(pair);
      try {
        params_.post("zx", key, entry.to_json(), now);
        action["posted"] = true;
      } catch (const std::exception& e) {
        pending_.push_back({"zx", key, entry.to_json(), now});
        action["posted"] = false;
        action["pending"] = e.what();
      }
    }
    st.particles = std::move(gen);
    st.generation = generation;
    st.baseline_reset = baseline_best;
    st.have = true;
  } catch (const std::exception& e) {
    action["error"] = e.what();
  }
  report.actions.push_back(std::move(action));
}

CycleReport Daemon::run_cycle() {
  CycleReport report;
  report.cycle = cycle_;
  try {
    device_info_ = backend_.device_info();
    vendor_lib_ = vendor_library(device_info_);
  } catch (const std::exception& e) {
    report.backend_ok = false;
    report.actions.push_back(
        {{"error", std::string("backend unreachable, cycle skipped: ") +
                       e.what()}});
    report.pending_puts = static_cast<int>(pending_.size());
    try {
      db_.append_cycle(report.to_json());
    } catch (const std::exception&) {
    }
    if (sink_) sink_(report);
    ++cycle_;
    return report;
  }
  report.started = device_info_.value("clock", 0.0);
  flush_pending(report);
  if (cfg_.calibrate_rx) {
    std::vector<int> qubits = cfg_.qubits;
    if (qubits.empty()) {
      int n = device_info_.at("n_qubits").get<int>();
      for (int q = 0; q < n; ++q) qubits.push_back(q);
    }
    for (int q : qubits) calibrate_qubit(q, report.started, report);
  }
  if (cfg_.calibrate_zx) {
    std::vector<std::pair<int, int>> pairs = cfg_.pairs;
    if (pairs.empty())
      for (const auto& [key, pulse] : vendor_lib_.vendor_cr)
        pairs.push_back(key);
    for (const auto& p : pairs) calibrate_pair(p, report.started, report);
  }
  report.pending_puts = static_cast<int>(pending_.size());
  db_.append_cycle(report.to_json());
  if (sink_) sink_(report);
  ++cycle_;
  return report;
}

void Daemon::sleep_interruptible(double wall_seconds) {
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(wall_seconds);
  while (!stop_.load() && std::chrono::steady_clock::now() < deadline)
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
}

void Daemon::run_forever() {
  while (!stop_.load()) {
    CycleReport report = run_cycle();
    if (report.backend_ok) {
      consecutive_failures_ = 0;
    } else {
      ++consecutive_failures_;
    }
    if (stop_.load()) break;
    // Healthy cycles wait a full cadence; failures retry sooner, backing
    // off 30 s, 60 s, ... up to the cadence.
    double wait =
        report.backend_ok
            ? cfg_.cadence_seconds
            : std::min(cfg_.cadence_seconds,
                       30.0 * std::pow(2.0, consecutive_failures_ - 1));
    if (cfg_.time_factor > 0) {
      try {
        backend_.advance_time(wait);
      } catch (const std::exception&) {
      }
      sleep_interruptible(wait / cfg_.time_factor);
    } else {
      sleep_interruptible(wait);
    }
  }
}

}  // namespace squeeze
