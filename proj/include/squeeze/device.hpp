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

#ifndef SQUEEZE_DEVICE_HPP
#define SQUEEZE_DEVICE_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "squeeze/circuit.hpp"
#include "squeeze/pulse.hpp"

namespace squeeze {

class DeviceError : public std::runtime_error {
 public:
  explicit DeviceError(const std::string& what) : std::runtime_error(what) {}
};

class BatchLimitError : public std::runtime_error {
 public:
  explicit BatchLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

struct QubitModel {
  DragPulse vendor_x;  // the advertised 160-dt pi pulse
  double gain = 1.0;   // hidden truth, drifts
  double p01 = 0.0;    // P(read 1 | state 0)
  double p10 = 0.0;    // P(read 0 | state 1)

  // Pulse area that rotates by exactly pi at gain 1.
  double ref_area() const { return drag_area(vendor_x); }
};

struct PairModel {
  GaussianSquarePulse vendor_cr;  // the advertised CR(pi/4) pulse
  double gain = 1.0;

  // Pulse area that rotates ZX by exactly pi/4 at gain 1.
  double cref() const { return gs_area(vendor_cr); }
};

struct DriftParams {
  double sigma = 0.01;         // stationary gain standard deviation
  double tau_seconds = 43200;  // mean-reversion time constant
};

struct JobRequest {
  std::vector<Schedule> schedules;
  int shots = 1024;
};

struct JobResult {
  std::vector<std::map<std::string, int64_t>> counts;
  double completed_at = 0.0;  // backend clock seconds
};

constexpr int kMaxSchedulesPerJob = 100;

// The hidden ground truth of the simulated device. The drive model is a
// rotating-frame linear map: a drive pulse of area a on qubit q applies
// Rx(pi * gain_q * a / ref_q); a CR pulse of area a and sign s on pair
// (c, t) applies Rzx(s * (pi/4) * gain_ct * a / cref_ct); frame changes
// apply exact Rz. Depolarization strikes each pulsed qubit independently
// with probability 1 - exp(-lambda_dep * duration).
class DeviceModel {
 public:
  int n_qubits = 0;
  CouplingMap coupling;
  std::vector<QubitModel> qubits;
  std::map<std::pair<int, int>, PairModel> pairs;
  double lambda_dep = 0.0;  // per dt of pulse on an acted qubit
  DriftParams drift;
  double queue_delay = 0.0;  // seconds of simulated wait per submission
  uint64_t seed = 1;

  double clock = 0.0;  // simulated seconds
  std::mt19937_64 rng;

  static DeviceModel from_json(const nlohmann::json& j);

  // Public calibration data only: vendor pulses, coupling, clock. Never
  // exposes gains, confusion, or noise parameters.
  nlohmann::json vendor_info() const;

  // Ornstein-Uhlenbeck gain drift, discretized at 60-second steps with a
  // partial-step accumulator. Mean 1.0.
  void advance_clock(double seconds);

 private:
  double drift_accum_ = 0.0;
};

// Noiseless statevector of a schedule from |0...0> over all device
// qubits, little-endian.
Eigen::VectorXcd evolve_noiseless(const Schedule& s, const DeviceModel& d);

// One stochastic trajectory when noiseless is false (consumes device rng).
Eigen::VectorXcd evolve(const Schedule& s, DeviceModel& d, bool noiseless);

// Full unitary of a schedule's pulse sequence (no noise), for oracle
// comparison against circuit unitaries. Limited to 5 device qubits.
Eigen::MatrixXcd schedule_unitary(const Schedule& s, const DeviceModel& d);

// Exact Born distribution over the schedule's measured qubits (all
// qubits when none are marked), noiseless, confusion-free.
std::map<std::string, double> exact_distribution(const Schedule& s,
                                                 const DeviceModel& d);

class Backend {
 public:
  virtual ~Backend() = default;
  virtual JobResult submit(const JobRequest& req) = 0;
  virtual nlohmann::json device_info() = 0;
  virtual void advance_time(double seconds) = 0;
};

// In-process backend. Submissions are serialized FIFO by a mutex;
// concurrent submitters are safe and execute in arrival order.
class SimBackend : public Backend {
 public:
  explicit SimBackend(DeviceModel model) : model_(std::move(model)) {}

  JobResult submit(const JobRequest& req) override;
  nlohmann::json device_info() override;
  void advance_time(double seconds) override;

  // Test access to the hidden truth. Not synchronized; use only while no
  // submission is in flight.
  DeviceModel& model() { return model_; }

 private:
  std::mutex mu_;
  DeviceModel model_;
};

}  // namespace squeeze

#endif
