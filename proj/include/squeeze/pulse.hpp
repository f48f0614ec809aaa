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

#ifndef SQUEEZE_PULSE_HPP
#define SQUEEZE_PULSE_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "json.hpp"

namespace squeeze {

// All times are in dt, the discrete scheduling unit of the backend
// (1 dt = 0.22 ns; the conversion is reporting-only and never enters
// any computation).
constexpr double kDtNanoseconds = 0.22;

// Pulse durations and start times snap to this grid.
constexpr int64_t kDtAlign = 16;

// Single-qubit drive envelope: a Gaussian lifted to zero at the pulse
// edges plus beta times its derivative on the quadrature component.
struct DragPulse {
  double amp = 0.0;     // peak amplitude, in [0, 1]
  int64_t duration = 0; // dt, positive multiple of 16
  double sigma = 0.0;   // dt
  double beta = 0.0;    // derivative coefficient

  DragPulse() = default;
  DragPulse(double amp, int64_t duration, double sigma, double beta);
};

// Flat-top envelope with Gaussian rise/fall flanks, used for the
// cross-resonance drives. The amplitude is stored as a magnitude plus
// a discrete sign for the +- halves of the echo sequence.
struct GaussianSquarePulse {
  double amp = 0.0;     // flat-top magnitude, in (0, 1]
  double width = 0.0;   // flat-top length, dt, in [0, duration]
  int64_t duration = 0; // dt, positive multiple of 16
  double sigma = 0.0;   // dt
  int sign = +1;        // +1 or -1, the echo phase tag

  GaussianSquarePulse() = default;
  GaussianSquarePulse(double amp, double width, int64_t duration, double sigma,
                      int sign = +1);

  double n_sigma() const { return (static_cast<double>(duration) - width) / sigma; }
};

struct Channel {
  enum class Kind { Drive, Control };
  Kind kind = Kind::Drive;
  int q0 = 0; // drive qubit, or control-pair first qubit
  int q1 = -1; // control-pair second qubit, -1 for drive channels

  static Channel drive(int qubit) { return Channel{Kind::Drive, qubit, -1}; }
  static Channel control(int control, int target) {
    return Channel{Kind::Control, control, target};
  }
  bool operator==(const Channel&) const = default;
  bool operator<(const Channel& o) const {
    return std::tie(kind, q0, q1) < std::tie(o.kind, o.q0, o.q1);
  }
  std::string str() const;
};

// Zero-duration virtual Rz applied by rotating the drive frame.
struct FrameChange {
  double angle = 0.0;
};

struct Barrier {};

using InstructionPayload =
    std::variant<DragPulse, GaussianSquarePulse, FrameChange, Barrier>;

struct Instruction {
  Channel channel;
  int64_t t0 = 0; // start time, dt
  InstructionPayload payload;

  int64_t duration() const;
  bool is_pulse() const {
    return std::holds_alternative<DragPulse>(payload) ||
           std::holds_alternative<GaussianSquarePulse>(payload);
  }
};

// A timed sequence of instructions. Instructions on the same channel
// must not overlap; frame changes take zero time.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(int n_qubits) : n_qubits_(n_qubits) {}

  // Appends an instruction, rejecting same-channel overlap.
  void add(Channel ch, int64_t t0, InstructionPayload payload);

  int64_t duration() const;
  const std::vector<Instruction>& instructions() const { return instructions_; }
  std::vector<Channel> channels() const;

  int n_qubits() const { return n_qubits_; }
  void set_n_qubits(int n) { n_qubits_ = n; }

  // Qubits whose outcomes appear in sampled counts, in readout order.
  const std::vector<int>& measured() const { return measured_; }
  void mark_measured(int qubit);

  nlohmann::json to_json() const;
  static Schedule from_json(const nlohmann::json& j);

 private:
  int n_qubits_ = 0;
  std::vector<Instruction> instructions_;
  std::vector<int> measured_;
};

// Area under the flat-top envelope per the closed form
// F = |A| * (w + sqrt(2*pi) * sigma * erf(n_sigma)).
double gs_area(const GaussianSquarePulse& p);

// The same closed form on raw parameters, for callers that reason about
// scalings before a pulse object exists.
double gs_area_params(double amp, double width, double duration, double sigma);

// Analytic area under the DRAG in-phase envelope.
double drag_area(const DragPulse& p);
double drag_area_params(double amp, double duration, double sigma);

// Complex envelope sample at time t in [0, duration]; throws
// std::domain_error outside that range.
std::complex<double> envelope_at(const DragPulse& p, double t);
std::complex<double> envelope_at(const GaussianSquarePulse& p, double t);

// Floors to the 16-dt grid with a 16-dt minimum; throws
// std::domain_error for raw <= 0.
int64_t quantize_duration(double raw);

int64_t schedule_duration(const Schedule& s);

}  // namespace squeeze

#endif
