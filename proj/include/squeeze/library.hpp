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

#ifndef SQUEEZE_LIBRARY_HPP
#define SQUEEZE_LIBRARY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "json.hpp"
#include "squeeze/pulse.hpp"

namespace squeeze {

// Parameters of the excited-state population model
// p1(A) = a1 * sin^2(omega * A + phi) + delta.
struct SinFit {
  double a1 = 1.0;
  double omega = 0.0;
  double phi = 0.0;
  double delta = 0.0;
  double residual = 0.0;  // sum of squared residuals at the solution
  bool degenerate = false;

  nlohmann::json to_json() const;
  static SinFit from_json(const nlohmann::json& j);
};

// Accepted single-qubit calibration: the fastest pi pulse found plus the
// fitted amplitude response it was derived from.
struct RxEntry {
  DragPulse x_pulse;  // DRAG(a0, t0, t0/4, beta)
  double a0 = 0.0;
  int64_t t0 = 0;
  SinFit fit;
  double ts = 0.0;  // backend clock seconds at acceptance

  nlohmann::json to_json() const;
  static RxEntry from_json(const nlohmann::json& j);
};

// Accepted pair calibration: the vendor CR pulse the scalings apply to
// and the winning (c, k) scaling factors.
struct ZxEntry {
  GaussianSquarePulse cr;
  double c = 1.0;
  double k = 1.0;
  double ts = 0.0;

  nlohmann::json to_json() const;
  static ZxEntry from_json(const nlohmann::json& j);
};

// Everything the transpiler needs to attach pulses: vendor defaults for
// every qubit/pair plus whatever calibrated entries currently exist.
struct PulseLibrary {
  std::map<int, DragPulse> vendor_x;
  std::map<std::pair<int, int>, GaussianSquarePulse> vendor_cr;
  std::map<int, RxEntry> rx;
  std::map<std::pair<int, int>, ZxEntry> zx;

  const DragPulse* find_vendor_x(int q) const;
  const GaussianSquarePulse* find_vendor_cr(int c, int t) const;
  const RxEntry* find_rx(int q) const;
  const ZxEntry* find_zx(int c, int t) const;

  nlohmann::json to_json() const;
  static PulseLibrary from_json(const nlohmann::json& j);
};

// Builds the vendor half of a library from a backend's public device
// description: {qubits: [{x: ...}], pairs: [{control, target, cr: ...}]}.
PulseLibrary vendor_library(const nlohmann::json& device_info);

// The response curve a perfectly linear qubit would produce for a pi
// pulse of amplitude a0: p1(A) = sin^2(pi A / (2 a0)).
SinFit ideal_fit(double a0);

// Library entry treating the given pulse as an exact pi rotation.
RxEntry ideal_rx_entry(const DragPulse& x_pulse, double ts = 0.0);

}  // namespace squeeze

#endif
