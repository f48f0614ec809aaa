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

#ifndef SQUEEZE_TRANSPILE_HPP
#define SQUEEZE_TRANSPILE_HPP

#include <set>
#include <string>
#include <vector>

#include "squeeze/circuit.hpp"
#include "squeeze/library.hpp"
#include "squeeze/pulse.hpp"

namespace squeeze {

// Compilation styles:
//   baseline  two-pulse U3, CNOT-only two-qubit gates, vendor pulses
//   gokhale   single amplitude-scaled 160-dt Rx, CNOT-only
//   squeeze   calibrated fast Rx plus direct Rzx
//   earnest   vendor pulses with direct Rzx (isolates the Rzx benefit)
enum class Mode { Baseline, Gokhale, Squeeze, Earnest };

Mode mode_from_string(const std::string& s);
std::string mode_name(Mode m);

enum class ToffoliVariant { Auto, A, B };

// How U3 unrolls: the five-gate two-pulse identity or the three-gate
// single-pulse identity.
enum class U3Style { TwoPulse, SinglePulse };

class RoutingError : public std::runtime_error {
 public:
  explicit RoutingError(const std::string& what) : std::runtime_error(what) {}
};

class CalibrationMissingError : public std::runtime_error {
 public:
  explicit CalibrationMissingError(const std::string& what)
      : std::runtime_error(what) {}
};

// Reduces an angle to (-pi, pi].
double normalize_angle(double a);

// U3(theta, phi, lambda) as Rz(lambda), SqrtX, Rz(theta+pi), SqrtX,
// Rz(phi+3pi): two physical pulses, three free rotations.
Circuit decompose_u3_baseline(double theta, double phi, double lambda);

// U3 as Rz(lambda-pi/2), Rx(theta), Rz(phi+pi/2): one physical pulse.
Circuit decompose_u3_squeeze(double theta, double phi, double lambda);

// The same three-gate identity; the modes differ in how the Rx pulse is
// realized, not in the gate algebra.
Circuit decompose_u3_gokhale(double theta, double phi, double lambda);

// Rx(-theta) as Rz(pi), Rx(theta), Rz(pi) for theta in (0, pi].
Circuit negative_rx(double theta);

// Rxx/Ryy/Rzz/CPhase built around exactly one Rzx(theta).
Circuit decompose_two_qubit_rotation(GateKind kind, double theta);

// The controlled theta/pi power of X (CNOT at theta=pi, C(sqrt X) at
// theta=pi/2) as Rx(theta/2) on target, Rzx(-theta/2), Rz(theta/2) on
// control.
Circuit decompose_csx(double theta);

// The five-interaction Toffoli built from C(sqrt X) blocks. Variant B
// swaps the final two gates, which commute; qubits are (control,
// control, target).
Circuit decompose_toffoli(char variant);

std::set<GateKind> basis_for_mode(Mode m);
U3Style u3_style_for_mode(Mode m);

// Rewrites every gate into the basis. Rotation angles are reduced to
// (-pi, pi] and negative Rx angles become the frame-conjugated positive
// form. Gates already in the basis pass through.
Circuit unroll(const Circuit& c, const std::set<GateKind>& basis,
               U3Style u3 = U3Style::SinglePulse);

struct RouteResult {
  Circuit circuit;
  // Physical home of each logical qubit after all inserted swaps.
  std::vector<int> final_layout;
  int swaps = 0;
};

// Greedy shortest-path swap insertion; each swap costs three CNOTs.
// Toffoli gates are expanded here so the variant with fewer swaps can
// be chosen when variant is Auto (ties prefer A).
RouteResult route(const Circuit& c, const CouplingMap& m,
                  ToffoliVariant variant = ToffoliVariant::Auto);

// Lowers a basis circuit to a pulse schedule using per-qubit time
// cursors. See the mode table in the README for the pulse sources.
Schedule attach_pulses(const Circuit& c, const PulseLibrary& lib, Mode mode);

struct TranspileResult {
  Schedule schedule;
  Circuit compiled;  // the routed basis circuit the schedule was built from
  std::vector<int> final_layout;
  int swaps = 0;
};

// Full pipeline. Baseline and gokhale unroll before routing; squeeze
// and earnest route first so Toffoli variant selection sees the native
// gate set.
TranspileResult transpile(const Circuit& c, const CouplingMap& m,
                          const PulseLibrary& lib, Mode mode,
                          ToffoliVariant variant = ToffoliVariant::Auto);

}  // namespace squeeze

#endif
