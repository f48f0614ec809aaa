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

#include <cmath>
#include <complex>
#include <fstream>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "squeeze/transpile.hpp"

using namespace squeeze;
using std::complex;

namespace {

const complex<double> kI(0.0, 1.0);

double dist(const Circuit& c, const Eigen::MatrixXcd& want) {
  return distance_up_to_global_phase(circuit_unitary(c), want);
}

// Global little-endian unitary of a single gate, so oracles live in the
// same basis circuit_unitary uses.
Eigen::MatrixXcd embedded(GateKind kind, std::vector<int> qubits,
                          std::vector<double> params = {}) {
  int n = 0;
  for (int q : qubits) n = std::max(n, q + 1);
  Circuit c(n);
  c.add(kind, std::move(qubits), std::move(params));
  return circuit_unitary(c);
}

Eigen::MatrixXcd u3_matrix(double theta, double phi, double lambda) {
  return gate_unitary({GateKind::U3, {0}, {theta, phi, lambda}});
}

// diag(I, X^(theta/pi)): the controlled fractional-X family, built from
// the spectral decomposition of X as an independent oracle.
Eigen::MatrixXcd controlled_x_power(double theta) {
  Eigen::Matrix2cd h = gate_unitary({GateKind::H, {0}, {}});
  Eigen::Matrix2cd z = Eigen::Matrix2cd::Identity();
  z(1, 1) = std::exp(kI * theta);
  Eigen::Matrix2cd xp = h * z * h;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  u(0, 0) = 1.0;
  u(2, 2) = 1.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) u(1 + 2 * r, 1 + 2 * c) = xp(r, c);
  return u;
}

int two_qubit_gate_count(const Circuit& c) {
  int n = 0;
  for (const auto& g : c.gates())
    if (gate_arity(g.kind) == 2) ++n;
  return n;
}

// Permutation unitary that scatters logical bit i to physical bit
// layout[i], for checking routed circuits against the logical unitary.
Eigen::MatrixXcd layout_permutation(const std::vector<int>& layout) {
  int n = static_cast<int>(layout.size());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
  for (int x = 0; x < (1 << n); ++x) {
    int y = 0;
    for (int i = 0; i < n; ++i)
      if ((x >> i) & 1) y |= 1 << layout[i];
    p(y, x) = 1.0;
  }
  return p;
}

PulseLibrary lima_vendor_library() {
  std::ifstream in(std::string(SQUEEZE_DATA_DIR) + "/device_lima.json");
  REQUIRE(in);
  return vendor_library(nlohmann::json::parse(in));
}

CouplingMap lima_coupling() {
  CouplingMap m;
  m.edges = {{0, 1}, {1, 2}, {1, 3}, {3, 4}};
  return m;
}

}  // namespace

TEST_SUITE("transpile") {

TEST_CASE("normalize_angle maps onto (-pi, pi]") {
  CHECK(normalize_angle(0.0) == doctest::Approx(0.0));
  CHECK(normalize_angle(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(normalize_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(normalize_angle(2 * M_PI + 0.5) == doctest::Approx(0.5));
  CHECK(normalize_angle(-7.0) ==
        doctest::Approx(-7.0 + 2 * M_PI).epsilon(1e-12));
}

TEST_CASE("baseline u3 decomposition reproduces the gate") {
  CHECK(dist(decompose_u3_baseline(0, 0, 0),
             Eigen::MatrixXcd::Identity(2, 2)) < 1e-9);
  CHECK(dist(decompose_u3_baseline(M_PI, 0, M_PI),
             gate_unitary({GateKind::X, {0}, {}})) < 1e-9);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> a(-M_PI, M_PI);
  for (int i = 0; i < 100; ++i) {
    double th = a(rng), ph = a(rng), la = a(rng);
    Circuit c = decompose_u3_baseline(th, ph, la);
    CHECK(dist(c, u3_matrix(th, ph, la)) < 1e-9);
    // Exactly two physical pulses; everything else is a frame change.
    int pulses = 0;
    for (const auto& g : c.gates())
      if (g.kind == GateKind::SqrtX) ++pulses;
    CHECK(pulses == 2);
  }
}

TEST_CASE("single-pulse u3 decompositions reproduce the gate") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> a(-M_PI, M_PI);
  for (int i = 0; i < 100; ++i) {
    double th = a(rng), ph = a(rng), la = a(rng);
    Eigen::MatrixXcd want = u3_matrix(th, ph, la);
    Circuit sq = decompose_u3_squeeze(th, ph, la);
    Circuit gk = decompose_u3_gokhale(th, ph, la);
    CHECK(dist(sq, want) < 1e-9);
    CHECK(dist(gk, want) < 1e-9);
    int rx = 0;
    for (const auto& g : sq.gates())
      if (g.kind == GateKind::Rx) ++rx;
    CHECK(rx == 1);
  }
}

TEST_CASE("negative rx via frame conjugation") {
  CHECK(dist(negative_rx(M_PI), gate_unitary({GateKind::Rx, {0}, {-M_PI}})) <
        1e-9);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> a(1e-6, M_PI);
  for (int i = 0; i < 50; ++i) {
    double th = a(rng);
    CHECK(dist(negative_rx(th), gate_unitary({GateKind::Rx, {0}, {-th}})) <
          1e-9);
  }
  CHECK_THROWS_AS(negative_rx(0.0), std::domain_error);
  CHECK_THROWS_AS(negative_rx(-0.5), std::domain_error);
  CHECK_THROWS_AS(negative_rx(M_PI + 0.1), std::domain_error);
}

TEST_CASE("two-qubit rotations wrap exactly one rzx") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> a(-M_PI, M_PI);

  CHECK(dist(decompose_two_qubit_rotation(GateKind::Rzz, 0.0),
             Eigen::MatrixXcd::Identity(4, 4)) < 1e-9);

  for (auto kind :
       {GateKind::Rxx, GateKind::Ryy, GateKind::Rzz, GateKind::CPhase}) {
    for (int i = 0; i < 20; ++i) {
      double th = a(rng);
      Circuit c = decompose_two_qubit_rotation(kind, th);
      CHECK(dist(c, embedded(kind, {0, 1}, {th})) < 1e-9);
      int rzx = 0;
      for (const auto& g : c.gates())
        if (g.kind == GateKind::Rzx) ++rzx;
      CHECK(rzx == 1);
    }
  }
}

TEST_CASE("controlled fractional x family") {
  CHECK(dist(decompose_csx(M_PI), embedded(GateKind::Cnot, {0, 1})) < 1e-9);
  CHECK(dist(decompose_csx(M_PI / 2), embedded(GateKind::CSqrtX, {0, 1})) <
        1e-9);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> a(-M_PI, M_PI);
  for (int i = 0; i < 20; ++i) {
    double th = a(rng);
    CHECK(dist(decompose_csx(th), controlled_x_power(th)) < 1e-9);
  }
}

TEST_CASE("both toffoli variants use five interactions") {
  Eigen::MatrixXcd want = embedded(GateKind::Toffoli, {0, 1, 2});
  for (char variant : {'A', 'B'}) {
    Circuit c = decompose_toffoli(variant);
    CHECK(dist(c, want) < 1e-9);
    CHECK(two_qubit_gate_count(c) == 5);
  }
  CHECK_THROWS_AS(decompose_toffoli('C'), std::invalid_argument);
}

TEST_CASE("unroll lands in the requested basis and keeps the unitary") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> a(-M_PI, M_PI);

  Circuit h(1);
  h.add(GateKind::H, {0});
  Circuit hh = unroll(h, basis_for_mode(Mode::Squeeze));
  CHECK(dist(hh, gate_unitary({GateKind::H, {0}, {}})) < 1e-9);

  Circuit c(3);
  c.add(GateKind::U3, {0}, {a(rng), a(rng), a(rng)});
  c.add(GateKind::Toffoli, {0, 1, 2});
  c.add(GateKind::Ryy, {1, 2}, {a(rng)});
  c.add(GateKind::CPhase, {0, 2}, {a(rng)});
  c.add(GateKind::T, {1});
  c.add(GateKind::Rx, {2}, {-1.2});
  Eigen::MatrixXcd want = circuit_unitary(c);

  for (Mode m : {Mode::Baseline, Mode::Gokhale, Mode::Squeeze}) {
    Circuit u = unroll(c, basis_for_mode(m), u3_style_for_mode(m));
    for (const auto& g : u.gates()) {
      CHECK(basis_for_mode(m).count(g.kind) == 1);
      // Negative Rx angles were rewritten away.
      if (g.kind == GateKind::Rx) CHECK(g.params[0] >= 0.0);
    }
    CHECK(dist(u, want) < 1e-9);
  }
}

TEST_CASE("unroll leaves a compliant circuit unchanged") {
  Circuit c(2);
  c.add(GateKind::Rz, {0}, {0.3});
  c.add(GateKind::Rx, {1}, {1.1});
  c.add(GateKind::Cnot, {0, 1});
  Circuit u = unroll(c, basis_for_mode(Mode::Baseline));
  REQUIRE(u.gates().size() == 3);
  CHECK(u.gates()[0].kind == GateKind::Rz);
  CHECK(u.gates()[2].kind == GateKind::Cnot);
}

TEST_CASE("route keeps compliant circuits intact") {
  Circuit c(3);
  c.add(GateKind::Cnot, {0, 1});
  c.add(GateKind::Rx, {2}, {0.4});
  CouplingMap line;
  line.edges = {{0, 1}, {1, 2}};
  RouteResult r = route(c, line);
  CHECK(r.swaps == 0);
  CHECK(r.final_layout == std::vector<int>{0, 1, 2});
  CHECK(r.circuit.gates().size() == 2);
}

TEST_CASE("route inserts one swap for a next-neighbour gate") {
  Circuit c(3);
  c.add(GateKind::Cnot, {0, 2});
  CouplingMap line;
  line.edges = {{0, 1}, {1, 2}};
  RouteResult r = route(c, line);
  CHECK(r.swaps == 1);

  Eigen::MatrixXcd logical = circuit_unitary(c);
  Eigen::MatrixXcd routed = circuit_unitary(r.circuit);
  Eigen::MatrixXcd p = layout_permutation(r.final_layout);
  CHECK(distance_up_to_global_phase(routed, p * logical) < 1e-9);
}

TEST_CASE("routing a random circuit preserves the permuted unitary") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> a(-M_PI, M_PI);
  std::uniform_int_distribution<int> pick(0, 3);
  CouplingMap t = lima_coupling();
  for (int trial = 0; trial < 20; ++trial) {
    Circuit c(4);
    for (int g = 0; g < 6; ++g) {
      int q0 = pick(rng), q1 = pick(rng);
      if (q0 == q1) {
        c.add(GateKind::Rx, {q0}, {std::abs(a(rng))});
      } else {
        c.add(GateKind::Cnot, {q0, q1});
      }
    }
    RouteResult r = route(c, t);
    Eigen::MatrixXcd p = layout_permutation(r.final_layout);
    CHECK(distance_up_to_global_phase(circuit_unitary(r.circuit),
                                      p * circuit_unitary(c)) < 1e-9);
  }
}

TEST_CASE("auto toffoli variant is never worse than either fixed one") {
  // Place the toffoli so its operands straddle the T junction.
  Circuit c(5);
  c.add(GateKind::Toffoli, {0, 2, 4});
  CouplingMap t = lima_coupling();
  int swaps_a = route(c, t, ToffoliVariant::A).swaps;
  int swaps_b = route(c, t, ToffoliVariant::B).swaps;
  int swaps_auto = route(c, t, ToffoliVariant::Auto).swaps;
  CHECK(swaps_auto == std::min(swaps_a, swaps_b));

  RouteResult r = route(c, t, ToffoliVariant::Auto);
  Eigen::MatrixXcd p = layout_permutation(r.final_layout);
  Circuit u = unroll(r.circuit, basis_for_mode(Mode::Squeeze));
  CHECK(distance_up_to_global_phase(circuit_unitary(u),
                                    p * circuit_unitary(c)) < 1e-9);
}

TEST_CASE("routing fails on disconnected hardware") {
  Circuit c(2);
  c.add(GateKind::Cnot, {0, 1});
  CouplingMap none;
  CHECK_THROWS_AS(route(c, none), RoutingError);
}

TEST_CASE("baseline cnot schedule has the frozen echo timing") {
  PulseLibrary lib = lima_vendor_library();
  Circuit c(5);
  c.add(GateKind::Cnot, {0, 1});
  // 160 (target pre-rotation) + 448 (CR+) + 160 (echo X) + 448 (CR-)
  // + 160 (closing X) on the lima (0,1) pair.
  Schedule s = attach_pulses(c, lib, Mode::Baseline);
  CHECK(schedule_duration(s) == 1376);
}

TEST_CASE("cnot-basis rzx matches the documented schedule length") {
  PulseLibrary lib = lima_vendor_library();
  CouplingMap t = lima_coupling();
  Circuit c(5);
  c.add(GateKind::Rzx, {0, 1}, {M_PI / 4});
  // Baseline rewrites rzx through two cnots plus basis changes: the
  // schedule costs two echoed cnots plus two 160 dt frame pulses.
  auto r = transpile(c, t, lib, Mode::Baseline);
  CHECK(schedule_duration(r.schedule) == 3072);
}

TEST_CASE("attach rejects non-basis gates") {
  PulseLibrary lib = lima_vendor_library();
  Circuit c(5);
  c.add(GateKind::Rzx, {0, 1}, {0.5});
  CHECK_THROWS_AS(attach_pulses(c, lib, Mode::Baseline), UnsupportedGateError);
  Circuit h(5);
  h.add(GateKind::H, {0});
  CHECK_THROWS_AS(attach_pulses(h, lib, Mode::Squeeze), UnsupportedGateError);
}

TEST_CASE("squeeze mode requires calibrated entries") {
  PulseLibrary lib = lima_vendor_library();
  Circuit c(5);
  c.add(GateKind::Rx, {0}, {0.8});
  CHECK_THROWS_AS(attach_pulses(c, lib, Mode::Squeeze),
                  CalibrationMissingError);
  lib.rx[0] = ideal_rx_entry(lib.vendor_x.at(0));
  Schedule s = attach_pulses(c, lib, Mode::Squeeze);
  CHECK(schedule_duration(s) == 160);
}

TEST_CASE("earnest rzx uses the scaled vendor pair directly") {
  PulseLibrary lib = lima_vendor_library();
  Circuit c(5);
  c.add(GateKind::Rzx, {0, 1}, {M_PI / 2});
  Schedule s = attach_pulses(c, lib, Mode::Earnest);
  // At theta = pi/2 the scaled pulses equal the vendor CR: two CRs plus
  // two echo X pulses.
  CHECK(schedule_duration(s) == 2 * 448 + 2 * 160);
  int gs = 0;
  for (const auto& in : s.instructions())
    if (std::holds_alternative<GaussianSquarePulse>(in.payload)) ++gs;
  CHECK(gs == 2);
}

TEST_CASE("transpile produces measured qubits in logical order") {
  PulseLibrary lib = lima_vendor_library();
  CouplingMap t = lima_coupling();
  Circuit c(5);
  c.add(GateKind::Cnot, {0, 2});
  c.add(GateKind::Measure, {0});
  c.add(GateKind::Measure, {2});
  auto r = transpile(c, t, lib, Mode::Baseline);
  REQUIRE(r.schedule.measured().size() == 2);
  CHECK(r.schedule.measured()[0] == r.final_layout[0]);
  CHECK(r.schedule.measured()[1] == r.final_layout[2]);
}

TEST_CASE("mode names roundtrip") {
  for (Mode m : {Mode::Baseline, Mode::Gokhale, Mode::Squeeze, Mode::Earnest})
    CHECK(mode_from_string(mode_name(m)) == m);
  CHECK_THROWS_AS(mode_from_string("fancy"), std::invalid_argument);
}

}  // TEST_SUITE
