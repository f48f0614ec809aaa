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
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "squeeze/pulse.hpp"

using namespace squeeze;

namespace {

// Trapezoidal integral of an envelope magnitude, used as an independent
// oracle for the closed-form areas.
template <typename Pulse>
double numeric_area(const Pulse& p) {
  const int kSteps = 200000;
  double d = static_cast<double>(p.duration);
  double h = d / kSteps;
  double acc = 0.0;
  for (int i = 0; i <= kSteps; ++i) {
    double w = (i == 0 || i == kSteps) ? 0.5 : 1.0;
    acc += w * envelope_at(p, i * h).real();
  }
  return acc * h;
}

}  // namespace

TEST_SUITE("pulse") {

TEST_CASE("quantize_duration snaps down to the 16 dt grid") {
  CHECK(quantize_duration(175.9) == 160);
  CHECK(quantize_duration(160.0) == 160);
  CHECK(quantize_duration(161.0) == 160);
  CHECK(quantize_duration(7.2) == 16);
  CHECK(quantize_duration(16.0) == 16);
  CHECK_THROWS_AS(quantize_duration(0.0), std::domain_error);
  CHECK_THROWS_AS(quantize_duration(-5.0), std::domain_error);
}

TEST_CASE("quantize_duration always lands on a positive multiple of 16") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> raw(0.01, 4000.0);
  for (int i = 0; i < 500; ++i) {
    double r = raw(rng);
    int64_t q = quantize_duration(r);
    CHECK(q >= 16);
    CHECK(q % 16 == 0);
    CHECK(static_cast<double>(q) <= std::max(r, 16.0));
  }
}

TEST_CASE("gs_area matches the closed form on the reference pulse") {
  // 0.3 * (100 + sqrt(2*pi) * 16 * erf(4)), evaluated independently.
  // The raw-parameter form takes durations off the 16 dt grid.
  double direct = 0.3 * (100.0 + 2.5066282746310002 * 16.0 * std::erf(4.0));
  CHECK(gs_area_params(0.3, 100.0, 164.0, 16.0) ==
        doctest::Approx(direct).epsilon(1e-12));
  CHECK(gs_area_params(0.3, 400.0, 464.0, 16.0) ==
        doctest::Approx(132.0318155327312).epsilon(1e-12));
}

TEST_CASE("gs_area agrees with numeric integration of the envelope") {
  GaussianSquarePulse p(0.3, 192.0, 448, 64.0);
  CHECK(gs_area(p) ==
        doctest::Approx(numeric_area(p)).epsilon(1e-6));
  GaussianSquarePulse q(0.45, 60.0, 208, 32.0);
  CHECK(gs_area(q) ==
        doctest::Approx(numeric_area(q)).epsilon(1e-6));
}

TEST_CASE("gs_area grows with width at fixed flanks") {
  double prev = 0.0;
  for (double w : {0.0, 50.0, 100.0, 200.0, 300.0}) {
    double a = gs_area_params(0.3, w, w + 128.0, 32.0);
    CHECK(a > prev);
    prev = a;
  }
}

TEST_CASE("drag_area matches numeric integration") {
  DragPulse x(0.25, 160, 40.0, 0.75);
  CHECK(drag_area(x) == doctest::Approx(21.40985815436424).epsilon(1e-12));
  CHECK(drag_area(x) == doctest::Approx(numeric_area(x)).epsilon(1e-6));
  DragPulse fast(1.0, 64, 16.0, 0.0);
  CHECK(drag_area(fast) == doctest::Approx(34.25577304698279).epsilon(1e-12));
  CHECK(drag_area(fast) == doctest::Approx(numeric_area(fast)).epsilon(1e-6));
}

TEST_CASE("drag envelope is lifted to zero at the pulse edges") {
  DragPulse x(0.2, 160, 40.0, 0.6);
  CHECK(std::abs(envelope_at(x, 0.0)) < 1e-12);
  CHECK(std::abs(envelope_at(x, 160.0)) < 1e-12);
  CHECK(envelope_at(x, 80.0).real() == doctest::Approx(0.2));
}

TEST_CASE("gs envelope holds the flat top at full magnitude") {
  GaussianSquarePulse cr(0.3, 192.0, 448, 64.0);
  CHECK(envelope_at(cr, 224.0).real() == doctest::Approx(0.3));
  CHECK(std::abs(envelope_at(cr, 0.0).real()) < 0.3 * 0.01);
  CHECK(cr.n_sigma() == doctest::Approx(4.0));
}

TEST_CASE("pulse constructors reject out-of-range parameters") {
  CHECK_THROWS_AS(DragPulse(1.5, 160, 40.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DragPulse(0.2, 150, 40.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DragPulse(0.2, 160, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianSquarePulse(0.0, 10.0, 160, 16.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaussianSquarePulse(0.3, 200.0, 160, 16.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaussianSquarePulse(0.3, 10.0, 160, 16.0, 2),
                  std::invalid_argument);
}

TEST_CASE("schedule rejects overlapping pulses on one channel") {
  Schedule s(2);
  DragPulse x(0.2, 160, 40.0, 0.0);
  s.add(Channel::drive(0), 0, x);
  CHECK_THROWS_AS(s.add(Channel::drive(0), 80, x), std::invalid_argument);
  // Back to back is fine, as is the same window on another channel.
  s.add(Channel::drive(0), 160, x);
  s.add(Channel::drive(1), 80, x);
  CHECK(s.instructions().size() == 3);
}

TEST_CASE("frame changes take no time and may coincide with pulses") {
  Schedule s(1);
  DragPulse x(0.2, 160, 40.0, 0.0);
  s.add(Channel::drive(0), 0, x);
  s.add(Channel::drive(0), 0, FrameChange{1.25});
  s.add(Channel::drive(0), 80, FrameChange{-0.5});
  CHECK(s.duration() == 160);
}

TEST_CASE("empty schedule has zero duration") {
  Schedule s(3);
  CHECK(s.duration() == 0);
  CHECK(schedule_duration(s) == 0);
}

TEST_CASE("schedule duration spans the latest instruction end") {
  Schedule s(2);
  s.add(Channel::drive(0), 0, DragPulse(0.2, 160, 40.0, 0.0));
  s.add(Channel::control(0, 1), 160, GaussianSquarePulse(0.3, 192.0, 448, 64.0));
  CHECK(s.duration() == 608);
}

TEST_CASE("schedule json roundtrip preserves every field") {
  Schedule s(3);
  s.add(Channel::drive(1), 16, DragPulse(0.21, 160, 40.0, 0.81));
  s.add(Channel::drive(1), 176, FrameChange{0.4});
  s.add(Channel::control(1, 2), 176,
        GaussianSquarePulse(0.3, 192.0, 448, 64.0, -1));
  s.add(Channel::drive(2), 0, Barrier{});
  s.mark_measured(2);
  s.mark_measured(0);

  Schedule r = Schedule::from_json(s.to_json());
  CHECK(r.n_qubits() == 3);
  REQUIRE(r.instructions().size() == 4);
  CHECK(r.measured() == std::vector<int>{2, 0});
  const auto& cr = std::get<GaussianSquarePulse>(r.instructions()[2].payload);
  CHECK(cr.sign == -1);
  CHECK(cr.amp == doctest::Approx(0.3));
  CHECK(cr.width == doctest::Approx(192.0));
  const auto& fc = std::get<FrameChange>(r.instructions()[1].payload);
  CHECK(fc.angle == doctest::Approx(0.4));
  CHECK(r.duration() == s.duration());
}

}  // TEST_SUITE
