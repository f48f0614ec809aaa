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

#ifndef SQUEEZE_CALIB_HPP
#define SQUEEZE_CALIB_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "squeeze/device.hpp"
#include "squeeze/library.hpp"
#include "squeeze/pulse.hpp"

namespace squeeze {

class CalibrationInfeasibleError : public std::runtime_error {
 public:
  explicit CalibrationInfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
};

class FitFailedError : public std::runtime_error {
 public:
  FitFailedError(const std::string& what, SinFit best_so_far)
      : std::runtime_error(what), best(best_so_far) {}
  SinFit best;
};

class InversionDomainError : public std::runtime_error {
 public:
  explicit InversionDomainError(const std::string& what)
      : std::runtime_error(what) {}
};

class AmplitudeOverflowError : public std::runtime_error {
 public:
  explicit AmplitudeOverflowError(const std::string& what)
      : std::runtime_error(what) {}
};

class WidthUnderflowError : public std::runtime_error {
 public:
  explicit WidthUnderflowError(const std::string& what)
      : std::runtime_error(what) {}
};

class EmptyDataError : public std::runtime_error {
 public:
  explicit EmptyDataError(const std::string& what)
      : std::runtime_error(what) {}
};

class ValidationInconclusiveError : public std::runtime_error {
 public:
  explicit ValidationInconclusiveError(const std::string& what)
      : std::runtime_error(what) {}
};

struct CalibSample {
  double ts = 0.0;  // backend clock seconds
  double amplitude = 0.0;
  double p1 = 0.0;
  int shots = 0;

  nlohmann::json to_json() const;
  static CalibSample from_json(const nlohmann::json& j);
};

// Candidate pulse durations for the fastest-pi search, ascending.
std::vector<int64_t> sweep_durations();

// Amplitude grid 0, 0.02, ..., 1.0 shared by the sweep operations.
std::vector<double> amplitude_grid();

// Shot-noise-aware acceptance threshold for a pi pulse: 0.995 minus
// three binomial standard deviations at the given shot count.
double sweep_threshold(int shots);

struct SweepResult {
  double a0 = 0.0;
  int64_t t0 = 0;
  std::vector<CalibSample> samples;  // the amplitude scan at the accepted t0
};

// One batch: a full amplitude scan of DRAG(A, t0, t0/4, beta) pulses on
// the qubit, measured immediately.
std::vector<CalibSample> amplitude_sweep(Backend& backend, int qubit,
                                         int64_t t0, double beta, int shots);

// Scans durations ascending and returns the shortest one where some
// amplitude reaches the threshold, together with that scan's samples.
SweepResult sweep_fastest_x(Backend& backend, int qubit, double beta,
                            int shots);

struct OutlierResult {
  std::vector<CalibSample> samples;
  // Amplitudes whose bins were too small to filter and passed through.
  std::vector<double> warned_amplitudes;
};

// Drops samples farther than 1.5 sample standard deviations from their
// amplitude bin's mean. Bins with fewer than 3 samples pass through.
OutlierResult remove_outliers(const std::vector<CalibSample>& samples);

struct AveragedPoint {
  double amplitude = 0.0;
  double p1 = 0.0;
  int64_t shots = 0;
};

// Shot-weighted mean of p1 per amplitude over samples whose timestamp
// lies within [now - window, now].
std::vector<AveragedPoint> trailing_average(
    const std::vector<CalibSample>& samples, double now,
    double window = 172800.0);

// Levenberg-Marquardt fit of a1 * sin^2(omega A + phi) + delta.
SinFit fit_sin2(const std::vector<AveragedPoint>& points);

// Inverts the fitted curve: the amplitude whose pulse rotates by theta,
// clamped to [0, 1]. Requires 0 <= theta <= pi.
double amplitude_for_theta(const SinFit& fit, double theta);

// Runs a fixed angle grid with both pulse sets in one batch and accepts
// the candidate only on strictly lower mean error.
bool validate_rx(const RxEntry& candidate, const RxEntry& incumbent,
                 Backend& backend, int qubit, int shots);

struct Particle {
  double c = 1.0;
  double k = 1.0;
  double weight = 0.0;
  double score = 0.0;
  bool valid = true;
  bool baseline = false;
};

// 5x5 grid over c in [1, 1.8], k in [0.9, 1.1] minus the (1, 1) cell,
// plus the tagged baseline particle: 25 total.
std::vector<Particle> initial_particle_grid();

constexpr double kParticleSpacingC = 0.2;
constexpr double kParticleSpacingK = 0.05;

// Duration-compressing CR rescale: amplitude c*A, width shrunk to hold
// the base area, duration floored to the 16-dt grid, amplitude then
// fine-tuned by k.
GaussianSquarePulse scale_cr(const GaussianSquarePulse& base, double c,
                             double k);

// Scores every valid particle's CNOT against the four computational
// basis states in a single submission (4 schedules per particle).
// Invalid scalings score 0. Updates the particles in place.
void score_particles(std::vector<Particle>& particles,
                     std::pair<int, int> pair, Backend& backend, int shots);

double score_particle(Particle& p, std::pair<int, int> pair, Backend& backend,
                      int shots);

// Resample-and-perturb step: weights are score^32 normalized, 23
// descendants perturbed by half the initial grid spacing, plus the
// round's best (score ties break toward larger c) plus the baseline.
// A strictly-best baseline resets to the initial grid.
std::vector<Particle> particle_filter_round(
    const std::vector<Particle>& gen, std::mt19937_64& rng,
    std::pair<double, double> spacing0 = {kParticleSpacingC,
                                          kParticleSpacingK});

struct CrCalibration {
  GaussianSquarePulse base;  // vendor CR(pi/4) for this direction
  double best_c = 1.0;
  double best_k = 1.0;
  int generation = 0;
  int rounds_since_reset = 0;
};

// The +- CR pulse pair realizing Rzx(theta) through the echo, at the
// best particle's amplitude. The flat-top width is re-solved against the
// closed-form area on the quantized duration grid, so the pulse area
// hits the 2*theta*F/pi target exactly rather than within one 16-dt
// floor. Returns nullopt when the target area is negligible (theta ~ 0).
std::optional<std::pair<GaussianSquarePulse, GaussianSquarePulse>>
scaled_cr_pair(const GaussianSquarePulse& base, double c, double k,
               double theta);

// CR(theta/2), X(control), CR(-theta/2), X(control). Requires
// 0 <= theta <= pi.
Schedule rzx_schedule(double theta, const CrCalibration& cal, int control,
                      int target, const DragPulse& x_control, int n_qubits);

// Low-level schedule builders shared with the transpiler and tests.
// Cursors hold the next free start time per qubit.
void append_drag(Schedule& s, std::vector<int64_t>& cursor, int qubit,
                 const DragPulse& p);
void append_fc(Schedule& s, std::vector<int64_t>& cursor, int qubit,
               double angle);
void append_cr(Schedule& s, std::vector<int64_t>& cursor, int control,
               int target, const GaussianSquarePulse& p);
void append_echoed_cnot(Schedule& s, std::vector<int64_t>& cursor,
                        int control, int target,
                        const GaussianSquarePulse& cr_plus,
                        const GaussianSquarePulse& cr_minus,
                        const DragPulse& x_control,
                        const DragPulse& half_x_target);

}  // namespace squeeze

#endif
