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

#ifndef SQUEEZE_BENCH_HPP
#define SQUEEZE_BENCH_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "squeeze/circuit.hpp"
#include "squeeze/device.hpp"
#include "squeeze/library.hpp"
#include "squeeze/transpile.hpp"

namespace squeeze {

using Distribution = std::map<std::string, double>;

class RbFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raw 1-norm distance between two distributions over the same outcome
// space; missing keys count as zero mass. With total_variation the sum
// is halved.
double distance_1norm(const Distribution& measured, const Distribution& ideal,
                      bool total_variation = false);

Distribution normalize_counts(const std::map<std::string, int64_t>& counts);

// Copy of a circuit without its measure gates, for unitary oracles.
Circuit without_measures(const Circuit& c);

// Ideal Born distribution of a logical circuit applied to |0...0>,
// marginalized onto its measured qubits in measure order (all qubits in
// index order when nothing is measured).
Distribution ideal_distribution(const Circuit& c);

// Places a small logical circuit onto specific device qubits.
Circuit embed(const Circuit& logical, int n_device,
              const std::vector<int>& placement);

enum class GateFamily { Rx, Rzx };

struct TomographyResult {
  char basis = 'Z';
  std::vector<double> angles;
  // Indexed [angle][preparation]; preparations run over the 2^n
  // eigenstates of the basis.
  std::vector<std::vector<Distribution>> measured;
  std::vector<std::vector<Distribution>> ideal;
  // Mean 1-norm over preparations, per angle.
  std::vector<double> error;
};

// Process tomography of Rx(theta) on one qubit or Rzx(theta) on a
// coupled pair, in the X, Y and Z bases. Preparation and measurement
// rotations go through the same transpilation mode as the gate under
// test.
std::vector<TomographyResult> tomography_sweep(GateFamily family,
                                               Backend& backend,
                                               const PulseLibrary& lib,
                                               Mode mode,
                                               const std::vector<double>& angles,
                                               const std::vector<int>& qubits,
                                               int shots);

// Grand mean of per-angle errors across all bases.
double mean_tomography_error(const std::vector<TomographyResult>& results);

enum class RbFamily { Su2, Su4 };

// Depth random gates followed by their exact inverses in reverse order;
// the noiseless action is the identity up to global phase.
Circuit rb_generate(int n_qubits, RbFamily family, int depth, uint64_t seed);

struct RbFit {
  double spam_alpha = 0.0;
  double spam_beta = 0.0;
  double p = 1.0;
  double epsilon = 0.0;
};

// Least-squares fit of P(k) = alpha * p^k + beta over >= 4 distinct
// depths; epsilon = (1 - p)(1 - 1/2^n).
RbFit rb_fit(const std::vector<std::pair<int, double>>& series, int n_qubits);

struct RbSeries {
  std::vector<int> depths;
  std::vector<double> p_return;
  RbFit fit;
  int n_qubits = 1;
};

RbSeries run_rb(Backend& backend, const PulseLibrary& lib, Mode mode,
                RbFamily family, const std::vector<int>& placement,
                const std::vector<int>& depths, int circuits_per_depth,
                int shots, uint64_t seed);

// Benchmark circuit generators. bv_circuit / qaoa_circuit include their
// measurements; qft_circuit and cdkm_adder are the bare unitary cores.
Circuit bv_circuit(const std::vector<int>& hidden);
Circuit qft_circuit(int n);
Circuit qaoa_circuit(int n, uint64_t seed);
Circuit cdkm_adder(int bits);
Circuit make_benchmark(const std::string& name, int size, uint64_t seed);

// Duration accounting over per-qubit fast-pulse calibrations.
struct QubitPulseSpec {
  std::string device;
  int qubit = 0;
  double amp = 0.0;
  int64_t t0 = 0;
};

std::vector<QubitPulseSpec> load_fast_pulses(const std::string& path);

struct DurationEntry {
  std::string gate;
  std::string mode;
  double mean_dt = 0.0;
  double stddev_dt = 0.0;
  int n = 0;
};

std::vector<DurationEntry> duration_report(
    const std::vector<QubitPulseSpec>& pulses);

// Rzx(theta) schedule durations on one coupled pair over a theta grid,
// reported for the CNOT-unrolled and direct-CR modes.
std::vector<DurationEntry> rzx_duration_report(
    const PulseLibrary& lib, int control, int target, int n_device,
    const std::vector<double>& thetas);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series);

}  // namespace squeeze

#endif  // SQUEEZE_BENCH_HPP
