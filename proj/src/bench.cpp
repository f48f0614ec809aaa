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

#include "squeeze/bench.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "squeeze/lm.hpp"

namespace squeeze {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_outcome_space(const Distribution& a, const Distribution& b) {
  size_t len = 0;
  bool have = false;
  for (const auto* d : {&a, &b}) {
    for (const auto& [key, p] : *d) {
      if (!have) {
        len = key.size();
        have = true;
      } else if (key.size() != len) {
        throw std::domain_error("distributions live on different outcome "
                                "spaces");
      }
    }
  }
}

}  // namespace

double distance_1norm(const Distribution& measured, const Distribution& ideal,
                      bool total_variation) {
  check_outcome_space(measured, ideal);
  std::set<std::string> keys;
  for (const auto& [k, v] : measured) keys.insert(k);
  for (const auto& [k, v] : ideal) keys.insert(k);
  double sum = 0.0;
  for (const std::string& k : keys) {
    auto mi = measured.find(k);
    auto ii = ideal.find(k);
    double m = mi == measured.end() ? 0.0 : mi->second;
    double i = ii == ideal.end() ? 0.0 : ii->second;
    sum += std::abs(m - i);
  }
  return total_variation ? sum / 2.0 : sum;
}

Distribution normalize_counts(const std::map<std::string, int64_t>& counts) {
  int64_t total = 0;
  for (const auto& [k, c] : counts) total += c;
  Distribution d;
  if (total == 0) return d;
  for (const auto& [k, c] : counts)
    d[k] = static_cast<double>(c) / static_cast<double>(total);
  return d;
}

Circuit without_measures(const Circuit& c) {
  Circuit out(c.n_qubits());
  for (const Gate& g : c.gates())
    if (g.kind != GateKind::Measure) out.add(g.kind, g.qubits, g.params);
  return out;
}

Distribution ideal_distribution(const Circuit& c) {
  int n = c.n_qubits();
  std::vector<int> measured;
  Circuit unitary_part(n);
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Measure)
      measured.push_back(g.qubits[0]);
    else
      unitary_part.add(g.kind, g.qubits, g.params);
  }
  if (measured.empty())
    for (int q = 0; q < n; ++q) measured.push_back(q);
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(int64_t{1} << n);
  state(0) = 1.0;
  for (const Gate& g : unitary_part.gates())
    apply_to_state(state, gate_unitary(g), g.qubits);
  Distribution d;
  for (int64_t idx = 0; idx < state.size(); ++idx) {
    double p = std::norm(state(idx));
    if (p < 1e-15) continue;
    std::string key(measured.size(), '0');
    for (size_t j = 0; j < measured.size(); ++j)
      key[j] = ((idx >> measured[j]) & 1) ? '1' : '0';
    d[key] += p;
  }
  return d;
}

Circuit embed(const Circuit& logical, int n_device,
              const std::vector<int>& placement) {
  if (static_cast<int>(placement.size()) != logical.n_qubits())
    throw std::invalid_argument("placement must name one device qubit per "
                                "logical qubit");
  std::set<int> seen;
  for (int p : placement) {
    if (p < 0 || p >= n_device)
      throw std::invalid_argument("placement qubit out of device range");
    if (!seen.insert(p).second)
      throw std::invalid_argument("placement qubits must be distinct");
  }
  Circuit out(n_device);
  for (const Gate& g : logical.gates()) {
    Gate mapped = g;
    for (int& q : mapped.qubits) q = placement[static_cast<size_t>(q)];
    out.add(mapped.kind, mapped.qubits, mapped.params);
  }
  return out;
}

namespace {

void add_prep(Circuit& c, int q, char basis, int bit) {
  if (bit != 0) c.add(GateKind::X, {q});
  if (basis == 'X') {
    c.add(GateKind::H, {q});
  } else if (basis == 'Y') {
    c.add(GateKind::H, {q});
    c.add(GateKind::S, {q});
  }
}

void add_measure_rotation(Circuit& c, int q, char basis) {
  if (basis == 'X') {
    c.add(GateKind::H, {q});
  } else if (basis == 'Y') {
    c.add(GateKind::Sdg, {q});
    c.add(GateKind::H, {q});
  }
}

std::vector<std::map<std::string, int64_t>> submit_batched(
    Backend& backend, const std::vector<Schedule>& schedules, int shots) {
  std::vector<std::map<std::string, int64_t>> counts;
  counts.reserve(schedules.size());
  for (size_t i = 0; i < schedules.size(); i += kMaxSchedulesPerJob) {
    size_t end = std::min(schedules.size(), i + kMaxSchedulesPerJob);
    JobRequest req;
    req.schedules.assign(schedules.begin() + static_cast<int64_t>(i),
                         schedules.begin() + static_cast<int64_t>(end));
    req.shots = shots;
    JobResult res = backend.submit(req);
    for (auto& c : res.counts) counts.push_back(std::move(c));
  }
  return counts;
}

}  // namespace

std::vector<TomographyResult> tomography_sweep(
    GateFamily family, Backend& backend, const PulseLibrary& lib, Mode mode,
    const std::vector<double>& angles, const std::vector<int>& qubits,
    int shots) {
  const int k = family == GateFamily::Rx ? 1 : 2;
  if (static_cast<int>(qubits.size()) != k)
    throw std::invalid_argument("tomography needs one qubit for rx, a pair "
                                "for rzx");
  nlohmann::json info = backend.device_info();
  int n_device = info.at("n_qubits").get<int>();
  CouplingMap map = CouplingMap::from_json(info.at("coupling"));
  const int preps = 1 << k;
  std::vector<TomographyResult> out;
  for (char basis : {'X', 'Y', 'Z'}) {
    TomographyResult r;
    r.basis = basis;
    r.angles = angles;
    r.measured.resize(angles.size());
    r.ideal.resize(angles.size());
    r.error.assign(angles.size(), 0.0);
    std::vector<Schedule> schedules;
    for (size_t ai = 0; ai < angles.size(); ++ai) {
      for (int prep = 0; prep < preps; ++prep) {
        Circuit logical(k);
        for (int j = 0; j < k; ++j)
          add_prep(logical, j, basis, (prep >> j) & 1);
        if (family == GateFamily::Rx)
          logical.add(GateKind::Rx, {0}, {angles[ai]});
        else
          logical.add(GateKind::Rzx, {0, 1}, {angles[ai]});
        for (int j = 0; j < k; ++j) add_measure_rotation(logical, j, basis);
        for (int j = 0; j < k; ++j) logical.add(GateKind::Measure, {j});
        r.ideal[ai].push_back(ideal_distribution(logical));
        TranspileResult t =
            transpile(embed(logical, n_device, qubits), map, lib, mode);
        schedules.push_back(std::move(t.schedule));
      }
    }
    auto counts = submit_batched(backend, schedules, shots);
    size_t idx = 0;
    for (size_t ai = 0; ai < angles.size(); ++ai) {
      double err = 0.0;
      for (int prep = 0; prep < preps; ++prep) {
        Distribution m = normalize_counts(counts[idx++]);
        err += distance_1norm(m, r.ideal[ai][static_cast<size_t>(prep)]);
        r.measured[ai].push_back(std::move(m));
      }
      r.error[ai] = err / preps;
    }
    out.push_back(std::move(r));
  }
  return out;
}

double mean_tomography_error(const std::vector<TomographyResult>& results) {
  double sum = 0.0;
  size_t n = 0;
  for (const TomographyResult& r : results) {
    for (double e : r.error) sum += e;
    n += r.error.size();
  }
  if (n == 0) throw std::invalid_argument("no tomography points");
  return sum / static_cast<double>(n);
}

namespace {

Eigen::Matrix2cd haar_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = std::complex<double>(nd(rng), nd(rng));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

void add_u3(Circuit& c, int q, const Eigen::Matrix2cd& u) {
  U3Angles a = u3_angles(u);
  c.add(GateKind::U3, {q}, {a.theta, a.phi, a.lambda});
}

}  // namespace

Circuit rb_generate(int n_qubits, RbFamily family, int depth, uint64_t seed) {
  if (family == RbFamily::Su2 && n_qubits != 1)
    throw std::invalid_argument("su2 benchmarking runs on a single qubit");
  if (family == RbFamily::Su4 && n_qubits != 2)
    throw std::invalid_argument("su4 benchmarking runs on a qubit pair");
  std::mt19937_64 rng(seed);
  Circuit c(n_qubits);
  if (family == RbFamily::Su2) {
    std::vector<Eigen::Matrix2cd> gates;
    gates.reserve(static_cast<size_t>(depth));
    for (int i = 0; i < depth; ++i) {
      gates.push_back(haar_su2(rng));
      add_u3(c, 0, gates.back());
    }
    for (auto it = gates.rbegin(); it != gates.rend(); ++it)
      add_u3(c, 0, it->adjoint());
    return c;
  }
  struct Block {
    Eigen::Matrix2cd pre_a, pre_b, post_a, post_b;
    double theta;
  };
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::vector<Block> blocks;
  blocks.reserve(static_cast<size_t>(depth));
  for (int i = 0; i < depth; ++i) {
    Block b{haar_su2(rng), haar_su2(rng), haar_su2(rng), haar_su2(rng),
            ang(rng)};
    add_u3(c, 0, b.pre_a);
    add_u3(c, 1, b.pre_b);
    c.add(GateKind::Rzx, {0, 1}, {b.theta});
    add_u3(c, 0, b.post_a);
    add_u3(c, 1, b.post_b);
    blocks.push_back(std::move(b));
  }
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    add_u3(c, 0, it->post_a.adjoint());
    add_u3(c, 1, it->post_b.adjoint());
    c.add(GateKind::Rzx, {0, 1}, {-it->theta});
    add_u3(c, 0, it->pre_a.adjoint());
    add_u3(c, 1, it->pre_b.adjoint());
  }
  return c;
}

RbFit rb_fit(const std::vector<std::pair<int, double>>& series, int n_qubits) {
  std::set<int> depths;
  for (const auto& [k, p] : series) depths.insert(k);
  if (depths.size() < 4)
    throw std::invalid_argument("rb fit needs at least 4 distinct depths");
  double pmin = series[0].second, pmax = series[0].second;
  for (const auto& [k, p] : series) {
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
  }
  const double floor_p = 1.0 / std::pow(2.0, n_qubits);
  RbFit fit;
  if (pmax - pmin < 1e-9) {
    // A constant series carries no decay information; pin p = 1 and
    // split the level between the SPAM terms at the mixing asymptote.
    fit.spam_alpha = pmax - floor_p;
    fit.spam_beta = floor_p;
    fit.p = 1.0;
    fit.epsilon = 0.0;
    return fit;
  }
  Eigen::VectorXd init(3), lo(3), hi(3);
  init << std::clamp(pmax - floor_p, 0.05, 1.5), 0.95, floor_p;
  lo << 0.0, 1e-6, 0.0;
  hi << 1.5, 1.0, 1.0;
  auto residuals = [&series](const Eigen::VectorXd& q) {
    Eigen::VectorXd r(static_cast<int64_t>(series.size()));
    for (size_t i = 0; i < series.size(); ++i)
      r(static_cast<int64_t>(i)) =
          q(0) * std::pow(q(1), series[i].first) + q(2) - series[i].second;
    return r;
  };
  LmResult res = lm_fit(residuals, init, lo, hi);
  if (!res.converged)
    throw RbFitError("exponential decay fit did not converge");
  fit.spam_alpha = res.params(0);
  fit.p = res.params(1);
  fit.spam_beta = res.params(2);
  fit.epsilon = (1.0 - fit.p) * (1.0 - floor_p);
  return fit;
}

RbSeries run_rb(Backend& backend, const PulseLibrary& lib, Mode mode,
                RbFamily family, const std::vector<int>& placement,
                const std::vector<int>& depths, int circuits_per_depth,
                int shots, uint64_t seed) {
  nlohmann::json info = backend.device_info();
  int n_device = info.at("n_qubits").get<int>();
  CouplingMap map = CouplingMap::from_json(info.at("coupling"));
  const int n = static_cast<int>(placement.size());
  std::mt19937_64 master(seed);
  std::vector<Schedule> schedules;
  for (int k : depths) {
    for (int i = 0; i < circuits_per_depth; ++i) {
      Circuit logical = rb_generate(n, family, k, master());
      for (int q = 0; q < n; ++q) logical.add(GateKind::Measure, {q});
      TranspileResult t =
          transpile(embed(logical, n_device, placement), map, lib, mode);
      schedules.push_back(std::move(t.schedule));
    }
  }
  auto counts = submit_batched(backend, schedules, shots);
  const std::string zeros(static_cast<size_t>(n), '0');
  RbSeries s;
  s.depths = depths;
  s.n_qubits = n;
  size_t idx = 0;
  std::vector<std::pair<int, double>> points;
  for (int k : depths) {
    double mean = 0.0;
    for (int i = 0; i < circuits_per_depth; ++i) {
      const auto& c = counts[idx++];
      int64_t total = 0, hit = 0;
      for (const auto& [key, v] : c) {
        total += v;
        if (key == zeros) hit += v;
      }
      mean += total > 0 ? static_cast<double>(hit) / total : 0.0;
    }
    mean /= circuits_per_depth;
    s.p_return.push_back(mean);
    points.emplace_back(k, mean);
  }
  s.fit = rb_fit(points, n);
  return s;
}

Circuit bv_circuit(const std::vector<int>& hidden) {
  const int n = static_cast<int>(hidden.size());
  if (n < 1 || n > 4)
    throw ResourceError("hidden string must have 1 to 4 bits");
  Circuit c(n + 1);
  c.add(GateKind::X, {n});
  for (int q = 0; q <= n; ++q) c.add(GateKind::H, {q});
  for (int q = 0; q < n; ++q)
    if (hidden[static_cast<size_t>(q)] != 0) c.add(GateKind::Cnot, {q, n});
  for (int q = 0; q < n; ++q) c.add(GateKind::H, {q});
  for (int q = 0; q < n; ++q) c.add(GateKind::Measure, {q});
  return c;
}

Circuit qft_circuit(int n) {
  if (n < 1 || n > 5) throw ResourceError("qft supports 1 to 5 qubits");
  Circuit c(n);
  for (int i = n - 1; i >= 0; --i) {
    c.add(GateKind::H, {i});
    for (int j = i - 1; j >= 0; --j)
      c.add(GateKind::CPhase, {j, i}, {kPi / std::pow(2.0, i - j)});
  }
  for (int i = 0; i < n / 2; ++i) {
    int a = i, b = n - 1 - i;
    c.add(GateKind::Cnot, {a, b});
    c.add(GateKind::Cnot, {b, a});
    c.add(GateKind::Cnot, {a, b});
  }
  return c;
}

Circuit qaoa_circuit(int n, uint64_t seed) {
  if (n < 2 || n > 5) throw ResourceError("qaoa supports 2 to 5 qubits");
  constexpr double kGamma = 0.7;
  constexpr double kBeta = 0.3;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int split = n / 2;
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < split; ++a)
    for (int b = split; b < n; ++b)
      if (u(rng) < 0.7) edges.emplace_back(a, b);
  if (edges.empty()) edges.emplace_back(0, split);
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.add(GateKind::H, {q});
  for (const auto& [a, b] : edges)
    c.add(GateKind::Rzz, {a, b}, {2.0 * kGamma});
  for (int q = 0; q < n; ++q) c.add(GateKind::Rx, {q}, {2.0 * kBeta});
  for (int q = 0; q < n; ++q) c.add(GateKind::Measure, {q});
  return c;
}

namespace {

// Carry-propagate / carry-undo blocks of the ripple adder.
void maj(Circuit& c, int x, int y, int z) {
  c.add(GateKind::Cnot, {z, y});
  c.add(GateKind::Cnot, {z, x});
  c.add(GateKind::Toffoli, {x, y, z});
}

void uma(Circuit& c, int x, int y, int z) {
  c.add(GateKind::Toffoli, {x, y, z});
  c.add(GateKind::Cnot, {z, x});
  c.add(GateKind::Cnot, {x, y});
}

}  // namespace

Circuit cdkm_adder(int bits) {
  if (bits < 1 || bits > 2)
    throw ResourceError("ripple adder supports 1 or 2 data bits");
  // Layout: carry-in, then (b_i, a_i) per bit, then carry-out. Sums land
  // in the b qubits; a and the carry-in are restored.
  Circuit c(2 * bits + 2);
  maj(c, 0, 1, 2);
  if (bits == 2) maj(c, 2, 3, 4);
  int high_a = 2 * bits;
  c.add(GateKind::Cnot, {high_a, 2 * bits + 1});
  if (bits == 2) uma(c, 2, 3, 4);
  uma(c, 0, 1, 2);
  return c;
}

Circuit make_benchmark(const std::string& name, int size, uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (name == "bv") {
    std::vector<int> hidden(static_cast<size_t>(size));
    for (int& b : hidden) b = static_cast<int>(rng() & 1);
    return bv_circuit(hidden);
  }
  if (name == "qft") {
    Circuit qft = qft_circuit(size);
    Circuit c(size);
    for (int q = 0; q < size; ++q)
      if ((rng() & 1) != 0) c.add(GateKind::X, {q});
    c.append(qft);
    for (int q = 0; q < size; ++q) c.add(GateKind::Measure, {q});
    return c;
  }
  if (name == "qaoa") return qaoa_circuit(size, seed);
  if (name == "cdkm") {
    Circuit adder = cdkm_adder(size);
    Circuit c(adder.n_qubits());
    for (int i = 0; i < size; ++i) {
      if ((rng() & 1) != 0) c.add(GateKind::X, {2 * i + 1});  // b_i
      if ((rng() & 1) != 0) c.add(GateKind::X, {2 * i + 2});  // a_i
    }
    c.append(adder);
    for (int i = 0; i < size; ++i) c.add(GateKind::Measure, {2 * i + 1});
    c.add(GateKind::Measure, {2 * size + 1});
    return c;
  }
  throw std::invalid_argument("unknown benchmark '" + name + "'");
}

std::vector<QubitPulseSpec> load_fast_pulses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pulse file " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<QubitPulseSpec> out;
  for (const auto& dev : j.at("devices")) {
    std::string name = dev.at("name").get<std::string>();
    for (const auto& q : dev.at("qubits")) {
      QubitPulseSpec s;
      s.device = name;
      s.qubit = q.at("qubit").get<int>();
      s.amp = q.at("amp").get<double>();
      s.t0 = q.at("duration").get<int64_t>();
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<DurationEntry> duration_report(
    const std::vector<QubitPulseSpec>& pulses) {
  if (pulses.empty()) throw std::invalid_argument("no pulse specs");
  struct Row {
    std::string name;
    GateKind kind;
    std::vector<double> params;
  };
  const std::vector<Row> rows = {
      {"u3", GateKind::U3, {1.1, 0.4, -0.7}},
      {"x", GateKind::Rx, {kPi}},
      {"sqrt_x", GateKind::Rx, {kPi / 2.0}},
  };
  const std::vector<Mode> modes = {Mode::Baseline, Mode::Gokhale,
                                   Mode::Squeeze};
  const DragPulse vendor_x(0.25, 160, 40.0, 0.75);
  CouplingMap empty_map;
  std::vector<DurationEntry> out;
  for (const Row& row : rows) {
    Circuit c(1);
    c.add(row.kind, {0}, row.params);
    for (Mode mode : modes) {
      std::vector<double> durations;
      for (const QubitPulseSpec& spec : pulses) {
        PulseLibrary lib;
        lib.vendor_x[0] = vendor_x;
        lib.rx[0] = ideal_rx_entry(
            DragPulse(spec.amp, spec.t0,
                      static_cast<double>(spec.t0) / 4.0, vendor_x.beta));
        TranspileResult t = transpile(c, empty_map, lib, mode);
        durations.push_back(
            static_cast<double>(schedule_duration(t.schedule)));
      }
      DurationEntry e;
      e.gate = row.name;
      e.mode = mode_name(mode);
      e.mean_dt = mean_of(durations);
      e.stddev_dt = stddev_of(durations);
      e.n = static_cast<int>(durations.size());
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<DurationEntry> rzx_duration_report(
    const PulseLibrary& lib, int control, int target, int n_device,
    const std::vector<double>& thetas) {
  if (thetas.empty()) throw std::invalid_argument("empty theta grid");
  CouplingMap map;
  map.edges.insert({control, target});
  map.edges.insert({target, control});
  std::vector<DurationEntry> out;
  for (Mode mode : {Mode::Baseline, Mode::Earnest}) {
    std::vector<double> durations;
    for (double theta : thetas) {
      Circuit c(n_device);
      c.add(GateKind::Rzx, {control, target}, {theta});
      TranspileResult t = transpile(c, map, lib, mode);
      durations.push_back(static_cast<double>(schedule_duration(t.schedule)));
    }
    DurationEntry e;
    e.gate = "rzx";
    e.mode = mode_name(mode);
    e.mean_dt = mean_of(durations);
    e.stddev_dt = stddev_of(durations);
    e.n = static_cast<int>(durations.size());
    out.push_back(std::move(e));
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  auto write_row = [&out](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series) {
  const double width = 640, height = 420, ml = 60, mr = 20, mt = 40, mb = 40;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const PlotSeries& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;
  auto sx = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  auto sy = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };
  const std::vector<std::string> palette = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = xmin + (xmax - xmin) * i / 4.0;
    double yv = ymin + (ymax - ymin) * i / 4.0;
    svg << "<text x=\"" << sx(xv) << "\" y=\"" << height - mb + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << xv << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << yv << "</text>\n";
  }
  for (size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const std::string& color = palette[si % palette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i)
      svg << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << width - mr - 8 << "\" y=\""
        << mt + 16 * static_cast<double>(si + 1)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"12\" fill=\"" << color << "\">" << s.label
        << "</text>\n";
  }
  svg << "</svg>\n";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg.str();
}

}  // namespace squeeze
