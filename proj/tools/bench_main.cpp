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

// Benchmark driver with four subcommands: gate tomography sweeps,
// randomized benchmarking, whole-algorithm runs, and pulse duration
// accounting. Results go to stdout, with optional CSV and SVG output.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "squeeze/bench.hpp"
#include "squeeze/qserver.hpp"
#include "squeeze/simserver.hpp"
#include "squeeze/transpile.hpp"

namespace {

using squeeze::Backend;
using squeeze::PulseLibrary;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

// The --backend argument is either an HTTP endpoint of a running device
// server or a path to a device description file, in which case the
// simulator runs in process. sim_out receives the in-process backend so
// callers that need exact distributions can reach the device model.
std::unique_ptr<Backend> make_backend(const std::string& arg,
                                      std::optional<uint64_t> seed,
                                      squeeze::SimBackend** sim_out) {
  if (std::filesystem::exists(arg)) {
    nlohmann::json config = read_json_file(arg);
    if (seed) config["seed"] = *seed;
    auto sim =
        std::make_unique<squeeze::SimBackend>(squeeze::DeviceModel::from_json(config));
    if (sim_out) *sim_out = sim.get();
    return sim;
  }
  auto [host, port] = squeeze::parse_endpoint(arg);
  if (sim_out) *sim_out = nullptr;
  return std::make_unique<squeeze::HttpBackend>(host, port);
}

PulseLibrary build_library(Backend& backend, const std::string& query_url,
                           const std::string& offline_path) {
  PulseLibrary lib = squeeze::vendor_library(backend.device_info());
  PulseLibrary extra;
  if (!offline_path.empty()) {
    extra = PulseLibrary::from_json(read_json_file(offline_path));
  } else if (!query_url.empty()) {
    auto [host, port] = squeeze::parse_endpoint(query_url);
    squeeze::QueryClient client(host, port);
    extra = client.snapshot();
  }
  for (const auto& [q, entry] : extra.rx) lib.rx[q] = entry;
  for (const auto& [pair, entry] : extra.zx) lib.zx[pair] = entry;
  return lib;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  return out;
}

int run_durations(const std::string& pulses_path,
                  const std::string& device_path, const std::string& pair_arg,
                  const std::string& csv_path, const std::string& plot_path) {
  auto pulses = squeeze::load_fast_pulses(pulses_path);
  auto rows = squeeze::duration_report(pulses);

  if (!device_path.empty()) {
    nlohmann::json dev = read_json_file(device_path);
    PulseLibrary lib = squeeze::vendor_library(dev);
    if (lib.vendor_cr.empty())
      throw std::runtime_error("device file has no coupled pairs");
    std::pair<int, int> pair = lib.vendor_cr.begin()->first;
    if (!pair_arg.empty()) {
      auto dash = pair_arg.find(',');
      if (dash == std::string::npos)
        throw std::invalid_argument("--pair expects control,target");
      pair = {std::stoi(pair_arg.substr(0, dash)),
              std::stoi(pair_arg.substr(dash + 1))};
    }
    int n_device = dev.at("n_qubits").get<int>();
    auto thetas = linspace(M_PI / 8, M_PI, 8);
    auto rzx_rows = squeeze::rzx_duration_report(lib, pair.first, pair.second,
                                                 n_device, thetas);
    rows.insert(rows.end(), rzx_rows.begin(), rzx_rows.end());
  }

  std::vector<std::vector<std::string>> csv_rows;
  for (const auto& r : rows) {
    std::printf("%-8s %-10s mean %10.4f dt  stddev %9.4f dt  n=%d\n",
                r.gate.c_str(), r.mode.c_str(), r.mean_dt, r.stddev_dt, r.n);
    csv_rows.push_back({r.gate, r.mode, fmt(r.mean_dt), fmt(r.stddev_dt),
                        std::to_string(r.n)});
  }
  if (!csv_path.empty())
    squeeze::write_csv(csv_path, {"gate", "mode", "mean_dt", "stddev_dt", "n"},
                       csv_rows);
  if (!plot_path.empty()) {
    // One bar-like series per mode, indexed by gate row.
    std::map<std::string, squeeze::PlotSeries> by_mode;
    std::map<std::string, int> gate_index;
    for (const auto& r : rows)
      if (!gate_index.count(r.gate))
        gate_index[r.gate] = static_cast<int>(gate_index.size());
    for (const auto& r : rows) {
      auto& s = by_mode[r.mode];
      s.label = r.mode;
      s.x.push_back(gate_index[r.gate]);
      s.y.push_back(r.mean_dt);
    }
    std::vector<squeeze::PlotSeries> series;
    for (auto& [mode, s] : by_mode) series.push_back(std::move(s));
    squeeze::write_svg_plot(plot_path, "Schedule durations (dt)", series);
  }
  return 0;
}

int run_tomography(Backend& backend, const PulseLibrary& lib,
                   squeeze::Mode mode, const std::string& family_name,
                   std::vector<int> qubits, int n_angles, int shots,
                   const std::string& csv_path, const std::string& plot_path) {
  squeeze::GateFamily family;
  if (family_name == "rx") {
    family = squeeze::GateFamily::Rx;
    if (qubits.empty()) qubits = {0};
  } else if (family_name == "rzx") {
    family = squeeze::GateFamily::Rzx;
    if (qubits.empty()) qubits = {0, 1};
  } else {
    throw std::invalid_argument("unknown family '" + family_name + "'");
  }

  auto angles = linspace(M_PI / 8, M_PI, n_angles);
  auto results = squeeze::tomography_sweep(family, backend, lib, mode, angles,
                                           qubits, shots);

  std::vector<std::vector<std::string>> csv_rows;
  std::vector<squeeze::PlotSeries> series;
  for (const auto& r : results) {
    squeeze::PlotSeries s;
    s.label = std::string(1, r.basis) + " basis";
    for (size_t i = 0; i < r.angles.size(); ++i) {
      csv_rows.push_back({std::string(1, r.basis), fmt(r.angles[i]),
                          fmt(r.error[i])});
      s.x.push_back(r.angles[i]);
      s.y.push_back(r.error[i]);
    }
    series.push_back(std::move(s));
  }
  double mean = squeeze::mean_tomography_error(results);
  nlohmann::json summary{{"family", family_name},
                         {"mode", squeeze::mode_name(mode)},
                         {"shots", shots},
                         {"mean_error", mean}};
  std::cout << summary.dump() << "\n";

  if (!csv_path.empty())
    squeeze::write_csv(csv_path, {"basis", "theta", "error"}, csv_rows);
  if (!plot_path.empty())
    squeeze::write_svg_plot(plot_path, "Tomography error by basis", series);
  return 0;
}

int run_rb_cmd(Backend& backend, const PulseLibrary& lib, squeeze::Mode mode,
               const std::string& family_name, std::vector<int> placement,
               std::vector<int> depths, int circuits, int shots, uint64_t seed,
               const std::string& csv_path, const std::string& plot_path) {
  squeeze::RbFamily family;
  if (family_name == "su2") {
    family = squeeze::RbFamily::Su2;
    if (placement.empty()) placement = {0};
  } else if (family_name == "su4") {
    family = squeeze::RbFamily::Su4;
    if (placement.empty()) placement = {0, 1};
  } else {
    throw std::invalid_argument("unknown family '" + family_name + "'");
  }
  if (depths.empty()) depths = {1, 2, 4, 8, 16, 32};

  auto series = squeeze::run_rb(backend, lib, mode, family, placement, depths,
                                circuits, shots, seed);

  nlohmann::json summary{{"family", family_name},
                         {"mode", squeeze::mode_name(mode)},
                         {"p", series.fit.p},
                         {"epsilon", series.fit.epsilon},
                         {"spam_alpha", series.fit.spam_alpha},
                         {"spam_beta", series.fit.spam_beta}};
  std::cout << summary.dump() << "\n";

  std::vector<std::vector<std::string>> csv_rows;
  for (size_t i = 0; i < series.depths.size(); ++i)
    csv_rows.push_back(
        {std::to_string(series.depths[i]), fmt(series.p_return[i])});
  if (!csv_path.empty())
    squeeze::write_csv(csv_path, {"depth", "p_return"}, csv_rows);

  if (!plot_path.empty()) {
    squeeze::PlotSeries measured{"measured", {}, {}};
    for (size_t i = 0; i < series.depths.size(); ++i) {
      measured.x.push_back(series.depths[i]);
      measured.y.push_back(series.p_return[i]);
    }
    squeeze::PlotSeries fitted{"fit", {}, {}};
    int kmax = series.depths.back();
    for (int k = series.depths.front(); k <= kmax; ++k) {
      fitted.x.push_back(k);
      fitted.y.push_back(series.fit.spam_alpha * std::pow(series.fit.p, k) +
                         series.fit.spam_beta);
    }
    squeeze::write_svg_plot(plot_path, "Randomized benchmarking decay",
                            {measured, fitted});
  }
  return 0;
}

int run_algo(Backend& backend, squeeze::SimBackend* sim,
             const PulseLibrary& lib, squeeze::Mode mode,
             const std::string& name, int size, int shots, uint64_t seed,
             bool exact, const std::string& csv_path) {
  squeeze::Circuit circuit = squeeze::make_benchmark(name, size, seed);
  squeeze::CouplingMap map =
      squeeze::CouplingMap::from_json(backend.device_info().at("coupling"));
  auto result = squeeze::transpile(circuit, map, lib, mode);

  squeeze::Distribution measured;
  if (exact) {
    if (!sim)
      throw std::runtime_error(
          "--exact needs an in-process device file backend");
    measured = squeeze::exact_distribution(result.schedule, sim->model());
  } else {
    squeeze::JobRequest req;
    req.schedules.push_back(result.schedule);
    req.shots = shots;
    measured = squeeze::normalize_counts(backend.submit(req).counts.at(0));
  }
  squeeze::Distribution ideal = squeeze::ideal_distribution(circuit);
  double error = squeeze::distance_1norm(measured, ideal);

  nlohmann::json summary{{"benchmark", name},
                         {"size", size},
                         {"mode", squeeze::mode_name(mode)},
                         {"exact", exact},
                         {"duration_dt", squeeze::schedule_duration(result.schedule)},
                         {"swaps", result.swaps},
                         {"error_1norm", error}};
  std::cout << summary.dump() << "\n";

  if (!csv_path.empty()) {
    std::set<std::string> keys;
    for (const auto& [k, v] : measured) keys.insert(k);
    for (const auto& [k, v] : ideal) keys.insert(k);
    std::vector<std::vector<std::string>> csv_rows;
    for (const auto& k : keys) {
      double pm = measured.count(k) ? measured.at(k) : 0.0;
      double pi = ideal.count(k) ? ideal.at(k) : 0.0;
      csv_rows.push_back({k, fmt(pm), fmt(pi)});
    }
    squeeze::write_csv(csv_path, {"outcome", "measured", "ideal"}, csv_rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse compilation benchmarks"};
  app.require_subcommand(1);

  std::string mode_name = "squeeze";
  std::string backend_arg;
  std::string query_url;
  std::string offline_path;
  std::string csv_path;
  std::string plot_path;
  int shots = 1024;
  uint64_t seed = 1;

  auto add_common = [&](CLI::App* sub, bool needs_backend) {
    sub->add_option("--mode", mode_name,
                    "squeeze, gokhale, baseline or earnest");
    if (needs_backend)
      sub->add_option("--backend", backend_arg,
                      "Device endpoint (host:port) or device JSON file")
          ->required();
    sub->add_option("--query-url", query_url, "Query server endpoint");
    sub->add_option("--offline", offline_path, "Offline pulse library JSON");
    sub->add_option("--shots", shots, "Shots per schedule");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--csv", csv_path, "Write results as CSV");
    sub->add_option("--plot", plot_path, "Write an SVG plot");
  };

  // durations
  auto* durations = app.add_subcommand(
      "durations", "Schedule-length accounting across calibrated qubits");
  std::string pulses_path;
  std::string device_path;
  std::string pair_arg;
  durations->add_option("--pulses", pulses_path, "Fast-pulse table JSON")
      ->required();
  durations->add_option("--device", device_path,
                        "Device JSON for two-qubit rows");
  durations->add_option("--pair", pair_arg, "control,target pair");
  durations->add_option("--csv", csv_path, "Write results as CSV");
  durations->add_option("--plot", plot_path, "Write an SVG plot");

  // tomography
  auto* tomo = app.add_subcommand("tomography",
                                  "Gate tomography error over an angle sweep");
  std::string family = "rx";
  std::vector<int> qubits;
  int n_angles = 8;
  add_common(tomo, true);
  tomo->add_option("--family", family, "rx or rzx");
  tomo->add_option("--qubits", qubits, "Physical qubits under test")
      ->delimiter(',');
  tomo->add_option("--angles", n_angles, "Number of sweep angles");

  // rb
  auto* rb = app.add_subcommand("rb", "Randomized benchmarking decay");
  std::string rb_family = "su2";
  std::vector<int> placement;
  std::vector<int> depths;
  int circuits = 8;
  add_common(rb, true);
  rb->add_option("--family", rb_family, "su2 or su4");
  rb->add_option("--placement", placement, "Physical qubits")->delimiter(',');
  rb->add_option("--depths", depths, "Sequence depths")->delimiter(',');
  rb->add_option("--circuits", circuits, "Random circuits per depth");

  // algo
  auto* algo = app.add_subcommand("algo", "Full-algorithm distribution error");
  std::string algo_name = "bv";
  int algo_size = 3;
  bool exact = false;
  add_common(algo, true);
  algo->add_option("--name", algo_name, "bv, qft, qaoa or cdkm");
  algo->add_option("--size", algo_size, "Problem size");
  algo->add_flag("--exact", exact,
                 "Use the exact output distribution instead of sampling");

  CLI11_PARSE(app, argc, argv);

  try {
    if (durations->parsed())
      return run_durations(pulses_path, device_path, pair_arg, csv_path,
                           plot_path);

    squeeze::Mode mode = squeeze::mode_from_string(mode_name);
    squeeze::SimBackend* sim = nullptr;
    auto backend = make_backend(backend_arg, seed, &sim);
    PulseLibrary lib = build_library(*backend, query_url, offline_path);

    if (tomo->parsed())
      return run_tomography(*backend, lib, mode, family, qubits, n_angles,
                            shots, csv_path, plot_path);
    if (rb->parsed())
      return run_rb_cmd(*backend, lib, mode, rb_family, placement, depths,
                        circuits, shots, seed, csv_path, plot_path);
    if (algo->parsed())
      return run_algo(*backend, sim, lib, mode, algo_name, algo_size, shots,
                      seed, exact, csv_path);
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
