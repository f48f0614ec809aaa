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

// Command line front end for the gate-to-pulse transpiler.  Reads a circuit
// in JSON form, resolves pulse parameters either from a live query server or
// from an offline library file, and writes the compiled pulse schedule.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "squeeze/qserver.hpp"
#include "squeeze/transpile.hpp"

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

// Accepts either a bare coupling object ({"edges": [[0,1], ...]}) or a full
// device description whose "coupling" member holds the edge list.  A device
// description also seeds the vendor pulse tables.
void load_device_file(const std::string& path, squeeze::CouplingMap* map,
                      squeeze::PulseLibrary* lib) {
  nlohmann::json j = read_json_file(path);
  if (j.contains("coupling")) {
    *map = squeeze::CouplingMap::from_json(j.at("coupling"));
  } else {
    *map = squeeze::CouplingMap::from_json(j);
  }
  if (j.contains("qubits")) {
    squeeze::PulseLibrary vendor = squeeze::vendor_library(j);
    lib->vendor_x = std::move(vendor.vendor_x);
    lib->vendor_cr = std::move(vendor.vendor_cr);
  }
}

void merge_calibrated(const squeeze::PulseLibrary& from,
                      squeeze::PulseLibrary* into) {
  for (const auto& [q, entry] : from.rx) into->rx[q] = entry;
  for (const auto& [pair, entry] : from.zx) into->zx[pair] = entry;
  if (into->vendor_x.empty()) into->vendor_x = from.vendor_x;
  if (into->vendor_cr.empty()) into->vendor_cr = from.vendor_cr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile a gate circuit into a pulse schedule"};

  std::string in_path;
  std::string mode_name = "squeeze";
  std::string coupling_path;
  std::string query_url;
  std::string offline_path;
  std::string out_path;
  std::string toffoli = "auto";

  app.add_option("--in", in_path, "Circuit JSON file")->required();
  app.add_option("--mode", mode_name,
                 "Compilation mode: squeeze, gokhale, baseline or earnest");
  app.add_option("--coupling", coupling_path,
                 "Device or coupling-map JSON file")
      ->required();
  app.add_option("--query-url", query_url,
                 "Query server endpoint, e.g. http://127.0.0.1:8765");
  app.add_option("--offline", offline_path,
                 "Pulse library JSON file; bypasses the query server");
  app.add_option("--out", out_path, "Output schedule file (default stdout)");
  app.add_option("--toffoli", toffoli, "Toffoli variant: auto, a or b");

  CLI11_PARSE(app, argc, argv);

  try {
    squeeze::Circuit circuit =
        squeeze::Circuit::from_json(read_json_file(in_path));

    squeeze::CouplingMap coupling;
    squeeze::PulseLibrary lib;
    load_device_file(coupling_path, &coupling, &lib);

    if (!offline_path.empty()) {
      merge_calibrated(
          squeeze::PulseLibrary::from_json(read_json_file(offline_path)),
          &lib);
    } else if (!query_url.empty()) {
      auto [host, port] = squeeze::parse_endpoint(query_url);
      squeeze::QueryClient client(host, port);
      merge_calibrated(client.snapshot(), &lib);
    }

    squeeze::Mode mode = squeeze::mode_from_string(mode_name);
    squeeze::ToffoliVariant variant = squeeze::ToffoliVariant::Auto;
    if (toffoli == "a" || toffoli == "A")
      variant = squeeze::ToffoliVariant::A;
    else if (toffoli == "b" || toffoli == "B")
      variant = squeeze::ToffoliVariant::B;
    else if (toffoli != "auto")
      throw std::invalid_argument("unknown toffoli variant '" + toffoli + "'");

    squeeze::TranspileResult result =
        squeeze::transpile(circuit, coupling, lib, mode, variant);

    nlohmann::json out_j{
        {"mode", squeeze::mode_name(mode)},
        {"schedule", result.schedule.to_json()},
        {"compiled", result.compiled.to_json()},
        {"final_layout", result.final_layout},
        {"swaps", result.swaps},
        {"duration_dt", squeeze::schedule_duration(result.schedule)},
    };

    if (out_path.empty()) {
      std::cout << out_j.dump(2) << "\n";
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot write " + out_path);
      out << out_j.dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "transpile: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
