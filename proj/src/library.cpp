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

#include "squeeze/library.hpp"

#include <cmath>

namespace squeeze {

namespace {

nlohmann::json drag_to_json(const DragPulse& p) {
  return {{"amp", p.amp},
          {"duration", p.duration},
          {"sigma", p.sigma},
          {"beta", p.beta}};
}

DragPulse drag_from_json(const nlohmann::json& j) {
  return DragPulse(j.at("amp").get<double>(), j.at("duration").get<int64_t>(),
                   j.at("sigma").get<double>(), j.at("beta").get<double>());
}

nlohmann::json gs_to_json(const GaussianSquarePulse& p) {
  return {{"amp", p.amp},
          {"width", p.width},
          {"duration", p.duration},
          {"sigma", p.sigma},
          {"sign", p.sign}};
}

GaussianSquarePulse gs_from_json(const nlohmann::json& j) {
  return GaussianSquarePulse(
      j.at("amp").get<double>(), j.at("width").get<double>(),
      j.at("duration").get<int64_t>(), j.at("sigma").get<double>(),
      j.value("sign", 1));
}

std::string pair_key(const std::pair<int, int>& p) {
  return std::to_string(p.first) + "-" + std::to_string(p.second);
}

std::pair<int, int> parse_pair_key(const std::string& s) {
  auto dash = s.find('-');
  if (dash == std::string::npos)
    throw std::invalid_argument("pair key must look like \"0-1\"");
  return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
}

}  // namespace

nlohmann::json SinFit::to_json() const {
  return {{"a1", a1},           {"omega", omega},
          {"phi", phi},         {"delta", delta},
          {"residual", residual}, {"degenerate", degenerate}};
}

SinFit SinFit::from_json(const nlohmann::json& j) {
  SinFit f;
  f.a1 = j.at("a1").get<double>();
  f.omega = j.at("omega").get<double>();
  f.phi = j.at("phi").get<double>();
  f.delta = j.at("delta").get<double>();
  f.residual = j.value("residual", 0.0);
  f.degenerate = j.value("degenerate", false);
  return f;
}

nlohmann::json RxEntry::to_json() const {
  return {{"pulse", drag_to_json(x_pulse)},
          {"a0", a0},
          {"t0", t0},
          {"fit", fit.to_json()},
          {"ts", ts}};
}

RxEntry RxEntry::from_json(const nlohmann::json& j) {
  RxEntry e;
  e.x_pulse = drag_from_json(j.at("pulse"));
  e.a0 = j.at("a0").get<double>();
  e.t0 = j.at("t0").get<int64_t>();
  e.fit = SinFit::from_json(j.at("fit"));
  e.ts = j.value("ts", 0.0);
  return e;
}

nlohmann::json ZxEntry::to_json() const {
  return {{"cr", gs_to_json(cr)}, {"c", c}, {"k", k}, {"ts", ts}};
}

ZxEntry ZxEntry::from_json(const nlohmann::json& j) {
  ZxEntry e;
  e.cr = gs_from_json(j.at("cr"));
  e.c = j.at("c").get<double>();
  e.k = j.at("k").get<double>();
  e.ts = j.value("ts", 0.0);
  return e;
}

const DragPulse* PulseLibrary::find_vendor_x(int q) const {
  auto it = vendor_x.find(q);
  return it == vendor_x.end() ? nullptr : &it->second;
}

const GaussianSquarePulse* PulseLibrary::find_vendor_cr(int c, int t) const {
  auto it = vendor_cr.find({c, t});
  return it == vendor_cr.end() ? nullptr : &it->second;
}

const RxEntry* PulseLibrary::find_rx(int q) const {
  auto it = rx.find(q);
  return it == rx.end() ? nullptr : &it->second;
}

const ZxEntry* PulseLibrary::find_zx(int c, int t) const {
  auto it = zx.find({c, t});
  return it == zx.end() ? nullptr : &it->second;
}

nlohmann::json PulseLibrary::to_json() const {
  nlohmann::json j;
  for (const auto& [q, p] : vendor_x)
    j["vendor_x"][std::to_string(q)] = drag_to_json(p);
  for (const auto& [pr, p] : vendor_cr)
    j["vendor_cr"][pair_key(pr)] = gs_to_json(p);
  for (const auto& [q, e] : rx) j["rx"][std::to_string(q)] = e.to_json();
  for (const auto& [pr, e] : zx) j["zx"][pair_key(pr)] = e.to_json();
  return j;
}

PulseLibrary PulseLibrary::from_json(const nlohmann::json& j) {
  PulseLibrary lib;
  if (j.contains("vendor_x"))
    for (const auto& [k, v] : j.at("vendor_x").items())
      lib.vendor_x.emplace(std::stoi(k), drag_from_json(v));
  if (j.contains("vendor_cr"))
    for (const auto& [k, v] : j.at("vendor_cr").items())
      lib.vendor_cr.emplace(parse_pair_key(k), gs_from_json(v));
  if (j.contains("rx"))
    for (const auto& [k, v] : j.at("rx").items())
      lib.rx.emplace(std::stoi(k), RxEntry::from_json(v));
  if (j.contains("zx"))
    for (const auto& [k, v] : j.at("zx").items())
      lib.zx.emplace(parse_pair_key(k), ZxEntry::from_json(v));
  return lib;
}

PulseLibrary vendor_library(const nlohmann::json& device_info) {
  PulseLibrary lib;
  const auto& qs = device_info.at("qubits");
  for (size_t q = 0; q < qs.size(); ++q) {
    const auto& x = qs[q].at("x");
    lib.vendor_x.emplace(
        static_cast<int>(q),
        DragPulse(x.at("amp").get<double>(), x.at("duration").get<int64_t>(),
                  x.at("sigma").get<double>(), x.at("beta").get<double>()));
  }
  for (const auto& p : device_info.at("pairs")) {
    const auto& cr = p.at("cr");
    lib.vendor_cr.emplace(
        std::make_pair(p.at("control").get<int>(), p.at("target").get<int>()),
        GaussianSquarePulse(cr.at("amp").get<double>(),
                            cr.at("width").get<double>(),
                            cr.at("duration").get<int64_t>(),
                            cr.at("sigma").get<double>()));
  }
  return lib;
}

SinFit ideal_fit(double a0) {
  SinFit f;
  f.a1 = 1.0;
  f.omega = M_PI / (2.0 * a0);
  f.phi = 0.0;
  f.delta = 0.0;
  return f;
}

RxEntry ideal_rx_entry(const DragPulse& x_pulse, double ts) {
  RxEntry e;
  e.x_pulse = x_pulse;
  e.a0 = x_pulse.amp;
  e.t0 = x_pulse.duration;
  e.fit = ideal_fit(x_pulse.amp);
  e.ts = ts;
  return e;
}

}  // namespace squeeze
