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

#include "squeeze/pulse.hpp"

#include <algorithm>
#include <cmath>

namespace squeeze {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// Solves sqrt(2*pi) * s * erf(half_len / (sqrt(2) * s)) = target for the
// flank standard deviation s. The left side grows monotonically from 0
// (s -> 0) to 2 * half_len (s -> inf), so a solution exists whenever the
// target area fits under a unit-height flank. Returns sigma0 unchanged
// when it does not (degenerate, very square flanks).
double solve_flank_sigma(double half_len, double target, double sigma0) {
  auto flank_area = [&](double s) {
    return kSqrt2Pi * s * std::erf(half_len / (std::sqrt(2.0) * s));
  };
  if (target >= 2.0 * half_len || target <= 0.0) return sigma0;
  double lo = sigma0 * 1e-3, hi = sigma0;
  while (flank_area(hi) < target) {
    hi *= 2.0;
    if (hi > sigma0 * 1e6) return sigma0;
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (flank_area(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DragPulse::DragPulse(double amp, int64_t duration, double sigma, double beta)
    : amp(amp), duration(duration), sigma(sigma), beta(beta) {
  require(amp >= 0.0 && amp <= 1.0, "drag amplitude outside [0, 1]");
  require(duration > 0 && duration % kDtAlign == 0,
          "drag duration must be a positive multiple of 16 dt");
  require(sigma > 0.0, "drag sigma must be positive");
}

GaussianSquarePulse::GaussianSquarePulse(double amp, double width,
                                         int64_t duration, double sigma,
                                         int sign)
    : amp(amp), width(width), duration(duration), sigma(sigma), sign(sign) {
  require(amp > 0.0 && amp <= 1.0, "gs amplitude outside (0, 1]");
  require(duration > 0 && duration % kDtAlign == 0,
          "gs duration must be a positive multiple of 16 dt");
  require(width >= 0.0 && width <= static_cast<double>(duration),
          "gs width outside [0, duration]");
  require(sigma > 0.0, "gs sigma must be positive");
  require(sign == 1 || sign == -1, "gs sign must be +1 or -1");
}

std::string Channel::str() const {
  if (kind == Kind::Drive) return "d" + std::to_string(q0);
  return "u" + std::to_string(q0) + "_" + std::to_string(q1);
}

int64_t Instruction::duration() const {
  if (const auto* d = std::get_if<DragPulse>(&payload)) return d->duration;
  if (const auto* g = std::get_if<GaussianSquarePulse>(&payload))
    return g->duration;
  return 0;
}

void Schedule::add(Channel ch, int64_t t0, InstructionPayload payload) {
  if (t0 < 0) throw std::invalid_argument("instruction start time negative");
  Instruction in{ch, t0, std::move(payload)};
  int64_t end = t0 + in.duration();
  if (in.is_pulse()) {
    for (const auto& other : instructions_) {
      if (!(other.channel == ch) || !other.is_pulse()) continue;
      int64_t oend = other.t0 + other.duration();
      if (t0 < oend && other.t0 < end)
        throw std::invalid_argument("overlapping pulses on channel " +
                                    ch.str());
    }
  }
  instructions_.push_back(std::move(in));
}

int64_t Schedule::duration() const {
  int64_t d = 0;
  for (const auto& in : instructions_)
    d = std::max(d, in.t0 + in.duration());
  return d;
}

std::vector<Channel> Schedule::channels() const {
  std::vector<Channel> out;
  for (const auto& in : instructions_) {
    if (std::find(out.begin(), out.end(), in.channel) == out.end())
      out.push_back(in.channel);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Schedule::mark_measured(int qubit) {
  if (std::find(measured_.begin(), measured_.end(), qubit) == measured_.end())
    measured_.push_back(qubit);
}

double gs_area_params(double amp, double width, double duration,
                      double sigma) {
  double n = (duration - width) / sigma;
  return std::abs(amp) * (width + kSqrt2Pi * sigma * std::erf(n));
}

double gs_area(const GaussianSquarePulse& p) {
  return gs_area_params(p.amp, p.width, static_cast<double>(p.duration),
                        p.sigma);
}

double drag_area_params(double amp, double duration, double sigma) {
  double half = duration / 2.0;
  double lift = std::exp(-half * half / (2.0 * sigma * sigma));
  double raw =
      kSqrt2Pi * sigma * std::erf(half / (std::sqrt(2.0) * sigma)) -
      duration * lift;
  return amp * raw / (1.0 - lift);
}

double drag_area(const DragPulse& p) {
  return drag_area_params(p.amp, static_cast<double>(p.duration), p.sigma);
}

std::complex<double> envelope_at(const DragPulse& p, double t) {
  double d = static_cast<double>(p.duration);
  if (t < 0.0 || t > d) throw std::domain_error("sample time outside pulse");
  double half = d / 2.0;
  double lift = std::exp(-half * half / (2.0 * p.sigma * p.sigma));
  double g = std::exp(-(t - half) * (t - half) / (2.0 * p.sigma * p.sigma));
  double re = p.amp * (g - lift) / (1.0 - lift);
  // d/dt of the (unlifted) Gaussian; the lift is constant in t.
  double dg = -(t - half) / (p.sigma * p.sigma) * g;
  double im = p.beta * p.amp * dg / (1.0 - lift);
  return {re, im};
}

std::complex<double> envelope_at(const GaussianSquarePulse& p, double t) {
  double d = static_cast<double>(p.duration);
  if (t < 0.0 || t > d) throw std::domain_error("sample time outside pulse");
  double half_len = (d - p.width) / 2.0;
  double a = p.amp * p.sign;
  if (t >= half_len && t <= half_len + p.width) return {a, 0.0};
  // Flank standard deviation chosen so the envelope integral reproduces
  // the closed-form area; the paper's erf(n_sigma) flank term holds more
  // area than flanks of std sigma would, so s comes out slightly wider.
  double target = kSqrt2Pi * p.sigma * std::erf(p.n_sigma());
  double s = solve_flank_sigma(half_len, target, p.sigma);
  double center = t < half_len ? half_len : half_len + p.width;
  double g = std::exp(-(t - center) * (t - center) / (2.0 * s * s));
  return {a * g, 0.0};
}

int64_t quantize_duration(double raw) {
  if (!(raw > 0.0)) throw std::domain_error("duration must be positive");
  auto q = static_cast<int64_t>(std::floor(raw / kDtAlign)) * kDtAlign;
  return std::max<int64_t>(q, kDtAlign);
}

int64_t schedule_duration(const Schedule& s) { return s.duration(); }

nlohmann::json Schedule::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits_;
  j["dt_ns"] = kDtNanoseconds;
  auto chans = channels();
  nlohmann::json jch = nlohmann::json::array();
  for (const auto& c : chans) {
    if (c.kind == Channel::Kind::Drive)
      jch.push_back({{"kind", "drive"}, {"index", c.q0}});
    else
      jch.push_back({{"kind", "control"}, {"pair", {c.q0, c.q1}}});
  }
  j["channels"] = jch;
  nlohmann::json jin = nlohmann::json::array();
  for (const auto& in : instructions_) {
    size_t ci = std::find(chans.begin(), chans.end(), in.channel) -
                chans.begin();
    nlohmann::json e{{"channel", ci}, {"t0", in.t0}};
    if (const auto* dp = std::get_if<DragPulse>(&in.payload)) {
      e["type"] = "drag";
      e["amp"] = dp->amp;
      e["duration"] = dp->duration;
      e["sigma"] = dp->sigma;
      e["beta"] = dp->beta;
    } else if (const auto* gp = std::get_if<GaussianSquarePulse>(&in.payload)) {
      e["type"] = "gs";
      e["amp"] = gp->amp;
      e["sign"] = gp->sign;
      e["width"] = gp->width;
      e["duration"] = gp->duration;
      e["sigma"] = gp->sigma;
    } else if (const auto* fc = std::get_if<FrameChange>(&in.payload)) {
      e["type"] = "fc";
      e["angle"] = fc->angle;
    } else {
      e["type"] = "barrier";
    }
    jin.push_back(std::move(e));
  }
  j["instructions"] = jin;
  j["duration"] = duration();
  if (!measured_.empty()) j["measured"] = measured_;
  return j;
}

Schedule Schedule::from_json(const nlohmann::json& j) {
  Schedule s(j.at("n_qubits").get<int>());
  std::vector<Channel> chans;
  for (const auto& c : j.at("channels")) {
    if (c.at("kind") == "drive")
      chans.push_back(Channel::drive(c.at("index").get<int>()));
    else
      chans.push_back(Channel::control(c.at("pair")[0].get<int>(),
                                       c.at("pair")[1].get<int>()));
  }
  for (const auto& e : j.at("instructions")) {
    const Channel& ch = chans.at(e.at("channel").get<size_t>());
    int64_t t0 = e.at("t0").get<int64_t>();
    std::string type = e.at("type").get<std::string>();
    if (type == "drag") {
      s.add(ch, t0,
            DragPulse(e.at("amp").get<double>(), e.at("duration").get<int64_t>(),
                      e.at("sigma").get<double>(), e.at("beta").get<double>()));
    } else if (type == "gs") {
      s.add(ch, t0,
            GaussianSquarePulse(
                e.at("amp").get<double>(), e.at("width").get<double>(),
                e.at("duration").get<int64_t>(), e.at("sigma").get<double>(),
                e.value("sign", 1)));
    } else if (type == "fc") {
      s.add(ch, t0, FrameChange{e.at("angle").get<double>()});
    } else if (type == "barrier") {
      s.add(ch, t0, Barrier{});
    } else {
      throw std::invalid_argument("unknown instruction type " + type);
    }
  }
  if (j.contains("measured"))
    for (int q : j.at("measured")) s.mark_measured(q);
  return s;
}

}  // namespace squeeze
