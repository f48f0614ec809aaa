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

#include "squeeze/device.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace squeeze {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

Eigen::Matrix2cd rx2(double a) {
  Eigen::Matrix2cd m;
  m << std::cos(a / 2), -kI * std::sin(a / 2), -kI * std::sin(a / 2),
      std::cos(a / 2);
  return m;
}

Eigen::Matrix2cd rz2(double a) {
  Eigen::Matrix2cd m;
  m << std::exp(-kI * (a / 2)), 0, 0, std::exp(kI * (a / 2));
  return m;
}

Eigen::Matrix2cd pauli(int which) {
  Eigen::Matrix2cd m;
  switch (which) {
    case 0:
      m << 0, 1, 1, 0;
      break;
    case 1:
      m << 0, -kI, kI, 0;
      break;
    default:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

// One resolved schedule step: the unitary it applies and the qubits that
// can catch a depolarization event during it.
struct Step {
  Eigen::MatrixXcd matrix;
  std::vector<int> qubits;
  std::vector<int> noise_qubits;
  int64_t duration = 0;
};

std::vector<Step> resolve_steps(const Schedule& s, const DeviceModel& d) {
  std::vector<size_t> order(s.instructions().size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return s.instructions()[a].t0 < s.instructions()[b].t0;
  });

  std::vector<Step> steps;
  for (size_t idx : order) {
    const Instruction& in = s.instructions()[idx];
    const Channel& ch = in.channel;
    if (ch.kind == Channel::Kind::Drive) {
      if (ch.q0 < 0 || ch.q0 >= d.n_qubits)
        throw DeviceError("no drive channel for qubit " +
                          std::to_string(ch.q0));
      const QubitModel& qm = d.qubits[ch.q0];
      if (const auto* fc = std::get_if<FrameChange>(&in.payload)) {
        steps.push_back({rz2(fc->angle), {ch.q0}, {}, 0});
      } else if (const auto* dp = std::get_if<DragPulse>(&in.payload)) {
        double angle = M_PI * qm.gain * drag_area(*dp) / qm.ref_area();
        // Zero-amplitude placeholders keep channel timing aligned but
        // drive nothing, so they contribute no decoherence window.
        std::vector<int> sites;
        if (dp->amp != 0.0) sites.push_back(ch.q0);
        steps.push_back({rx2(angle), {ch.q0}, sites, dp->duration});
      } else if (std::holds_alternative<GaussianSquarePulse>(in.payload)) {
        throw DeviceError("flat-top pulses only exist on control channels");
      }
      // Barriers carry no operation.
    } else {
      auto it = d.pairs.find({ch.q0, ch.q1});
      if (it == d.pairs.end())
        throw DeviceError("no control channel for pair " + ch.str());
      const auto* gp = std::get_if<GaussianSquarePulse>(&in.payload);
      if (!gp)
        throw DeviceError("control channels accept only flat-top pulses");
      const PairModel& pm = it->second;
      double angle =
          gp->sign * (M_PI / 4) * pm.gain * gs_area(*gp) / pm.cref();
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
      m.topLeftCorner<2, 2>() = rx2(angle);
      m.bottomRightCorner<2, 2>() = rx2(-angle);
      steps.push_back(
          {m, {ch.q0, ch.q1}, {ch.q0, ch.q1}, gp->duration});
    }
  }
  return steps;
}

std::vector<int> measured_or_all(const Schedule& s, const DeviceModel& d) {
  if (!s.measured().empty()) {
    for (int q : s.measured())
      if (q < 0 || q >= d.n_qubits)
        throw DeviceError("measured qubit out of range");
    return s.measured();
  }
  std::vector<int> all(d.n_qubits);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::string outcome_string(Eigen::Index basis, const std::vector<int>& meas) {
  std::string out(meas.size(), '0');
  for (size_t j = 0; j < meas.size(); ++j)
    if (basis & (Eigen::Index{1} << meas[j])) out[j] = '1';
  return out;
}

Eigen::Index sample_basis(const Eigen::VectorXcd& state,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    acc += std::norm(state(i));
    if (u <= acc) return i;
  }
  return state.size() - 1;
}

}  // namespace

DeviceModel DeviceModel::from_json(const nlohmann::json& j) {
  DeviceModel d;
  d.n_qubits = j.at("n_qubits").get<int>();
  d.coupling = CouplingMap::from_json(j.at("coupling"));
  for (const auto& q : j.at("qubits")) {
    QubitModel qm;
    const auto& x = q.at("x");
    qm.vendor_x =
        DragPulse(x.at("amp").get<double>(), x.at("duration").get<int64_t>(),
                  x.at("sigma").get<double>(), x.value("beta", 0.0));
    qm.gain = q.value("gain", 1.0);
    qm.p01 = q.value("p01", 0.0);
    qm.p10 = q.value("p10", 0.0);
    if (qm.gain <= 0) throw std::invalid_argument("gain must be positive");
    if (qm.p01 < 0 || qm.p01 >= 0.5 || qm.p10 < 0 || qm.p10 >= 0.5)
      throw std::invalid_argument("confusion probabilities must be in [0, 0.5)");
    d.qubits.push_back(qm);
  }
  if (static_cast<int>(d.qubits.size()) != d.n_qubits)
    throw std::invalid_argument("qubit list does not match n_qubits");
  for (const auto& p : j.at("pairs")) {
    PairModel pm;
    const auto& cr = p.at("cr");
    pm.vendor_cr = GaussianSquarePulse(
        cr.at("amp").get<double>(), cr.at("width").get<double>(),
        cr.at("duration").get<int64_t>(), cr.at("sigma").get<double>());
    pm.gain = p.value("gain", 1.0);
    if (pm.gain <= 0) throw std::invalid_argument("gain must be positive");
    d.pairs.emplace(
        std::make_pair(p.at("control").get<int>(), p.at("target").get<int>()),
        pm);
  }
  d.lambda_dep = j.value("lambda_dep", 0.0);
  if (d.lambda_dep < 0) throw std::invalid_argument("lambda_dep must be >= 0");
  if (j.contains("drift")) {
    d.drift.sigma = j.at("drift").value("sigma", 0.01);
    d.drift.tau_seconds = j.at("drift").value("tau_seconds", 43200.0);
    if (d.drift.sigma < 0 || d.drift.tau_seconds <= 0)
      throw std::invalid_argument("drift needs sigma >= 0 and tau > 0");
  }
  d.queue_delay = j.value("queue_delay", 0.0);
  d.seed = j.value("seed", uint64_t{1});
  d.rng.seed(d.seed);
  return d;
}

nlohmann::json DeviceModel::vendor_info() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["dt_ns"] = kDtNanoseconds;
  j["clock"] = clock;
  j["coupling"] = coupling.to_json();
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& q : qubits) {
    qs.push_back({{"x",
                   {{"amp", q.vendor_x.amp},
                    {"duration", q.vendor_x.duration},
                    {"sigma", q.vendor_x.sigma},
                    {"beta", q.vendor_x.beta}}}});
  }
  j["qubits"] = qs;
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& [key, p] : pairs) {
    ps.push_back({{"control", key.first},
                  {"target", key.second},
                  {"cr",
                   {{"amp", p.vendor_cr.amp},
                    {"width", p.vendor_cr.width},
                    {"duration", p.vendor_cr.duration},
                    {"sigma", p.vendor_cr.sigma}}}});
  }
  j["pairs"] = ps;
  return j;
}

void DeviceModel::advance_clock(double seconds) {
  if (seconds < 0) throw std::invalid_argument("time moves forward only");
  clock += seconds;
  if (drift.sigma == 0.0) return;
  drift_accum_ += seconds;
  constexpr double kStep = 60.0;
  double decay = std::exp(-kStep / drift.tau_seconds);
  double kick = drift.sigma * std::sqrt(1.0 - decay * decay);
  std::normal_distribution<double> normal(0.0, 1.0);
  while (drift_accum_ >= kStep) {
    drift_accum_ -= kStep;
    for (auto& q : qubits)
      q.gain = 1.0 + (q.gain - 1.0) * decay + kick * normal(rng);
    for (auto& [key, p] : pairs)
      p.gain = 1.0 + (p.gain - 1.0) * decay + kick * normal(rng);
  }
}

Eigen::VectorXcd evolve_noiseless(const Schedule& s, const DeviceModel& d) {
  Eigen::VectorXcd state =
      Eigen::VectorXcd::Zero(Eigen::Index{1} << d.n_qubits);
  state(0) = 1.0;
  for (const auto& step : resolve_steps(s, d))
    apply_to_state(state, step.matrix, step.qubits);
  return state;
}

Eigen::VectorXcd evolve(const Schedule& s, DeviceModel& d, bool noiseless) {
  if (noiseless) return evolve_noiseless(s, d);
  Eigen::VectorXcd state =
      Eigen::VectorXcd::Zero(Eigen::Index{1} << d.n_qubits);
  state(0) = 1.0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> which(0, 2);
  for (const auto& step : resolve_steps(s, d)) {
    apply_to_state(state, step.matrix, step.qubits);
    for (int q : step.noise_qubits) {
      double p = 1.0 - std::exp(-d.lambda_dep *
                                static_cast<double>(step.duration));
      if (unif(d.rng) < p)
        apply_to_state(state, pauli(which(d.rng)), {q});
    }
  }
  return state;
}

Eigen::MatrixXcd schedule_unitary(const Schedule& s, const DeviceModel& d) {
  if (d.n_qubits > 5)
    throw ResourceError("schedule unitary limited to 5 qubits");
  const Eigen::Index dim = Eigen::Index{1} << d.n_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& step : resolve_steps(s, d)) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::VectorXcd v = u.col(col);
      apply_to_state(v, step.matrix, step.qubits);
      u.col(col) = v;
    }
  }
  return u;
}

std::map<std::string, double> exact_distribution(const Schedule& s,
                                                 const DeviceModel& d) {
  Eigen::VectorXcd state = evolve_noiseless(s, d);
  std::vector<int> meas = measured_or_all(s, d);
  std::map<std::string, double> dist;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    double p = std::norm(state(i));
    if (p > 0) dist[outcome_string(i, meas)] += p;
  }
  return dist;
}

JobResult SimBackend::submit(const JobRequest& req) {
  std::lock_guard<std::mutex> lock(mu_);
  if (static_cast<int>(req.schedules.size()) > kMaxSchedulesPerJob)
    throw BatchLimitError("at most " + std::to_string(kMaxSchedulesPerJob) +
                          " schedules per submission");
  if (req.shots <= 0) throw std::invalid_argument("shots must be positive");

  DeviceModel& d = model_;
  d.advance_clock(d.queue_delay);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> which(0, 2);

  JobResult result;
  for (const Schedule& s : req.schedules) {
    auto steps = resolve_steps(s, d);
    std::vector<int> meas = measured_or_all(s, d);

    // Depolarization sites in execution order, each striking one qubit
    // right after its pulse with an independent probability.
    struct Site {
      size_t step;
      int qubit;
      double p;
    };
    std::vector<Site> sites;
    if (d.lambda_dep > 0) {
      for (size_t i = 0; i < steps.size(); ++i) {
        double p = 1.0 - std::exp(-d.lambda_dep *
                                  static_cast<double>(steps[i].duration));
        for (int q : steps[i].noise_qubits)
          if (p > 0) sites.push_back({i, q, p});
      }
    }

    const Eigen::Index dim = Eigen::Index{1} << d.n_qubits;
    Eigen::VectorXcd clean = Eigen::VectorXcd::Zero(dim);
    clean(0) = 1.0;
    // Post-step noiseless states, shared by every shot whose first
    // depolarization event lands later.
    std::vector<Eigen::VectorXcd> after;
    after.reserve(steps.size());
    for (const auto& step : steps) {
      apply_to_state(clean, step.matrix, step.qubits);
      if (!sites.empty()) after.push_back(clean);
    }

    double p_clean = 1.0;
    std::vector<double> first_event_cdf(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) {
      first_event_cdf[i] =
          (i ? first_event_cdf[i - 1] : 0.0) + p_clean * sites[i].p;
      p_clean *= 1.0 - sites[i].p;
    }

    std::map<std::string, int64_t> counts;
    for (int shot = 0; shot < req.shots; ++shot) {
      Eigen::Index basis;
      if (sites.empty() || unif(d.rng) < p_clean) {
        basis = sample_basis(clean, d.rng);
      } else {
        double v = unif(d.rng) * first_event_cdf.back();
        size_t first =
            std::lower_bound(first_event_cdf.begin(), first_event_cdf.end(),
                             v) -
            first_event_cdf.begin();
        if (first >= sites.size()) first = sites.size() - 1;
        Eigen::VectorXcd state = after[sites[first].step];
        apply_to_state(state, pauli(which(d.rng)), {sites[first].qubit});
        size_t next = first + 1;
        for (size_t i = sites[first].step + 1; i <= steps.size(); ++i) {
          // Finish the remaining sites of the current step, then apply
          // the next step and its sites.
          while (next < sites.size() && sites[next].step < i) {
            if (unif(d.rng) < sites[next].p)
              apply_to_state(state, pauli(which(d.rng)),
                             {sites[next].qubit});
            ++next;
          }
          if (i == steps.size()) break;
          apply_to_state(state, steps[i].matrix, steps[i].qubits);
        }
        basis = sample_basis(state, d.rng);
      }
      // Readout confusion flips each measured bit independently.
      std::string out(meas.size(), '0');
      for (size_t j = 0; j < meas.size(); ++j) {
        bool one = basis & (Eigen::Index{1} << meas[j]);
        const QubitModel& qm = d.qubits[meas[j]];
        double flip = one ? qm.p10 : qm.p01;
        if (flip > 0 && unif(d.rng) < flip) one = !one;
        out[j] = one ? '1' : '0';
      }
      ++counts[out];
    }
    result.counts.push_back(std::move(counts));
  }
  result.completed_at = d.clock;
  return result;
}

nlohmann::json SimBackend::device_info() {
  std::lock_guard<std::mutex> lock(mu_);
  return model_.vendor_info();
}

void SimBackend::advance_time(double seconds) {
  std::lock_guard<std::mutex> lock(mu_);
  model_.advance_clock(seconds);
}

}  // namespace squeeze
