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

#include "squeeze/calib.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "squeeze/lm.hpp"

namespace squeeze {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2Pi = 2.5066282746310002;

double p1_from_counts(const std::map<std::string, int64_t>& counts,
                      int shots) {
  auto it = counts.find("1");
  double ones = it == counts.end() ? 0.0 : static_cast<double>(it->second);
  return ones / static_cast<double>(shots);
}

}  // namespace

nlohmann::json CalibSample::to_json() const {
  return {{"ts", ts}, {"amplitude", amplitude}, {"p1", p1}, {"shots", shots}};
}

CalibSample CalibSample::from_json(const nlohmann::json& j) {
  CalibSample s;
  s.ts = j.at("ts").get<double>();
  s.amplitude = j.at("amplitude").get<double>();
  s.p1 = j.at("p1").get<double>();
  s.shots = j.at("shots").get<int>();
  return s;
}

std::vector<int64_t> sweep_durations() {
  std::vector<int64_t> out;
  for (int64_t t = 64; t <= 160; t += 16) out.push_back(t);
  return out;
}

std::vector<double> amplitude_grid() {
  std::vector<double> out;
  for (int i = 0; i <= 50; ++i) out.push_back(i / 50.0);
  return out;
}

double sweep_threshold(int shots) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  return 0.995 - 3.0 * std::sqrt(0.995 * 0.005 / shots);
}

std::vector<CalibSample> amplitude_sweep(Backend& backend, int qubit,
                                         int64_t t0, double beta, int shots) {
  int n = backend.device_info().at("n_qubits").get<int>();
  std::vector<double> grid = amplitude_grid();
  JobRequest req;
  req.shots = shots;
  for (double a : grid) {
    Schedule s(n);
    s.add(Channel::drive(qubit), 0,
          DragPulse(a, t0, static_cast<double>(t0) / 4.0, beta));
    s.mark_measured(qubit);
    req.schedules.push_back(std::move(s));
  }
  JobResult res = backend.submit(req);
  std::vector<CalibSample> out;
  for (size_t i = 0; i < grid.size(); ++i) {
    CalibSample c;
    c.ts = res.completed_at;
    c.amplitude = grid[i];
    c.p1 = p1_from_counts(res.counts[i], shots);
    c.shots = shots;
    out.push_back(c);
  }
  return out;
}

SweepResult sweep_fastest_x(Backend& backend, int qubit, double beta,
                            int shots) {
  double threshold = sweep_threshold(shots);
  for (int64_t t : sweep_durations()) {
    std::vector<CalibSample> samples =
        amplitude_sweep(backend, qubit, t, beta, shots);
    size_t best = 0;
    for (size_t i = 1; i < samples.size(); ++i)
      if (samples[i].p1 > samples[best].p1) best = i;
    if (samples[best].p1 >= threshold) {
      SweepResult r;
      r.a0 = samples[best].amplitude;
      r.t0 = t;
      r.samples = std::move(samples);
      return r;
    }
  }
  throw CalibrationInfeasibleError(
      "no amplitude reaches the pi-pulse threshold at any scanned duration");
}

OutlierResult remove_outliers(const std::vector<CalibSample>& samples) {
  std::map<double, std::vector<size_t>> bins;
  for (size_t i = 0; i < samples.size(); ++i)
    bins[samples[i].amplitude].push_back(i);
  std::vector<char> keep(samples.size(), 1);
  OutlierResult out;
  for (const auto& [amp, idx] : bins) {
    if (idx.size() < 3) {
      out.warned_amplitudes.push_back(amp);
      continue;
    }
    double mean = 0.0;
    for (size_t i : idx) mean += samples[i].p1;
    mean /= static_cast<double>(idx.size());
    double var = 0.0;
    for (size_t i : idx) {
      double d = samples[i].p1 - mean;
      var += d * d;
    }
    var /= static_cast<double>(idx.size() - 1);
    double std_dev = std::sqrt(var);
    if (std_dev <= 0.0) continue;  // identical samples are never dropped
    for (size_t i : idx)
      if (std::abs(samples[i].p1 - mean) > 1.5 * std_dev) keep[i] = 0;
  }
  for (size_t i = 0; i < samples.size(); ++i)
    if (keep[i]) out.samples.push_back(samples[i]);
  return out;
}

std::vector<AveragedPoint> trailing_average(
    const std::vector<CalibSample>& samples, double now, double window) {
  std::map<double, std::pair<double, int64_t>> acc;
  for (const auto& s : samples) {
    if (s.ts < now - window || s.ts > now) continue;
    auto& slot = acc[s.amplitude];
    slot.first += s.p1 * s.shots;
    slot.second += s.shots;
  }
  if (acc.empty())
    throw EmptyDataError("no calibration samples inside the averaging window");
  std::vector<AveragedPoint> out;
  for (const auto& [amp, slot] : acc) {
    AveragedPoint p;
    p.amplitude = amp;
    p.p1 = slot.first / static_cast<double>(slot.second);
    p.shots = slot.second;
    out.push_back(p);
  }
  return out;
}

SinFit fit_sin2(const std::vector<AveragedPoint>& points) {
  if (points.size() < 8)
    throw std::invalid_argument("fit_sin2 needs at least 8 points");
  Eigen::VectorXd x(points.size()), y(points.size());
  double pmin = points[0].p1, pmax = points[0].p1;
  double a_at_max = points[0].amplitude;
  for (size_t i = 0; i < points.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = points[i].amplitude;
    y[static_cast<Eigen::Index>(i)] = points[i].p1;
    pmin = std::min(pmin, points[i].p1);
    if (points[i].p1 > pmax) {
      pmax = points[i].p1;
      a_at_max = points[i].amplitude;
    }
  }
  Eigen::VectorXd lower(4), upper(4), init(4);
  // Parameters: a1, omega, phi, delta.
  lower << 0.1, 0.05, -kPi, -0.2;
  upper << 1.2, 200.0, kPi, 0.2;
  double omega0 = a_at_max > 1e-6 ? kPi / (2.0 * a_at_max) : kPi;
  init << std::clamp(pmax - pmin, 0.1, 1.2), std::clamp(omega0, 0.05, 200.0),
      0.0, std::clamp(pmin, -0.2, 0.2);
  auto residuals = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double s = std::sin(p[1] * x[i] + p[2]);
      r[i] = p[0] * s * s + p[3] - y[i];
    }
    return r;
  };
  LmResult res = lm_fit(residuals, init, lower, upper);
  SinFit f;
  f.a1 = res.params[0];
  f.omega = res.params[1];
  f.phi = res.params[2];
  f.delta = res.params[3];
  f.residual = res.ssr;
  f.degenerate = f.a1 <= lower[0] + 1e-9 || f.a1 >= upper[0] - 1e-9 ||
                 f.omega <= lower[1] + 1e-9 || f.omega >= upper[1] - 1e-9;
  if (!res.converged)
    throw FitFailedError("sin^2 fit did not converge", f);
  return f;
}

double amplitude_for_theta(const SinFit& fit, double theta) {
  if (theta < -1e-12 || theta > kPi + 1e-9)
    throw std::domain_error("rotation angle outside [0, pi]");
  theta = std::clamp(theta, 0.0, kPi);
  if (fit.a1 <= 0.0 || fit.omega <= 0.0)
    throw InversionDomainError("fit parameters are not invertible");
  double s = std::sin(theta / 2.0);
  double arg = (s * s - fit.delta) / fit.a1;
  // Readout error squashes the measured curve, so a healthy fit can put
  // its peak slightly below 1 and push the argument just past the ends
  // at the extreme angles. Violations beyond the squash scale signal a
  // genuinely bad fit.
  if (arg < -0.1 || arg > 1.1)
    throw InversionDomainError("inversion argument outside [0, 1]");
  arg = std::clamp(arg, 0.0, 1.0);
  double a = (std::asin(std::sqrt(arg)) - fit.phi) / fit.omega;
  return std::clamp(a, 0.0, 1.0);
}

bool validate_rx(const RxEntry& candidate, const RxEntry& incumbent,
                 Backend& backend, int qubit, int shots) {
  std::vector<double> angles;
  for (int i = 1; i <= 8; ++i) angles.push_back(i * kPi / 8.0);
  auto pulse_for = [](const RxEntry& e, double theta) {
    double a = amplitude_for_theta(e.fit, theta);
    return DragPulse(a, e.t0, static_cast<double>(e.t0) / 4.0,
                     e.x_pulse.beta);
  };
  std::vector<DragPulse> cand, inc;
  for (double th : angles) {
    cand.push_back(pulse_for(candidate, th));
    inc.push_back(pulse_for(incumbent, th));
  }
  bool identical = true;
  for (size_t i = 0; i < angles.size(); ++i) {
    if (cand[i].amp != inc[i].amp || cand[i].duration != inc[i].duration ||
        cand[i].sigma != inc[i].sigma || cand[i].beta != inc[i].beta) {
      identical = false;
      break;
    }
  }
  // Identical pulse sets would be measured identically; the comparison
  // is a tie and ties keep the incumbent.
  if (identical) return false;
  int n = backend.device_info().at("n_qubits").get<int>();
  JobRequest req;
  req.shots = shots;
  for (const auto& pulses : {cand, inc}) {
    for (const auto& p : pulses) {
      Schedule s(n);
      s.add(Channel::drive(qubit), 0, p);
      s.mark_measured(qubit);
      req.schedules.push_back(std::move(s));
    }
  }
  JobResult res;
  try {
    res = backend.submit(req);
  } catch (const std::exception& e) {
    throw ValidationInconclusiveError(std::string("backend failure: ") +
                                      e.what());
  }
  double err_cand = 0.0, err_inc = 0.0;
  for (size_t i = 0; i < angles.size(); ++i) {
    double ideal = std::sin(angles[i] / 2.0);
    ideal *= ideal;
    err_cand += 2.0 * std::abs(p1_from_counts(res.counts[i], shots) - ideal);
    err_inc += 2.0 * std::abs(
                         p1_from_counts(res.counts[angles.size() + i], shots) -
                         ideal);
  }
  return err_cand < err_inc;
}

std::vector<Particle> initial_particle_grid() {
  std::vector<Particle> out;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      double c = 1.0 + kParticleSpacingC * i;
      double k = 0.9 + kParticleSpacingK * j;
      if (i == 0 && j == 2) continue;  // the (1, 1) cell is the baseline
      Particle p;
      p.c = c;
      p.k = k;
      out.push_back(p);
    }
  }
  Particle base;
  base.baseline = true;
  out.push_back(base);
  return out;
}

GaussianSquarePulse scale_cr(const GaussianSquarePulse& base, double c,
                             double k) {
  if (c < 1.0)
    throw std::invalid_argument("duration scaling factor c must be >= 1");
  if (k <= 0.0)
    throw std::invalid_argument("amplitude factor k must be positive");
  double a_prime = c * base.amp;
  double f = gs_area(base);
  double n_sig = base.n_sigma();
  double applied = k * a_prime;
  if (applied > 1.0 + 1e-12)
    throw AmplitudeOverflowError("scaled CR amplitude exceeds 1");
  applied = std::min(applied, 1.0);
  double w_prime = f / a_prime - kSqrt2Pi * base.sigma;
  if (w_prime < 0.0)
    throw WidthUnderflowError("c too large: flat-top width went negative");
  int64_t d_prime = quantize_duration(w_prime + base.sigma * n_sig);
  GaussianSquarePulse out(applied, w_prime, d_prime, base.sigma, base.sign);
  // The rescale trades area only through the 16-dt duration floor and
  // the erf(n_sigma) ~ 1 flank approximation; anything larger means the
  // formulas above were applied wrong.
  double bound = k * a_prime * kSqrt2Pi * base.sigma *
                     (1.0 - std::erf(n_sig - 16.0 / base.sigma)) +
                 1e-9;
  if (std::abs(gs_area(out) - k * f) > bound)
    throw std::logic_error("rescaled CR pulse lost more area than the "
                           "quantization bound allows");
  return out;
}

void append_drag(Schedule& s, std::vector<int64_t>& cursor, int qubit,
                 const DragPulse& p) {
  s.add(Channel::drive(qubit), cursor[qubit], p);
  cursor[qubit] += p.duration;
}

void append_fc(Schedule& s, std::vector<int64_t>& cursor, int qubit,
               double angle) {
  s.add(Channel::drive(qubit), cursor[qubit], FrameChange{angle});
}

void append_cr(Schedule& s, std::vector<int64_t>& cursor, int control,
               int target, const GaussianSquarePulse& p) {
  int64_t t0 = std::max(cursor[control], cursor[target]);
  s.add(Channel::control(control, target), t0, p);
  cursor[control] = t0 + p.duration;
  cursor[target] = t0 + p.duration;
}

void append_echoed_cnot(Schedule& s, std::vector<int64_t>& cursor,
                        int control, int target,
                        const GaussianSquarePulse& cr_plus,
                        const GaussianSquarePulse& cr_minus,
                        const DragPulse& x_control,
                        const DragPulse& half_x_target) {
  // CNOT = Rzx(pi/2) * (Rz(-pi/2) on control) * (Rx(-pi/2) on target)
  // up to global phase; the single-qubit factors commute with Rzx and
  // run first. Rx(-pi/2) is the half-amplitude pulse inside a pi frame
  // rotation on each side.
  append_fc(s, cursor, control, -kPi / 2.0);
  append_fc(s, cursor, target, kPi);
  append_drag(s, cursor, target, half_x_target);
  append_fc(s, cursor, target, kPi);
  append_cr(s, cursor, control, target, cr_plus);
  append_drag(s, cursor, control, x_control);
  append_cr(s, cursor, control, target, cr_minus);
  append_drag(s, cursor, control, x_control);
}

void score_particles(std::vector<Particle>& particles,
                     std::pair<int, int> pair, Backend& backend, int shots) {
  nlohmann::json info = backend.device_info();
  int n = info.at("n_qubits").get<int>();
  PulseLibrary vendor = vendor_library(info);
  const DragPulse* xc = vendor.find_vendor_x(pair.first);
  const DragPulse* xt = vendor.find_vendor_x(pair.second);
  const GaussianSquarePulse* cr =
      vendor.find_vendor_cr(pair.first, pair.second);
  if (!xc || !xt || !cr)
    throw DeviceError("qubit pair is not present on the device");
  DragPulse half_x(xt->amp / 2.0, xt->duration, xt->sigma, xt->beta);
  JobRequest req;
  req.shots = shots;
  struct Slot {
    size_t particle;
    int prep;
  };
  std::vector<Slot> slots;
  for (size_t i = 0; i < particles.size(); ++i) {
    Particle& p = particles[i];
    p.score = 0.0;
    GaussianSquarePulse scaled;
    try {
      scaled = scale_cr(*cr, p.c, p.k);
      p.valid = true;
    } catch (const AmplitudeOverflowError&) {
      p.valid = false;
      continue;
    } catch (const WidthUnderflowError&) {
      p.valid = false;
      continue;
    } catch (const std::invalid_argument&) {
      p.valid = false;
      continue;
    }
    GaussianSquarePulse plus = scaled;
    plus.sign = +1;
    GaussianSquarePulse minus = scaled;
    minus.sign = -1;
    for (int prep = 0; prep < 4; ++prep) {
      Schedule s(n);
      std::vector<int64_t> cursor(n, 0);
      if (prep & 2) append_drag(s, cursor, pair.first, *xc);
      if (prep & 1) append_drag(s, cursor, pair.second, *xt);
      append_echoed_cnot(s, cursor, pair.first, pair.second, plus, minus, *xc,
                         half_x);
      s.mark_measured(pair.first);
      s.mark_measured(pair.second);
      req.schedules.push_back(std::move(s));
      slots.push_back({i, prep});
    }
  }
  if (req.schedules.empty()) return;
  JobResult res = backend.submit(req);
  for (size_t j = 0; j < slots.size(); ++j) {
    int cbit = (slots[j].prep >> 1) & 1;
    int tbit = slots[j].prep & 1;
    std::string ideal;
    ideal += static_cast<char>('0' + cbit);
    ideal += static_cast<char>('0' + (tbit ^ cbit));
    const auto& counts = res.counts[j];
    auto it = counts.find(ideal);
    double good = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    // Against a point-mass ideal, 1 - L1/2 is exactly the probability
    // of the correct outcome.
    particles[slots[j].particle].score += 0.25 * good / shots;
  }
}

double score_particle(Particle& p, std::pair<int, int> pair, Backend& backend,
                      int shots) {
  std::vector<Particle> one{p};
  score_particles(one, pair, backend, shots);
  p = one[0];
  return p.score;
}

std::vector<Particle> particle_filter_round(const std::vector<Particle>& gen,
                                            std::mt19937_64& rng,
                                            std::pair<double, double>
                                                spacing0) {
  if (gen.empty()) throw std::invalid_argument("empty particle generation");
  const Particle* baseline = nullptr;
  size_t best = 0;
  for (size_t i = 0; i < gen.size(); ++i) {
    if (gen[i].baseline && baseline == nullptr) baseline = &gen[i];
    if (gen[i].score > gen[best].score ||
        (gen[i].score == gen[best].score && gen[i].c > gen[best].c))
      best = i;
  }
  if (baseline != nullptr) {
    bool strictly_best = true;
    for (const auto& p : gen)
      if (!p.baseline && p.score >= baseline->score) {
        strictly_best = false;
        break;
      }
    if (strictly_best) return initial_particle_grid();
  }
  std::vector<double> weights(gen.size());
  double sum = 0.0;
  for (size_t i = 0; i < gen.size(); ++i) {
    weights[i] = std::pow(std::clamp(gen[i].score, 0.0, 1.0), 32);
    sum += weights[i];
  }
  if (sum <= 0.0) std::fill(weights.begin(), weights.end(), 1.0);
  std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<double> jitter_c(0.0, spacing0.first / 2.0);
  std::normal_distribution<double> jitter_k(0.0, spacing0.second / 2.0);
  std::vector<Particle> next;
  for (int i = 0; i < 23; ++i) {
    const Particle& parent = gen[pick(rng)];
    Particle q;
    q.c = std::max(1.0, parent.c + jitter_c(rng));
    q.k = std::max(1e-3, parent.k + jitter_k(rng));
    next.push_back(q);
  }
  Particle elite;
  elite.c = gen[best].c;
  elite.k = gen[best].k;
  elite.score = gen[best].score;
  next.push_back(elite);
  Particle base;
  base.baseline = true;
  next.push_back(base);
  return next;
}

std::optional<std::pair<GaussianSquarePulse, GaussianSquarePulse>>
scaled_cr_pair(const GaussianSquarePulse& base, double c, double k,
               double theta) {
  if (theta < -1e-12 || theta > kPi + 1e-9)
    throw std::domain_error("rzx angle outside [0, pi]");
  theta = std::clamp(theta, 0.0, kPi);
  if (c < 1.0)
    throw std::invalid_argument("duration scaling factor c must be >= 1");
  if (k <= 0.0)
    throw std::invalid_argument("amplitude factor k must be positive");
  double f_base = gs_area(base);
  // Each half of the echo turns by theta/2, a quarter turn of which is
  // worth k * f_base of area.
  double target = (2.0 * theta / kPi) * k * f_base;
  if (target < 1e-12) return std::nullopt;
  double sigma = base.sigma;
  double n_base = base.n_sigma();
  double amp = c * k * base.amp;
  if (amp > 1.0 + 1e-12)
    throw AmplitudeOverflowError("scaled CR amplitude exceeds 1");
  amp = std::min(amp, 1.0);
  double flank_full = gs_area_params(1.0, 0.0, n_base * sigma, sigma);
  double w_raw = target / amp - flank_full;
  int64_t dq = quantize_duration(std::max(w_raw, 0.0) + sigma * n_base);
  auto area_at = [&](double n) {
    return gs_area_params(amp, static_cast<double>(dq) - n * sigma,
                          static_cast<double>(dq), sigma);
  };
  // The area is strictly decreasing in the flank count n past ~1.02, so
  // the width can be bisected against the closed form. Below n_lo the
  // flat top would swallow the flanks entirely; above d/sigma the width
  // would go negative.
  const double n_lo = 1.05;
  while (static_cast<double>(dq) / sigma > n_lo && area_at(n_lo) < target)
    dq += 16;
  double n_hi = static_cast<double>(dq) / sigma;
  double width;
  if (n_hi <= n_lo || area_at(n_hi) >= target) {
    // Flanks alone cover the target: zero width, amplitude solved
    // linearly instead.
    width = 0.0;
    double unit = gs_area_params(1.0, 0.0, static_cast<double>(dq), sigma);
    amp = target / unit;
    if (amp > 1.0 + 1e-12)
      throw AmplitudeOverflowError("flank-only CR amplitude exceeds 1");
    amp = std::min(amp, 1.0);
  } else {
    double lo = n_lo, hi = n_hi;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if (area_at(mid) >= target)
        lo = mid;
      else
        hi = mid;
    }
    double n = 0.5 * (lo + hi);
    width = std::max(static_cast<double>(dq) - n * sigma, 0.0);
  }
  GaussianSquarePulse plus(amp, width, dq, sigma, +1);
  GaussianSquarePulse minus(amp, width, dq, sigma, -1);
  return std::make_pair(plus, minus);
}

Schedule rzx_schedule(double theta, const CrCalibration& cal, int control,
                      int target, const DragPulse& x_control, int n_qubits) {
  if (theta < -1e-12 || theta > kPi + 1e-9)
    throw std::domain_error("rzx angle outside [0, pi]");
  theta = std::clamp(theta, 0.0, kPi);
  Schedule s(n_qubits);
  std::vector<int64_t> cursor(static_cast<size_t>(n_qubits), 0);
  auto pulses = scaled_cr_pair(cal.base, cal.best_c, cal.best_k, theta);
  if (!pulses) {
    // Negligible rotation: the echo collapses to its two X pulses,
    // which cancel up to a global phase.
    append_drag(s, cursor, control, x_control);
    append_drag(s, cursor, control, x_control);
    return s;
  }
  append_cr(s, cursor, control, target, pulses->first);
  append_drag(s, cursor, control, x_control);
  append_cr(s, cursor, control, target, pulses->second);
  append_drag(s, cursor, control, x_control);
  return s;
}

}  // namespace squeeze
