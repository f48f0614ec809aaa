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

#include "squeeze/transpile.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "squeeze/calib.hpp"

namespace squeeze {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAngleTol = 1e-9;

}  // namespace

Mode mode_from_string(const std::string& s) {
  if (s == "baseline") return Mode::Baseline;
  if (s == "gokhale") return Mode::Gokhale;
  if (s == "squeeze") return Mode::Squeeze;
  if (s == "earnest") return Mode::Earnest;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Baseline:
      return "baseline";
    case Mode::Gokhale:
      return "gokhale";
    case Mode::Squeeze:
      return "squeeze";
    case Mode::Earnest:
      return "earnest";
  }
  throw std::logic_error("unhandled mode");
}

double normalize_angle(double a) {
  double r = std::fmod(a + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

Circuit decompose_u3_baseline(double theta, double phi, double lambda) {
  Circuit c(1);
  c.add(GateKind::Rz, {0}, {lambda});
  c.add(GateKind::SqrtX, {0});
  c.add(GateKind::Rz, {0}, {theta + kPi});
  c.add(GateKind::SqrtX, {0});
  c.add(GateKind::Rz, {0}, {phi + 3.0 * kPi});
  return c;
}

Circuit decompose_u3_squeeze(double theta, double phi, double lambda) {
  Circuit c(1);
  c.add(GateKind::Rz, {0}, {lambda - kPi / 2.0});
  c.add(GateKind::Rx, {0}, {theta});
  c.add(GateKind::Rz, {0}, {phi + kPi / 2.0});
  return c;
}

Circuit decompose_u3_gokhale(double theta, double phi, double lambda) {
  return decompose_u3_squeeze(theta, phi, lambda);
}

Circuit negative_rx(double theta) {
  if (!(theta > 0.0 && theta <= kPi + 1e-12))
    throw std::domain_error("negative_rx requires theta in (0, pi]");
  Circuit c(1);
  c.add(GateKind::Rz, {0}, {kPi});
  c.add(GateKind::Rx, {0}, {std::min(theta, kPi)});
  c.add(GateKind::Rz, {0}, {kPi});
  return c;
}

Circuit decompose_two_qubit_rotation(GateKind kind, double theta) {
  Circuit c(2);
  switch (kind) {
    case GateKind::Rxx:
      c.add(GateKind::H, {0});
      c.add(GateKind::Rzx, {0, 1}, {theta});
      c.add(GateKind::H, {0});
      return c;
    case GateKind::Rzz:
      c.add(GateKind::H, {1});
      c.add(GateKind::Rzx, {0, 1}, {theta});
      c.add(GateKind::H, {1});
      return c;
    case GateKind::Ryy:
      c.add(GateKind::Rz, {0}, {-kPi / 2.0});
      c.add(GateKind::Rz, {1}, {-kPi / 2.0});
      c.add(GateKind::H, {0});
      c.add(GateKind::Rzx, {0, 1}, {theta});
      c.add(GateKind::H, {0});
      c.add(GateKind::Rz, {0}, {kPi / 2.0});
      c.add(GateKind::Rz, {1}, {kPi / 2.0});
      return c;
    case GateKind::CPhase:
      c.add(GateKind::H, {1});
      c.add(GateKind::Rzx, {0, 1}, {-theta / 2.0});
      c.add(GateKind::H, {1});
      c.add(GateKind::Rz, {0}, {theta / 2.0});
      c.add(GateKind::Rz, {1}, {theta / 2.0});
      return c;
    default:
      throw UnsupportedGateError("no single-Rzx rule for gate '" +
                                 gate_name(kind) + "'");
  }
}

Circuit decompose_csx(double theta) {
  Circuit c(2);
  c.add(GateKind::Rx, {1}, {theta / 2.0});
  c.add(GateKind::Rzx, {0, 1}, {-theta / 2.0});
  c.add(GateKind::Rz, {0}, {theta / 2.0});
  return c;
}

Circuit decompose_toffoli(char variant) {
  if (variant != 'A' && variant != 'B')
    throw std::invalid_argument("toffoli variant must be 'A' or 'B'");
  Circuit c(3);
  c.add(GateKind::CSqrtX, {1, 2});
  c.add(GateKind::Cnot, {0, 1});
  c.add(GateKind::Z, {2});
  c.add(GateKind::CSqrtX, {1, 2});
  c.add(GateKind::Z, {2});
  c.add(GateKind::Sdg, {1});
  if (variant == 'A') {
    c.add(GateKind::Cnot, {0, 1});
    c.add(GateKind::CSqrtX, {0, 2});
  } else {
    // The final two gates commute: both are controlled on qubit 0 and
    // act diagonally there.
    c.add(GateKind::CSqrtX, {0, 2});
    c.add(GateKind::Cnot, {0, 1});
  }
  return c;
}

std::set<GateKind> basis_for_mode(Mode m) {
  std::set<GateKind> basis{GateKind::Rx, GateKind::Rz, GateKind::Cnot,
                           GateKind::Measure};
  if (m == Mode::Squeeze || m == Mode::Earnest) basis.insert(GateKind::Rzx);
  return basis;
}

U3Style u3_style_for_mode(Mode m) {
  return (m == Mode::Baseline || m == Mode::Earnest) ? U3Style::TwoPulse
                                                     : U3Style::SinglePulse;
}

namespace {

void expand_gate(const Gate& g, const std::set<GateKind>& basis, U3Style u3,
                 Circuit& out);

void emit_template(const Circuit& templ, const std::vector<int>& qubits,
                   const std::set<GateKind>& basis, U3Style u3, Circuit& out) {
  for (const Gate& tg : templ.gates()) {
    Gate mapped = tg;
    for (int& q : mapped.qubits) q = qubits[static_cast<size_t>(q)];
    expand_gate(mapped, basis, u3, out);
  }
}

Circuit toffoli_cnot_basis() {
  Circuit c(3);
  c.add(GateKind::H, {2});
  c.add(GateKind::Cnot, {1, 2});
  c.add(GateKind::Tdg, {2});
  c.add(GateKind::Cnot, {0, 2});
  c.add(GateKind::T, {2});
  c.add(GateKind::Cnot, {1, 2});
  c.add(GateKind::Tdg, {2});
  c.add(GateKind::Cnot, {0, 2});
  c.add(GateKind::T, {1});
  c.add(GateKind::T, {2});
  c.add(GateKind::Cnot, {0, 1});
  c.add(GateKind::H, {2});
  c.add(GateKind::T, {0});
  c.add(GateKind::Tdg, {1});
  c.add(GateKind::Cnot, {0, 1});
  return c;
}

void expand_gate(const Gate& g, const std::set<GateKind>& basis, U3Style u3,
                 Circuit& out) {
  Gate gate = g;
  for (double& p : gate.params) p = normalize_angle(p);
  // Negative Rx needs the frame conjugation even though Rx is in every
  // basis: calibration only covers [0, pi].
  if (gate.kind == GateKind::Rx && gate.params[0] < 0.0) {
    out.add(GateKind::Rz, gate.qubits, {kPi});
    out.add(GateKind::Rx, gate.qubits, {-gate.params[0]});
    out.add(GateKind::Rz, gate.qubits, {kPi});
    return;
  }
  if (basis.count(gate.kind) > 0) {
    out.add(gate.kind, gate.qubits, gate.params);
    return;
  }
  switch (gate.kind) {
    case GateKind::U3: {
      Circuit t = u3 == U3Style::TwoPulse
                      ? decompose_u3_baseline(gate.params[0], gate.params[1],
                                              gate.params[2])
                      : decompose_u3_squeeze(gate.params[0], gate.params[1],
                                             gate.params[2]);
      emit_template(t, gate.qubits, basis, u3, out);
      return;
    }
    case GateKind::X:
      expand_gate({GateKind::Rx, gate.qubits, {kPi}}, basis, u3, out);
      return;
    case GateKind::SqrtX:
      expand_gate({GateKind::Rx, gate.qubits, {kPi / 2.0}}, basis, u3, out);
      return;
    case GateKind::H:
      out.add(GateKind::Rz, gate.qubits, {kPi / 2.0});
      expand_gate({GateKind::Rx, gate.qubits, {kPi / 2.0}}, basis, u3, out);
      out.add(GateKind::Rz, gate.qubits, {kPi / 2.0});
      return;
    case GateKind::T:
      out.add(GateKind::Rz, gate.qubits, {kPi / 4.0});
      return;
    case GateKind::Tdg:
      out.add(GateKind::Rz, gate.qubits, {-kPi / 4.0});
      return;
    case GateKind::S:
      out.add(GateKind::Rz, gate.qubits, {kPi / 2.0});
      return;
    case GateKind::Sdg:
      out.add(GateKind::Rz, gate.qubits, {-kPi / 2.0});
      return;
    case GateKind::Z:
      out.add(GateKind::Rz, gate.qubits, {kPi});
      return;
    case GateKind::Rxx:
    case GateKind::Ryy:
    case GateKind::Rzz:
    case GateKind::CPhase:
      emit_template(decompose_two_qubit_rotation(gate.kind, gate.params[0]),
                    gate.qubits, basis, u3, out);
      return;
    case GateKind::Rzx: {
      // Reached only when Rzx itself is not in the basis.
      int c = gate.qubits[0], t = gate.qubits[1];
      expand_gate({GateKind::H, {t}, {}}, basis, u3, out);
      out.add(GateKind::Cnot, {c, t});
      out.add(GateKind::Rz, {t}, {gate.params[0]});
      out.add(GateKind::Cnot, {c, t});
      expand_gate({GateKind::H, {t}, {}}, basis, u3, out);
      return;
    }
    case GateKind::CSqrtX:
      if (basis.count(GateKind::Rzx) > 0) {
        emit_template(decompose_csx(kPi / 2.0), gate.qubits, basis, u3, out);
      } else {
        // C(sqrt X) = controlled-phase(pi/2) conjugated into the X basis
        // on the target.
        expand_gate({GateKind::H, {gate.qubits[1]}, {}}, basis, u3, out);
        expand_gate({GateKind::CPhase, gate.qubits, {kPi / 2.0}}, basis, u3,
                    out);
        expand_gate({GateKind::H, {gate.qubits[1]}, {}}, basis, u3, out);
      }
      return;
    case GateKind::Toffoli:
      emit_template(basis.count(GateKind::Rzx) > 0 ? decompose_toffoli('A')
                                                   : toffoli_cnot_basis(),
                    gate.qubits, basis, u3, out);
      return;
    default:
      throw UnsupportedGateError("no decomposition rule for gate '" +
                                 gate_name(gate.kind) + "'");
  }
}

}  // namespace

Circuit unroll(const Circuit& c, const std::set<GateKind>& basis, U3Style u3) {
  Circuit out(c.n_qubits());
  for (const Gate& g : c.gates()) expand_gate(g, basis, u3, out);
  return out;
}

namespace {

std::vector<int> bfs_path(int from, int to, int n, const CouplingMap& m) {
  if (from == to) return {from};
  std::vector<int> prev(static_cast<size_t>(n), -1);
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::deque<int> queue{from};
  seen[static_cast<size_t>(from)] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (seen[static_cast<size_t>(v)] || !m.connects(u, v)) continue;
      seen[static_cast<size_t>(v)] = 1;
      prev[static_cast<size_t>(v)] = u;
      if (v == to) {
        std::vector<int> path{to};
        for (int x = to; x != from; x = prev[static_cast<size_t>(x)])
          path.push_back(prev[static_cast<size_t>(x)]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(v);
    }
  }
  return {};
}

}  // namespace

RouteResult route(const Circuit& c, const CouplingMap& m,
                  ToffoliVariant variant) {
  bool has_toffoli = false;
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::Toffoli) has_toffoli = true;
  if (variant == ToffoliVariant::Auto && has_toffoli) {
    RouteResult ra = route(c, m, ToffoliVariant::A);
    RouteResult rb = route(c, m, ToffoliVariant::B);
    return rb.swaps < ra.swaps ? rb : ra;
  }
  Circuit work(c.n_qubits());
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Toffoli) {
      Circuit t =
          decompose_toffoli(variant == ToffoliVariant::B ? 'B' : 'A');
      for (const Gate& tg : t.gates()) {
        Gate mapped = tg;
        for (int& q : mapped.qubits) q = g.qubits[static_cast<size_t>(q)];
        work.add(mapped.kind, mapped.qubits, mapped.params);
      }
    } else {
      work.add(g.kind, g.qubits, g.params);
    }
  }
  int n = c.n_qubits();
  std::vector<int> phys(static_cast<size_t>(n)),
      log_at(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) phys[static_cast<size_t>(i)] = i;
  for (int i = 0; i < n; ++i) log_at[static_cast<size_t>(i)] = i;
  Circuit out(n);
  int swaps = 0;
  for (const Gate& g : work.gates()) {
    if (g.qubits.size() == 1) {
      out.add(g.kind, {phys[static_cast<size_t>(g.qubits[0])]}, g.params);
      continue;
    }
    int pa = phys[static_cast<size_t>(g.qubits[0])];
    int pb = phys[static_cast<size_t>(g.qubits[1])];
    std::vector<int> path = bfs_path(pa, pb, n, m);
    if (path.empty())
      throw RoutingError("no coupling path between physical qubits " +
                         std::to_string(pa) + " and " + std::to_string(pb));
    for (size_t i = 0; i + 2 < path.size(); ++i) {
      int u = path[i], v = path[i + 1];
      out.add(GateKind::Cnot, {u, v});
      out.add(GateKind::Cnot, {v, u});
      out.add(GateKind::Cnot, {u, v});
      int lu = log_at[static_cast<size_t>(u)];
      int lv = log_at[static_cast<size_t>(v)];
      std::swap(log_at[static_cast<size_t>(u)],
                log_at[static_cast<size_t>(v)]);
      phys[static_cast<size_t>(lu)] = v;
      phys[static_cast<size_t>(lv)] = u;
      ++swaps;
    }
    out.add(g.kind,
            {phys[static_cast<size_t>(g.qubits[0])],
             phys[static_cast<size_t>(g.qubits[1])]},
            g.params);
  }
  RouteResult r;
  r.circuit = std::move(out);
  r.final_layout = std::move(phys);
  r.swaps = swaps;
  return r;
}

namespace {

struct Attacher {
  Schedule& sched;
  std::vector<int64_t>& cursor;
  const PulseLibrary& lib;
  Mode mode;

  const DragPulse& vendor_x(int q) const {
    const DragPulse* p = lib.find_vendor_x(q);
    if (p == nullptr)
      throw CalibrationMissingError("no vendor x pulse for qubit " +
                                    std::to_string(q));
    return *p;
  }

  const RxEntry& rx_entry(int q) const {
    const RxEntry* e = lib.find_rx(q);
    if (e == nullptr)
      throw CalibrationMissingError("no rx calibration entry for qubit " +
                                    std::to_string(q));
    return *e;
  }

  DragPulse half_amp(const DragPulse& p) const {
    return DragPulse(p.amp / 2.0, p.duration, p.sigma, p.beta);
  }

  // The pulse used for pi rotations on the control line of an echo.
  DragPulse echo_x(int q) const {
    return mode == Mode::Squeeze ? rx_entry(q).x_pulse : vendor_x(q);
  }

  void rx(int q, double theta) {
    if (std::abs(theta) < 1e-12) return;  // exact identity, nothing to play
    if (theta < 0.0) {
      append_fc(sched, cursor, q, kPi);
      rx(q, -theta);
      append_fc(sched, cursor, q, kPi);
      return;
    }
    switch (mode) {
      case Mode::Squeeze: {
        const RxEntry& e = rx_entry(q);
        double a = amplitude_for_theta(e.fit, theta);
        append_drag(sched, cursor, q,
                    DragPulse(a, e.t0, static_cast<double>(e.t0) / 4.0,
                              e.x_pulse.beta));
        return;
      }
      case Mode::Gokhale: {
        const DragPulse& vx = vendor_x(q);
        append_drag(sched, cursor, q,
                    DragPulse(theta / kPi * vx.amp, vx.duration, vx.sigma,
                              vx.beta));
        return;
      }
      case Mode::Baseline:
      case Mode::Earnest: {
        const DragPulse& vx = vendor_x(q);
        if (std::abs(theta - kPi) < kAngleTol) {
          append_drag(sched, cursor, q, vx);
        } else if (std::abs(theta - kPi / 2.0) < kAngleTol) {
          append_drag(sched, cursor, q, half_amp(vx));
        } else {
          // Two-pulse identity: Rx(theta) = U3(theta, -pi/2, pi/2)
          // realized as Rz, sqrt-X, Rz, sqrt-X, Rz.
          append_fc(sched, cursor, q, kPi / 2.0);
          append_drag(sched, cursor, q, half_amp(vx));
          append_fc(sched, cursor, q, theta + kPi);
          append_drag(sched, cursor, q, half_amp(vx));
          append_fc(sched, cursor, q, kPi / 2.0);
        }
        return;
      }
    }
  }

  void cr_with_cancellation(int c, int t, const GaussianSquarePulse& p) {
    int64_t t0 = std::max(cursor[static_cast<size_t>(c)],
                          cursor[static_cast<size_t>(t)]);
    sched.add(Channel::control(c, t), t0, p);
    // Cancellation placeholder on the target drive: the simulated
    // device has no unwanted Hamiltonian terms, so its amplitude is 0.
    sched.add(Channel::drive(t), t0,
              DragPulse(0.0, p.duration,
                        static_cast<double>(p.duration) / 4.0, 0.0));
    cursor[static_cast<size_t>(c)] = t0 + p.duration;
    cursor[static_cast<size_t>(t)] = t0 + p.duration;
  }

  void cr_source(int c, int t, const GaussianSquarePulse*& base, double& cc,
                 double& kk) const {
    if (mode == Mode::Squeeze) {
      const ZxEntry* zx = lib.find_zx(c, t);
      if (zx == nullptr)
        throw CalibrationMissingError("no zx calibration entry for pair " +
                                      std::to_string(c) + "-" +
                                      std::to_string(t));
      base = &zx->cr;
      cc = zx->c;
      kk = zx->k;
    } else {
      base = lib.find_vendor_cr(c, t);
      if (base == nullptr)
        throw CalibrationMissingError("no vendor CR pulse for pair " +
                                      std::to_string(c) + "-" +
                                      std::to_string(t));
      cc = 1.0;
      kk = 1.0;
    }
  }

  void cnot(int c, int t) {
    const GaussianSquarePulse* base = nullptr;
    double cc = 1.0, kk = 1.0;
    cr_source(c, t, base, cc, kk);
    auto pulses = scaled_cr_pair(*base, cc, kk, kPi / 2.0);
    DragPulse xc = echo_x(c);
    append_fc(sched, cursor, c, -kPi / 2.0);
    rx(t, -kPi / 2.0);
    cr_with_cancellation(c, t, pulses->first);
    append_drag(sched, cursor, c, xc);
    cr_with_cancellation(c, t, pulses->second);
    append_drag(sched, cursor, c, xc);
  }

  void rzx(int c, int t, double theta) {
    const GaussianSquarePulse* base = nullptr;
    double cc = 1.0, kk = 1.0;
    cr_source(c, t, base, cc, kk);
    DragPulse xc = echo_x(c);
    double mag = std::abs(theta);
    auto pulses = scaled_cr_pair(*base, cc, kk, mag);
    if (!pulses) {
      append_drag(sched, cursor, c, xc);
      append_drag(sched, cursor, c, xc);
      return;
    }
    const GaussianSquarePulse& first =
        theta >= 0.0 ? pulses->first : pulses->second;
    const GaussianSquarePulse& second =
        theta >= 0.0 ? pulses->second : pulses->first;
    append_cr(sched, cursor, c, t, first);
    append_drag(sched, cursor, c, xc);
    append_cr(sched, cursor, c, t, second);
    append_drag(sched, cursor, c, xc);
  }
};

}  // namespace

Schedule attach_pulses(const Circuit& c, const PulseLibrary& lib, Mode mode) {
  Schedule s(c.n_qubits());
  std::vector<int64_t> cursor(static_cast<size_t>(c.n_qubits()), 0);
  Attacher at{s, cursor, lib, mode};
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Rz:
        append_fc(s, cursor, g.qubits[0], g.params[0]);
        break;
      case GateKind::Rx:
        at.rx(g.qubits[0], g.params[0]);
        break;
      case GateKind::Cnot:
        at.cnot(g.qubits[0], g.qubits[1]);
        break;
      case GateKind::Rzx:
        if (mode == Mode::Baseline || mode == Mode::Gokhale)
          throw UnsupportedGateError("rzx is not in the " + mode_name(mode) +
                                     " basis");
        at.rzx(g.qubits[0], g.qubits[1], g.params[0]);
        break;
      case GateKind::Measure:
        s.mark_measured(g.qubits[0]);
        break;
      default:
        throw UnsupportedGateError("cannot attach pulses to gate '" +
                                   gate_name(g.kind) + "'; unroll first");
    }
  }
  return s;
}

TranspileResult transpile(const Circuit& c, const CouplingMap& m,
                          const PulseLibrary& lib, Mode mode,
                          ToffoliVariant variant) {
  std::set<GateKind> basis = basis_for_mode(mode);
  U3Style style = u3_style_for_mode(mode);
  RouteResult r;
  Circuit compiled;
  if (mode == Mode::Baseline || mode == Mode::Gokhale) {
    r = route(unroll(c, basis, style), m, variant);
    compiled = r.circuit;
  } else {
    r = route(c, m, variant);
    compiled = unroll(r.circuit, basis, style);
  }
  TranspileResult res;
  res.schedule = attach_pulses(compiled, lib, mode);
  res.compiled = std::move(compiled);
  res.final_layout = r.final_layout;
  res.swaps = r.swaps;
  return res;
}

}  // namespace squeeze
