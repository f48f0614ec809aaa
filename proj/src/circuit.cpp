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

#include "squeeze/circuit.hpp"

#include <cmath>
#include <complex>
#include <map>

namespace squeeze {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

struct KindInfo {
  const char* name;
  int arity;
  int params;
};

const std::map<GateKind, KindInfo>& kind_table() {
  static const std::map<GateKind, KindInfo> table = {
      {GateKind::Rx, {"rx", 1, 1}},       {GateKind::Rz, {"rz", 1, 1}},
      {GateKind::Rzx, {"rzx", 2, 1}},     {GateKind::Rxx, {"rxx", 2, 1}},
      {GateKind::Ryy, {"ryy", 2, 1}},     {GateKind::Rzz, {"rzz", 2, 1}},
      {GateKind::CPhase, {"cp", 2, 1}},   {GateKind::X, {"x", 1, 0}},
      {GateKind::SqrtX, {"sx", 1, 0}},    {GateKind::H, {"h", 1, 0}},
      {GateKind::T, {"t", 1, 0}},         {GateKind::Tdg, {"tdg", 1, 0}},
      {GateKind::S, {"s", 1, 0}},         {GateKind::Sdg, {"sdg", 1, 0}},
      {GateKind::Z, {"z", 1, 0}},         {GateKind::Cnot, {"cx", 2, 0}},
      {GateKind::CSqrtX, {"csx", 2, 0}},  {GateKind::Toffoli, {"ccx", 3, 0}},
      {GateKind::U3, {"u3", 1, 3}},       {GateKind::Measure, {"measure", 1, 0}},
  };
  return table;
}

Eigen::Matrix2cd rx_matrix(double a) {
  Eigen::Matrix2cd m;
  m << std::cos(a / 2), -kI * std::sin(a / 2), -kI * std::sin(a / 2),
      std::cos(a / 2);
  return m;
}

Eigen::Matrix2cd rz_matrix(double a) {
  Eigen::Matrix2cd m;
  m << std::exp(-kI * (a / 2)), 0, 0, std::exp(kI * (a / 2));
  return m;
}

Eigen::Matrix2cd phase_matrix(cd p) {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, p;
  return m;
}

}  // namespace

int gate_arity(GateKind kind) { return kind_table().at(kind).arity; }
int gate_param_count(GateKind kind) { return kind_table().at(kind).params; }
std::string gate_name(GateKind kind) { return kind_table().at(kind).name; }

GateKind gate_kind_from_name(const std::string& name) {
  for (const auto& [kind, info] : kind_table()) {
    if (name == info.name) return kind;
  }
  // Common aliases accepted on input only.
  if (name == "cnot") return GateKind::Cnot;
  if (name == "toffoli") return GateKind::Toffoli;
  if (name == "cphase") return GateKind::CPhase;
  if (name == "sqrtx") return GateKind::SqrtX;
  throw std::invalid_argument("unknown gate kind: " + name);
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) throw std::invalid_argument("n_qubits must be positive");
}

void Circuit::add(GateKind kind, std::vector<int> qubits,
                  std::vector<double> params) {
  const auto& info = kind_table().at(kind);
  if (static_cast<int>(qubits.size()) != info.arity)
    throw std::invalid_argument(std::string("gate ") + info.name +
                                " expects " + std::to_string(info.arity) +
                                " operands");
  if (static_cast<int>(params.size()) != info.params)
    throw std::invalid_argument(std::string("gate ") + info.name +
                                " expects " + std::to_string(info.params) +
                                " parameters");
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits_)
      throw std::invalid_argument("operand index out of range");
  }
  for (size_t i = 0; i < qubits.size(); ++i) {
    for (size_t j = i + 1; j < qubits.size(); ++j) {
      if (qubits[i] == qubits[j])
        throw std::invalid_argument("duplicate operand index");
    }
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw std::invalid_argument("non-finite angle");
  }
  gates_.push_back(Gate{kind, std::move(qubits), std::move(params)});
}

void Circuit::append(const Circuit& other) {
  if (other.n_qubits_ > n_qubits_)
    throw std::invalid_argument("appended circuit is wider");
  for (const auto& g : other.gates_) gates_.push_back(g);
}

nlohmann::json Circuit::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits_;
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : gates_) {
    nlohmann::json e{{"kind", gate_name(g.kind)}, {"qubits", g.qubits}};
    if (!g.params.empty()) e["params"] = g.params;
    gates.push_back(std::move(e));
  }
  j["gates"] = gates;
  return j;
}

Circuit Circuit::from_json(const nlohmann::json& j) {
  Circuit c(j.at("n_qubits").get<int>());
  for (const auto& e : j.at("gates")) {
    std::vector<double> params;
    if (e.contains("params")) params = e.at("params").get<std::vector<double>>();
    c.add(gate_kind_from_name(e.at("kind").get<std::string>()),
          e.at("qubits").get<std::vector<int>>(), std::move(params));
  }
  return c;
}

CouplingMap CouplingMap::from_json(const nlohmann::json& j) {
  CouplingMap m;
  const auto& edges = j.contains("coupling") ? j.at("coupling") : j;
  for (const auto& e : edges)
    m.edges.insert({e.at(0).get<int>(), e.at(1).get<int>()});
  return m;
}

nlohmann::json CouplingMap::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [a, b] : edges) j.push_back({a, b});
  return j;
}

Eigen::MatrixXcd gate_unitary(const Gate& g) {
  auto p = [&](int i) { return g.params.at(i); };
  switch (g.kind) {
    case GateKind::Rx:
      return rx_matrix(p(0));
    case GateKind::Rz:
      return rz_matrix(p(0));
    case GateKind::X: {
      Eigen::Matrix2cd m;
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::SqrtX: {
      Eigen::Matrix2cd m;
      m << cd(0.5, 0.5), cd(0.5, -0.5), cd(0.5, -0.5), cd(0.5, 0.5);
      return m;
    }
    case GateKind::H: {
      Eigen::Matrix2cd m;
      double s = 1.0 / std::sqrt(2.0);
      m << s, s, s, -s;
      return m;
    }
    case GateKind::T:
      return phase_matrix(std::exp(kI * (M_PI / 4)));
    case GateKind::Tdg:
      return phase_matrix(std::exp(-kI * (M_PI / 4)));
    case GateKind::S:
      return phase_matrix(kI);
    case GateKind::Sdg:
      return phase_matrix(-kI);
    case GateKind::Z:
      return phase_matrix(-1.0);
    case GateKind::U3: {
      double th = p(0), ph = p(1), la = p(2);
      Eigen::Matrix2cd m;
      m << std::cos(th / 2), -std::exp(kI * la) * std::sin(th / 2),
          std::exp(kI * ph) * std::sin(th / 2),
          std::exp(kI * (ph + la)) * std::cos(th / 2);
      return m;
    }
    case GateKind::Rzx: {
      // exp(-i a/2 Z (x) X): block Rx(a) on the |0> control subspace,
      // Rx(-a) on |1>.
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
      m.topLeftCorner<2, 2>() = rx_matrix(p(0));
      m.bottomRightCorner<2, 2>() = rx_matrix(-p(0));
      return m;
    }
    case GateKind::Rxx: {
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() * std::cos(p(0) / 2);
      Eigen::Matrix4cd xx = Eigen::Matrix4cd::Zero();
      xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1;
      m -= kI * std::sin(p(0) / 2) * xx;
      return m;
    }
    case GateKind::Ryy: {
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() * std::cos(p(0) / 2);
      Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
      yy(0, 3) = yy(3, 0) = -1;
      yy(1, 2) = yy(2, 1) = 1;
      m -= kI * std::sin(p(0) / 2) * yy;
      return m;
    }
    case GateKind::Rzz: {
      Eigen::Vector4cd d;
      d << std::exp(-kI * (p(0) / 2)), std::exp(kI * (p(0) / 2)),
          std::exp(kI * (p(0) / 2)), std::exp(-kI * (p(0) / 2));
      return d.asDiagonal();
    }
    case GateKind::CPhase: {
      Eigen::Vector4cd d;
      d << 1, 1, 1, std::exp(kI * p(0));
      return d.asDiagonal();
    }
    case GateKind::Cnot: {
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
      return m;
    }
    case GateKind::CSqrtX: {
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
      m.bottomRightCorner<2, 2>() =
          gate_unitary(Gate{GateKind::SqrtX, {0}, {}});
      return m;
    }
    case GateKind::Toffoli: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
      m(6, 6) = m(7, 7) = 0;
      m(6, 7) = m(7, 6) = 1;
      return m;
    }
    case GateKind::Measure:
      throw UnsupportedGateError("measure has no unitary");
  }
  throw UnsupportedGateError("unhandled gate kind");
}

void apply_to_state(Eigen::VectorXcd& state, const Eigen::MatrixXcd& m,
                    const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  const auto dim = static_cast<Eigen::Index>(state.size());
  const int local_dim = 1 << k;
  if (m.rows() != local_dim || m.cols() != local_dim)
    throw std::invalid_argument("matrix size does not match operand count");

  // Gather the global index bit for each local bit; local bit (k-1-j) is
  // operand j so the first operand is the local MSB.
  std::vector<Eigen::Index> stride(k);
  for (int j = 0; j < k; ++j) stride[k - 1 - j] = Eigen::Index{1} << qubits[j];

  Eigen::Index mask = 0;
  for (auto s : stride) mask |= s;

  std::vector<cd> scratch(local_dim);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (int in = 0; in < local_dim; ++in) {
      Eigen::Index idx = base;
      for (int b = 0; b < k; ++b)
        if (in & (1 << b)) idx |= stride[b];
      scratch[in] = state(idx);
    }
    for (int out = 0; out < local_dim; ++out) {
      cd acc = 0;
      for (int in = 0; in < local_dim; ++in) acc += m(out, in) * scratch[in];
      Eigen::Index idx = base;
      for (int b = 0; b < k; ++b)
        if (out & (1 << b)) idx |= stride[b];
      state(idx) = acc;
    }
  }
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  if (c.n_qubits() > 4)
    throw ResourceError("unitary oracle limited to 4 qubits");
  const Eigen::Index dim = Eigen::Index{1} << c.n_qubits();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Measure)
      throw UnsupportedGateError("circuit_unitary cannot include measure");
    Eigen::MatrixXcd m = gate_unitary(g);
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::VectorXcd v = u.col(col);
      apply_to_state(v, m, g.qubits);
      u.col(col) = v;
    }
  }
  return u;
}

double distance_up_to_global_phase(const Eigen::MatrixXcd& u,
                                   const Eigen::MatrixXcd& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("dimension mismatch");
  Eigen::Index bi = 0, bj = 0;
  v.cwiseAbs().maxCoeff(&bi, &bj);
  cd num = u(bi, bj), den = v(bi, bj);
  cd lambda = 1.0;
  if (std::abs(den) > 0 && std::abs(num) > 0)
    lambda = (num / den) / std::abs(num / den);
  return (u - lambda * v).cwiseAbs().maxCoeff();
}

std::vector<CouplingViolation> validate_coupling(const Circuit& c,
                                                 const CouplingMap& m) {
  std::vector<CouplingViolation> out;
  for (size_t i = 0; i < c.gates().size(); ++i) {
    const auto& g = c.gates()[i];
    int arity = gate_arity(g.kind);
    if (arity == 2 && !m.connects(g.qubits[0], g.qubits[1])) {
      out.push_back({i, gate_name(g.kind) + " on uncoupled pair (" +
                            std::to_string(g.qubits[0]) + ", " +
                            std::to_string(g.qubits[1]) + ")"});
    } else if (arity > 2) {
      out.push_back({i, gate_name(g.kind) + " is never hardware-native"});
    }
  }
  return out;
}

U3Angles u3_angles(const Eigen::Matrix2cd& u) {
  U3Angles a{};
  if (std::abs(u(0, 0)) < 1e-12) {
    // theta ~ pi: only phi+phase and lambda+phase are identifiable.
    a.theta = M_PI;
    a.phi = 0.0;
    a.phase = std::arg(u(1, 0));
    a.lambda = std::arg(-u(0, 1)) - a.phase;
    return a;
  }
  a.phase = std::arg(u(0, 0));
  cd r = std::exp(-kI * a.phase);
  a.theta = 2.0 * std::atan2(std::abs(u(1, 0)), (r * u(0, 0)).real());
  if (std::abs(u(1, 0)) < 1e-12) {
    // theta ~ 0: the off-diagonal phases carry no information.
    a.phi = 0.0;
    a.lambda = std::arg(r * u(1, 1));
    return a;
  }
  a.phi = std::arg(r * u(1, 0));
  a.lambda = std::arg(-r * u(0, 1));
  return a;
}

}  // namespace squeeze
