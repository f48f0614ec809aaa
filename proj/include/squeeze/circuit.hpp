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

#ifndef SQUEEZE_CIRCUIT_HPP
#define SQUEEZE_CIRCUIT_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace squeeze {

enum class GateKind {
  Rx,
  Rz,
  Rzx,
  Rxx,
  Ryy,
  Rzz,
  CPhase,
  X,
  SqrtX,
  H,
  T,
  Tdg,
  S,
  Sdg,
  Z,
  Cnot,
  CSqrtX,
  Toffoli,
  U3,
  Measure,
};

struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  std::vector<double> params;
};

int gate_arity(GateKind kind);
int gate_param_count(GateKind kind);
std::string gate_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits);

  // Validates arity, parameter count, operand range, and angle finiteness.
  void add(GateKind kind, std::vector<int> qubits,
           std::vector<double> params = {});
  void append(const Circuit& other);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::vector<Gate>& gates() { return gates_; }

  nlohmann::json to_json() const;
  static Circuit from_json(const nlohmann::json& j);

 private:
  int n_qubits_ = 0;
  std::vector<Gate> gates_;
};

struct CouplingMap {
  // Directed (control, target) pairs with a physical control channel.
  std::set<std::pair<int, int>> edges;

  bool connects(int a, int b) const {
    return edges.count({a, b}) > 0 || edges.count({b, a}) > 0;
  }
  static CouplingMap from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct CouplingViolation {
  size_t gate_index;
  std::string reason;
};

// Thrown when a gate has no unitary (Measure) or no decomposition rule.
class UnsupportedGateError : public std::runtime_error {
 public:
  explicit UnsupportedGateError(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown when a brute-force oracle is asked for more qubits than it can
// afford to enumerate.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Matrix on the gate's own operands. Convention: the first operand is the
// most significant bit of the row index, so CNOT(control, target) is
// diag(I, X).
Eigen::MatrixXcd gate_unitary(const Gate& g);

// Full 2^n x 2^n unitary with little-endian global indexing: bit q of a
// basis-state index is the state of qubit q. Limited to n <= 4.
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

// Applies a k-qubit matrix (first listed qubit = most significant local
// bit) to a little-endian statevector in place.
void apply_to_state(Eigen::VectorXcd& state, const Eigen::MatrixXcd& m,
                    const std::vector<int>& qubits);

// min over unit phase of max-norm difference; the phase is chosen to
// align the largest-magnitude entry of v.
double distance_up_to_global_phase(const Eigen::MatrixXcd& u,
                                   const Eigen::MatrixXcd& v);

std::vector<CouplingViolation> validate_coupling(const Circuit& c,
                                                 const CouplingMap& m);

struct U3Angles {
  double theta;
  double phi;
  double lambda;
  double phase;  // u = exp(i*phase) * U3(theta, phi, lambda)
};

// Decomposes an arbitrary single-qubit unitary into U3 angles plus a
// global phase.
U3Angles u3_angles(const Eigen::Matrix2cd& u);

}  // namespace squeeze

#endif
