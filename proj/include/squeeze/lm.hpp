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

#ifndef SQUEEZE_LM_HPP
#define SQUEEZE_LM_HPP

#include <functional>

#include <Eigen/Dense>

namespace squeeze {

struct LmOptions {
  int max_iterations = 200;
  double ftol = 1e-14;     // relative decrease of the squared residual
  double step_tol = 1e-14; // parameter step size
  double lambda0 = 1e-3;   // initial damping
};

struct LmResult {
  Eigen::VectorXd params;
  double ssr = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped least squares with box constraints enforced by projection.
// residuals(params) returns the residual vector; the Jacobian is formed
// by forward differences. lower/upper may contain +-infinity.
LmResult lm_fit(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residuals,
    Eigen::VectorXd init, const Eigen::VectorXd& lower,
    const Eigen::VectorXd& upper, const LmOptions& opt = {});

}  // namespace squeeze

#endif
