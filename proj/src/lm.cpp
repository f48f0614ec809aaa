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

#include "squeeze/lm.hpp"

#include <cmath>
#include <stdexcept>

namespace squeeze {

namespace {

Eigen::VectorXd project(Eigen::VectorXd p, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
  for (Eigen::Index i = 0; i < p.size(); ++i)
    p(i) = std::min(hi(i), std::max(lo(i), p(i)));
  return p;
}

Eigen::MatrixXd forward_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& p, const Eigen::VectorXd& r0,
    const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::MatrixXd jac(r0.size(), p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    double h = 1e-7 * (1.0 + std::abs(p(i)));
    Eigen::VectorXd q = p;
    // Step backwards when forward would leave the box.
    if (q(i) + h > hi(i)) h = -h;
    q(i) += h;
    if (q(i) < lo(i)) q(i) = lo(i);
    double dh = q(i) - p(i);
    if (dh == 0.0) {
      jac.col(i).setZero();
      continue;
    }
    jac.col(i) = (f(q) - r0) / dh;
  }
  return jac;
}

}  // namespace

LmResult lm_fit(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residuals,
    Eigen::VectorXd init, const Eigen::VectorXd& lower,
    const Eigen::VectorXd& upper, const LmOptions& opt) {
  if (init.size() != lower.size() || init.size() != upper.size())
    throw std::invalid_argument("bound sizes must match parameter count");

  LmResult res;
  Eigen::VectorXd p = project(std::move(init), lower, upper);
  Eigen::VectorXd r = residuals(p);
  double ssr = r.squaredNorm();
  double lambda = opt.lambda0;

  for (res.iterations = 0; res.iterations < opt.max_iterations;
       ++res.iterations) {
    Eigen::MatrixXd jac = forward_jacobian(residuals, p, r, lower, upper);
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::VectorXd jtr = jac.transpose() * r;

    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      for (Eigen::Index i = 0; i < damped.rows(); ++i)
        damped(i, i) += lambda * (jtj(i, i) > 0 ? jtj(i, i) : 1.0);
      Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
      if (!delta.allFinite()) {
        lambda *= 4.0;
        continue;
      }
      Eigen::VectorXd cand = project(p + delta, lower, upper);
      Eigen::VectorXd rc = residuals(cand);
      double cssr = rc.squaredNorm();
      if (cssr < ssr) {
        double drop = ssr - cssr;
        double step = (cand - p).norm();
        p = cand;
        r = rc;
        ssr = cssr;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (drop < opt.ftol * (1.0 + ssr) || step < opt.step_tol) {
          res.converged = true;
        }
        break;
      }
      lambda *= 4.0;
    }
    if (res.converged || !stepped) {
      // No downhill step at any damping means a (possibly constrained)
      // local minimum.
      res.converged = res.converged || !stepped;
      break;
    }
  }

  res.params = p;
  res.ssr = ssr;
  return res;
}

}  // namespace squeeze
