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

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "squeeze/lm.hpp"

using namespace squeeze;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd unbounded(int n, double v) {
  return Eigen::VectorXd::Constant(n, v);
}
}  // namespace

TEST_SUITE("lm") {

TEST_CASE("recovers a line from exact data") {
  // y = 2.5 x - 1.25 sampled at eleven points.
  auto residuals = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(11);
    for (int i = 0; i < 11; ++i) {
      double x = i / 10.0;
      r(i) = p(0) * x + p(1) - (2.5 * x - 1.25);
    }
    return r;
  };
  Eigen::VectorXd init(2);
  init << 0.0, 0.0;
  LmResult res =
      lm_fit(residuals, init, unbounded(2, -kInf), unbounded(2, kInf));
  CHECK(res.converged);
  CHECK(res.params(0) == doctest::Approx(2.5).epsilon(1e-8));
  CHECK(res.params(1) == doctest::Approx(-1.25).epsilon(1e-8));
  CHECK(res.ssr < 1e-16);
}

TEST_CASE("minimizes the rosenbrock valley") {
  // Rosenbrock as residuals (1-a, 10(b-a^2)); minimum at (1, 1).
  auto residuals = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(2);
    r(0) = 1.0 - p(0);
    r(1) = 10.0 * (p(1) - p(0) * p(0));
    return r;
  };
  Eigen::VectorXd init(2);
  init << -1.2, 1.0;
  LmOptions opt;
  opt.max_iterations = 500;
  LmResult res =
      lm_fit(residuals, init, unbounded(2, -kInf), unbounded(2, kInf), opt);
  CHECK(res.converged);
  CHECK(res.params(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.params(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("recovers a damped sinusoid") {
  // Model a * sin(w x + c): forward-generate noiseless data.
  Eigen::VectorXd truth(3);
  truth << 0.8, 5.2363, 0.4;
  auto model = [&](const Eigen::VectorXd& p, double x) {
    return p(0) * std::sin(p(1) * x + p(2));
  };
  auto residuals = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(40);
    for (int i = 0; i < 40; ++i) {
      double x = i / 40.0;
      r(i) = model(p, x) - model(truth, x);
    }
    return r;
  };
  Eigen::VectorXd init(3);
  init << 1.0, 4.5, 0.0;
  LmResult res =
      lm_fit(residuals, init, unbounded(3, -kInf), unbounded(3, kInf));
  CHECK(res.converged);
  CHECK(res.params(0) == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(res.params(1) == doctest::Approx(5.2363).epsilon(1e-6));
  CHECK(res.params(2) == doctest::Approx(0.4).epsilon(1e-5));
}

TEST_CASE("projection keeps iterates inside the box") {
  // Unconstrained minimum at p = -2; the box stops at 0.5.
  auto residuals = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(1);
    r(0) = p(0) + 2.0;
    return r;
  };
  Eigen::VectorXd init(1), lo(1), hi(1);
  init << 3.0;
  lo << 0.5;
  hi << 10.0;
  LmResult res = lm_fit(residuals, init, lo, hi);
  CHECK(res.params(0) == doctest::Approx(0.5));
}

TEST_CASE("initial point outside the box is projected in") {
  auto residuals = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(1);
    r(0) = p(0) - 1.0;
    return r;
  };
  Eigen::VectorXd init(1), lo(1), hi(1);
  init << 50.0;
  lo << 0.0;
  hi << 2.0;
  LmResult res = lm_fit(residuals, init, lo, hi);
  CHECK(res.converged);
  CHECK(res.params(0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("iteration budget is respected") {
  // A residual that never improves still terminates.
  auto residuals = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(1);
    r(0) = 1.0 + 0.0 * p(0);
    return r;
  };
  LmOptions opt;
  opt.max_iterations = 5;
  LmResult res = lm_fit(residuals, unbounded(1, 0.0), unbounded(1, -kInf),
                        unbounded(1, kInf), opt);
  CHECK(res.iterations <= 5);
  CHECK(res.ssr == doctest::Approx(1.0));
}

}  // TEST_SUITE
