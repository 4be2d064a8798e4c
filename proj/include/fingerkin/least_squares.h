// Copyright 2026 The Fingerkin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense Levenberg-Marquardt for small nonlinear least-squares problems.

#ifndef FINGERKIN_LEAST_SQUARES_H_
#define FINGERKIN_LEAST_SQUARES_H_

#include <functional>

#include <Eigen/Core>

namespace fingerkin {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct LevenbergMarquardtOptions {
  int max_iterations = 200;
  // Weight of the ||step||^2 penalty on the first iteration.
  double initial_lambda = 1e-3;
  // Scale the penalty by diag(J^T J) (Marquardt) instead of the identity.
  bool scale_by_diagonal = false;
  // Stop once the sum of squares drops to this value.
  double cost_tolerance = 0.0;
  // Stop when ||step|| <= step_tolerance * (||x|| + step_tolerance).
  double step_tolerance = 1e-13;
  double gradient_tolerance = 1e-15;
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  // Sum of squared residuals at x.
  double cost = 0.0;
  int iterations = 0;
  // False only when the iteration budget ran out.
  bool converged = false;
};

// Minimises ||residual(x)||^2 from x0. Each accepted step strictly lowers the
// cost. A residual function may throw DomainError to reject a trial point.
LeastSquaresResult LevenbergMarquardt(const ResidualFn& residual,
                                      const JacobianFn& jacobian,
                                      Eigen::VectorXd x0,
                                      const LevenbergMarquardtOptions& options);

// Central difference of column j, one-sided where a probe leaves the domain
// (the residual throws DomainError).
Eigen::VectorXd DifferenceColumn(const ResidualFn& residual,
                                 const Eigen::VectorXd& x, Eigen::Index j,
                                 double step = 1e-6);

Eigen::MatrixXd CentralDifferenceJacobian(const ResidualFn& residual,
                                          const Eigen::VectorXd& x,
                                          double step = 1e-6);

}  // namespace fingerkin

#endif  // FINGERKIN_LEAST_SQUARES_H_
