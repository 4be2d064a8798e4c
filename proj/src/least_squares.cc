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

#include "fingerkin/least_squares.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Cholesky>

#include "fingerkin/errors.h"

namespace fingerkin {
namespace {

std::optional<Eigen::VectorXd> TryResidual(const ResidualFn& residual,
                                           const Eigen::VectorXd& x) {
  try {
    Eigen::VectorXd r = residual(x);
    if (!r.allFinite()) return std::nullopt;
    return r;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

LeastSquaresResult LevenbergMarquardt(const ResidualFn& residual,
                                      const JacobianFn& jacobian,
                                      Eigen::VectorXd x0,
                                      const LevenbergMarquardtOptions& options) {
  LeastSquaresResult result;
  result.x = std::move(x0);
  Eigen::VectorXd r = residual(result.x);
  result.cost = r.squaredNorm();
  double lambda = options.initial_lambda;
  constexpr double kMaxLambda = 1e16;

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    if (result.cost <= options.cost_tolerance) {
      result.converged = true;
      return result;
    }
    const Eigen::MatrixXd jac = jacobian(result.x);
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      result.converged = true;
      return result;
    }
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(normal.rows());
    if (options.scale_by_diagonal) {
      scale = normal.diagonal().cwiseMax(1e-12);
    }
    bool accepted = false;
    Eigen::VectorXd step;
    while (lambda <= kMaxLambda) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += lambda * scale;
      step = damped.ldlt().solve(-grad);
      if (!step.allFinite()) {
        lambda *= 4.0;
        continue;
      }
      const Eigen::VectorXd trial_x = result.x + step;
      const auto trial_r = TryResidual(residual, trial_x);
      if (trial_r && trial_r->squaredNorm() < result.cost) {
        result.x = trial_x;
        r = *trial_r;
        result.cost = r.squaredNorm();
        lambda = std::max(lambda / 3.0, 1e-15);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) {
      // No descent direction left at machine precision.
      result.converged = true;
      return result;
    }
    if (step.norm() <=
        options.step_tolerance * (result.x.norm() + options.step_tolerance)) {
      result.converged = true;
      return result;
    }
  }
  result.converged = result.cost <= options.cost_tolerance;
  return result;
}

Eigen::VectorXd DifferenceColumn(const ResidualFn& residual,
                                 const Eigen::VectorXd& x, Eigen::Index j,
                                 double step) {
  Eigen::VectorXd probe = x;
  probe[j] = x[j] + step;
  const auto plus = TryResidual(residual, probe);
  probe[j] = x[j] - step;
  const auto minus = TryResidual(residual, probe);
  if (plus && minus) return (*plus - *minus) / (2.0 * step);
  if (plus) return (*plus - residual(x)) / step;
  if (minus) return (residual(x) - *minus) / step;
  throw DomainError("no admissible difference step for parameter " +
                    std::to_string(j));
}

Eigen::MatrixXd CentralDifferenceJacobian(const ResidualFn& residual,
                                          const Eigen::VectorXd& x,
                                          double step) {
  Eigen::MatrixXd jac;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd col = DifferenceColumn(residual, x, j, step);
    if (j == 0) jac.resize(col.size(), x.size());
    jac.col(j) = col;
  }
  return jac;
}

}  // namespace fingerkin
