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

#include "fingerkin/ik_solvers.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "fingerkin/errors.h"
#include "fingerkin/least_squares.h"

namespace fingerkin {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

bool InDomain(double theta) { return std::abs(theta) < kHalfPi; }

// Solvers polish past the tolerance so that the reported residual has head
// room; these bound the extra work.
constexpr double kPolishFactor = 1e-3;
constexpr double kMinStep = 1e-12;
constexpr int kMaxHalvings = 40;

JointAngles WithFlexion(double theta1, const Eigen::Vector3d& flexion) {
  return {theta1, flexion[0], flexion[1], flexion[2]};
}

}  // namespace

void SolverSettings::Validate() const {
  if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be > 0");
  if (!(damping >= 0.0)) throw DomainError("damping must be >= 0");
  if (!(constraint_weight >= 0.0)) {
    throw DomainError("constraint weight must be >= 0");
  }
  if (!(fd_step > 0.0)) throw DomainError("fd_step must be > 0");
}

double AdductionResidual(const FingerParams& params,
                         const Eigen::Vector3d& target, double theta1) {
  const auto& axes = params.joint(kAdAb);
  const Eigen::Vector3d o = EllipseOffset(axes, theta1, JointPlane::kAdAb,
                                          params.orientation());
  const double tan_phi =
      std::tan(FrameAngle(axes, theta1, params.orientation()));
  // (f - o) . n = 0 with n = (cos phi, 0, -sin phi), divided by cos phi;
  // o.x() = z0 tan(theta_1).
  return target.x() - target.z() * tan_phi + o.z() * tan_phi - o.x();
}

double AdductionDerivative(const FingerParams& params,
                           const Eigen::Vector3d& target, double theta1) {
  const auto& axes = params.joint(kAdAb);
  const auto orient = params.orientation();
  const Eigen::Vector3d o =
      EllipseOffset(axes, theta1, JointPlane::kAdAb, orient);
  const Eigen::Vector3d d_o =
      EllipseOffsetDerivative(axes, theta1, JointPlane::kAdAb, orient);
  const double phi = FrameAngle(axes, theta1, orient);
  const double tan_phi = std::tan(phi);
  const double d_tan_phi =
      (1.0 + tan_phi * tan_phi) * FrameAngleDerivative(axes, theta1, orient);
  return -target.z() * d_tan_phi + d_o.z() * tan_phi + o.z() * d_tan_phi -
         d_o.x();
}

AdductionResult SolveAdduction(const FingerParams& params,
                               const Eigen::Vector3d& target,
                               const SolverSettings& settings, double initial) {
  settings.Validate();
  if (!target.allFinite() || target.norm() > params.ReachBound()) {
    std::ostringstream os;
    os << "target at distance " << target.norm() << " mm is beyond reach ("
       << params.ReachBound() << " mm)";
    throw NoConvergence(os.str());
  }
  if (!InDomain(initial)) initial = 0.0;

  AdductionResult result;
  double theta = initial;
  double f = AdductionResidual(params, target, theta);
  int clamps = 0;
  for (int it = 0; it < settings.max_iterations; ++it) {
    result.iterations = it + 1;
    if (std::abs(f) <= kPolishFactor * settings.tolerance) break;
    const double jac = AdductionDerivative(params, target, theta);
    if (!(std::abs(jac) > 0.0)) break;
    // Scalar pseudo-inverse step: J^T (J J^T)^-1 e = e / J.
    double next = theta - f / jac;
    if (!InDomain(next)) {
      if (clamps++ > 0) {
        throw DomainError("Ad/Ab iterate left (-pi/2, pi/2) after clamping");
      }
      next = std::copysign(kHalfPi - 1e-6, next);
    }
    double step = next - theta;
    bool improved = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      const double trial = theta + step;
      const double f_trial = AdductionResidual(params, target, trial);
      if (std::abs(f_trial) < std::abs(f)) {
        theta = trial;
        f = f_trial;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved || std::abs(step) < 1e-15) break;
  }
  result.theta1 = theta;
  result.residual = std::abs(f);
  if (!(result.residual <= settings.tolerance)) {
    std::ostringstream os;
    os << "Ad/Ab solve stalled with |F1| = " << result.residual << " after "
       << result.iterations << " iterations";
    throw NoConvergence(os.str());
  }
  return result;
}

Eigen::Vector3d FlexionResidual(const FingerParams& params,
                                const Eigen::Vector3d& target, double theta1,
                                const Eigen::Vector3d& flexion) {
  const HomTransform base = LinkTransform(params, kAdAb, theta1);
  HomTransform chain = HomTransform::Identity();
  for (int j = kMcp; j <= kDip; ++j) {
    chain = chain * LinkTransform(params, j, flexion[j - 1]);
  }
  return chain.translation - base.Inverse().Apply(target);
}

Eigen::Matrix3d FlexionJacobian(const FingerParams& params,
                                const Eigen::Vector3d& target, double theta1,
                                const Eigen::Vector3d& flexion,
                                JacobianMode mode, double fd_step) {
  if (mode == JacobianMode::kAnalytic) {
    const Eigen::Matrix3d base_rotation =
        LinkTransform(params, kAdAb, theta1).rotation;
    const auto full = FingertipJacobian(params, WithFlexion(theta1, flexion));
    return base_rotation.transpose() * full.rightCols<3>();
  }
  const ResidualFn residual = [&](const Eigen::VectorXd& f) -> Eigen::VectorXd {
    return FlexionResidual(params, target, theta1, f);
  };
  const Eigen::VectorXd x = flexion;
  Eigen::Matrix3d jac;
  for (int j = 0; j < 3; ++j) {
    jac.col(j) = DifferenceColumn(residual, x, j, fd_step);
  }
  return jac;
}

FlexionResult SolveFlexion(const FingerParams& params,
                           const Eigen::Vector3d& target, double theta1,
                           const SolverSettings& settings,
                           const Eigen::Vector2d& initial) {
  settings.Validate();
  const double c = params.coupling_ratio();
  // Reduced variables x = (theta_2, theta_3); theta_4 = c theta_3.
  Eigen::Matrix<double, 3, 2> reduce;
  reduce << 1, 0,
            0, 1,
            0, c;
  auto expand = [&](const Eigen::Vector2d& x) {
    return Eigen::Vector3d(x[0], x[1], c * x[1]);
  };
  auto valid = [&](const Eigen::Vector2d& x) {
    const Eigen::Vector3d e = expand(x);
    return InDomain(e[0]) && InDomain(e[1]) && InDomain(e[2]);
  };

  Eigen::Vector2d x = initial;
  if (!valid(x)) x = Eigen::Vector2d::Constant(std::numbers::pi / 6);
  Eigen::Vector3d e = FlexionResidual(params, target, theta1, expand(x));
  double norm = e.norm();

  FlexionResult result;
  result.residual_history.push_back(norm);
  for (int it = 0; it < settings.max_iterations; ++it) {
    result.iterations = it + 1;
    if (norm <= kPolishFactor * settings.tolerance) break;
    const Eigen::Matrix<double, 3, 2> jac =
        FlexionJacobian(params, target, theta1, expand(x), settings.jacobian,
                        settings.fd_step) *
        reduce;
    const Eigen::Matrix2d normal = jac.transpose() * jac;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(normal);
    const double lo = eig.eigenvalues()[0];
    const double hi = eig.eigenvalues()[1];
    Eigen::Vector2d step;
    if (!(lo > 0.0) || hi / lo > settings.condition_threshold) {
      const double lambda = settings.damping_scale * jac.norm();
      Eigen::Matrix2d damped = normal;
      damped.diagonal().array() += lambda * lambda;
      step = -damped.ldlt().solve(jac.transpose() * e);
      ++result.damped_steps;
    } else {
      // Tall Jacobian: J^+ = (J^T J)^-1 J^T.
      step = -normal.ldlt().solve(jac.transpose() * e);
    }
    if (!step.allFinite()) {
      throw SingularJacobian("flexion Jacobian is singular");
    }
    bool improved = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      const Eigen::Vector2d trial = x + step;
      if (valid(trial)) {
        const Eigen::Vector3d e_trial =
            FlexionResidual(params, target, theta1, expand(trial));
        if (e_trial.norm() < norm) {
          x = trial;
          e = e_trial;
          norm = e_trial.norm();
          result.residual_history.push_back(norm);
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved || step.norm() < kMinStep) break;
  }
  result.angles = expand(x);
  result.residual = norm;
  if (!(norm <= settings.tolerance)) {
    std::ostringstream os;
    os << "flexion solve stalled with residual " << norm << " mm after "
       << result.iterations << " iterations";
    throw NoConvergence(os.str());
  }
  return result;
}

IkSolution IkAnalyticPoint(const FingerParams& params,
                           const Eigen::Vector3d& target,
                           const SolverSettings& settings,
                           const JointAngles& warm_start) {
  const AdductionResult ad =
      SolveAdduction(params, target, settings, warm_start[kAdAb]);
  const FlexionResult flex =
      SolveFlexion(params, target, ad.theta1, settings,
                   Eigen::Vector2d(warm_start[kMcp], warm_start[kPip]));
  IkSolution sol;
  sol.angles = WithFlexion(ad.theta1, flex.angles);
  sol.residual = (ForwardKinematics(params, sol.angles) - target).norm();
  sol.iterations = ad.iterations + flex.iterations;
  sol.converged = sol.residual <= settings.tolerance;
  if (!sol.converged) {
    std::ostringstream os;
    os << "fingertip residual " << sol.residual << " mm above tolerance";
    throw NoConvergence(os.str());
  }
  return sol;
}

std::vector<IkSolution> IkAnalytic(const FingerParams& params,
                                   const std::vector<Eigen::Vector3d>& trajectory,
                                   const SolverSettings& settings) {
  if (trajectory.empty()) throw InsufficientData("trajectory is empty");
  settings.Validate();
  const double c = params.coupling_ratio();
  auto flexed = [c](double t2_deg, double t3_deg) {
    const double t2 = t2_deg * std::numbers::pi / 180.0;
    const double t3 = t3_deg * std::numbers::pi / 180.0;
    return JointAngles(0.0, t2, t3, c * t3);
  };
  const JointAngles cold = flexed(30, 30);
  // Tried in order when the warm start fails; highly flexed targets can
  // trap the iteration against the domain edge from the cold start.
  const std::array<JointAngles, 5> restarts = {
      cold, flexed(60, 60), flexed(80, 80), flexed(40, 80), flexed(80, 40)};
  JointAngles warm = cold;
  std::vector<IkSolution> out;
  out.reserve(trajectory.size());
  for (const auto& target : trajectory) {
    try {
      try {
        out.push_back(IkAnalyticPoint(params, target, settings, warm));
      } catch (const Error&) {
        bool solved = false;
        for (std::size_t k = 0; k < restarts.size() && !solved; ++k) {
          if (restarts[k] == warm) continue;
          try {
            out.push_back(IkAnalyticPoint(params, target, settings, restarts[k]));
            solved = true;
          } catch (const Error&) {
            if (k + 1 == restarts.size()) throw;
          }
        }
        if (!solved) throw NoConvergence("no start point converged");
      }
      warm = out.back().angles;
    } catch (const Error& err) {
      IkSolution failed;
      failed.angles = warm;
      failed.residual = std::numeric_limits<double>::infinity();
      failed.failure = std::string(ErrorKindName(err.kind())) + ": " + err.what();
      out.push_back(failed);
      warm = cold;
    }
  }
  return out;
}

Eigen::Matrix<double, 4, Eigen::Dynamic> AngleTable(
    const std::vector<IkSolution>& solutions) {
  Eigen::Matrix<double, 4, Eigen::Dynamic> table(4, solutions.size());
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    table.col(static_cast<Eigen::Index>(i)) = solutions[i].angles;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Posture cloud lookup.

namespace {
constexpr std::size_t kLeafSize = 8;
}  // namespace

PostureIndex::PostureIndex(const PostureCloud& cloud) {
  points_.reserve(cloud.size());
  for (const auto& r : cloud.records()) points_.push_back(r.position);
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * points_.size() / kLeafSize + 1);
  Build(0, points_.size());
}

int PostureIndex::Build(std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{-1, 0.0, begin, end, -1, -1});
  if (end - begin <= kLeafSize) return id;

  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::max());
  Eigen::Vector3d hi = -lo;
  for (std::size_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis;
  (hi - lo).maxCoeff(&axis);
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](std::size_t a, std::size_t b) {
                     return points_[a][axis] < points_[b][axis];
                   });
  const double split = points_[order_[mid]][axis];
  const int left = Build(begin, mid);
  const int right = Build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void PostureIndex::Search(int node_id, const Eigen::Vector3d& query,
                          double& best_d2, std::size_t& best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      const double d2 = SquaredDistance(points_[idx], query);
      if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
        best_d2 = d2;
        best = idx;
      }
    }
    return;
  }
  // Left holds coordinates <= split, right holds >= split.
  const double delta = query[node.axis] - node.split;
  const int near = delta < 0.0 ? node.left : node.right;
  const int far = delta < 0.0 ? node.right : node.left;
  Search(near, query, best_d2, best);
  // Equal bounds are still searched so lower-index ties are found.
  if (delta * delta <= best_d2) Search(far, query, best_d2, best);
}

std::size_t PostureIndex::Nearest(const Eigen::Vector3d& query) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  Search(0, query, best_d2, best);
  return best;
}

std::vector<std::size_t> NearestRecords(
    const PostureIndex& index, const std::vector<Eigen::Vector3d>& trajectory) {
  std::vector<std::size_t> out;
  out.reserve(trajectory.size());
  for (const auto& t : trajectory) out.push_back(index.Nearest(t));
  return out;
}

std::vector<JointAngles> IkPcl(const PostureCloud& cloud,
                               const std::vector<Eigen::Vector3d>& trajectory) {
  if (trajectory.empty()) throw InsufficientData("trajectory is empty");
  const PostureIndex index(cloud);
  std::vector<JointAngles> out;
  out.reserve(trajectory.size());
  for (std::size_t i : NearestRecords(index, trajectory)) {
    out.push_back(cloud.records()[i].angles);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regularized optimization.

double OptimizationObjective(const FingerParams& params,
                             const Eigen::Vector3d& target,
                             const JointAngles& angles, double weight) {
  const double coupling =
      angles[kDip] - params.coupling_ratio() * angles[kPip];
  return (target - ForwardKinematics(params, angles)).squaredNorm() +
         weight * coupling * coupling;
}

IkSolution IkOptimize(const FingerParams& params, const Eigen::Vector3d& target,
                      const JointAngles& initial,
                      const SolverSettings& settings) {
  settings.Validate();
  for (int i = 0; i < kNumJoints; ++i) CheckJointAngle(initial[i]);
  const double c = params.coupling_ratio();
  const double sqrt_w = std::sqrt(settings.constraint_weight);

  const ResidualFn residual = [&](const Eigen::VectorXd& x) {
    const JointAngles a = x;
    Eigen::VectorXd r(4);
    r.head<3>() = ForwardKinematics(params, a) - target;
    r[3] = sqrt_w * (a[kDip] - c * a[kPip]);
    return r;
  };
  const JacobianFn jacobian = [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    if (settings.jacobian == JacobianMode::kCentralDifference) {
      return CentralDifferenceJacobian(residual, x, settings.fd_step);
    }
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(4, 4);
    jac.topRows<3>() = FingertipJacobian(params, JointAngles(x));
    jac(3, kPip) = -sqrt_w * c;
    jac(3, kDip) = sqrt_w;
    return jac;
  };

  LevenbergMarquardtOptions options;
  options.max_iterations = settings.max_iterations;
  // The ||step||^2 term of the objective is the LM proximal penalty.
  options.initial_lambda = settings.damping;
  const double polish = kPolishFactor * settings.tolerance;
  options.cost_tolerance = polish * polish;
  const LeastSquaresResult lm =
      LevenbergMarquardt(residual, jacobian, Eigen::VectorXd(initial), options);
  if (!lm.converged) {
    std::ostringstream os;
    os << "optimization IK did not settle in " << settings.max_iterations
       << " iterations (cost " << lm.cost << ")";
    throw NoConvergence(os.str());
  }
  IkSolution sol;
  sol.angles = lm.x;
  sol.residual = (ForwardKinematics(params, sol.angles) - target).norm();
  sol.iterations = lm.iterations;
  sol.converged = sol.residual <= settings.tolerance;
  return sol;
}

}  // namespace fingerkin
