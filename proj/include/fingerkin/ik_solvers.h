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

// Inverse kinematics for the finger chain.
//
// Three methods are provided:
//  * analytic: Newton-Raphson on the scalar Ad/Ab plane constraint for
//    theta_1, then a pseudo-inverse iteration on the flexion residual with the
//    DIP angle tied to the PIP angle (theta_4 = c * theta_3);
//  * posture cloud: nearest recorded fingertip in a pre-sampled cloud;
//  * optimization: Levenberg-Marquardt on
//      ||f - FK(theta)||^2 + ||step||^2 + r ||theta_4 - c theta_3||^2.

#ifndef FINGERKIN_IK_SOLVERS_H_
#define FINGERKIN_IK_SOLVERS_H_

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fingerkin/finger_model.h"

namespace fingerkin {

enum class JacobianMode { kCentralDifference, kAnalytic };

struct SolverSettings {
  int max_iterations = 200;
  // Fingertip position residual, mm.
  double tolerance = 1e-6;
  // Weight of the ||step||^2 term in IkOptimize (initial LM damping).
  double damping = 1.0;
  // Coupling penalty weight r in IkOptimize.
  double constraint_weight = 1e3;
  JacobianMode jacobian = JacobianMode::kCentralDifference;
  double fd_step = 1e-6;
  // Above this condition number of J^T J the flexion solver switches to
  // damped least squares with lambda = damping_scale * ||J||.
  double condition_threshold = 1e8;
  double damping_scale = 1e-4;

  // Throws DomainError on nonsensical values.
  void Validate() const;
};

struct IkSolution {
  JointAngles angles = JointAngles::Zero();
  // ||FK(angles) - target||, mm.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // Set when the point failed inside a batch.
  std::string failure;
};

// Scalar plane constraint F1(theta_1): zero when the target lies in the
// flexion plane of frame 1.
double AdductionResidual(const FingerParams& params,
                         const Eigen::Vector3d& target, double theta1);
// Analytic dF1/dtheta_1.
double AdductionDerivative(const FingerParams& params,
                           const Eigen::Vector3d& target, double theta1);

struct AdductionResult {
  double theta1 = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Newton-Raphson root of F1. Throws NoConvergence when the target is beyond
// reach or the iteration stalls, DomainError if the iterate leaves
// (-pi/2, pi/2) twice.
AdductionResult SolveAdduction(const FingerParams& params,
                               const Eigen::Vector3d& target,
                               const SolverSettings& settings,
                               double initial = 0.0);

// Flexion residual: fingertip of the sub-chain (theta_2..4) minus the target,
// both expressed in frame 1.
Eigen::Vector3d FlexionResidual(const FingerParams& params,
                                const Eigen::Vector3d& target, double theta1,
                                const Eigen::Vector3d& flexion);

// d(FlexionResidual)/d(theta_2, theta_3, theta_4).
Eigen::Matrix3d FlexionJacobian(const FingerParams& params,
                                const Eigen::Vector3d& target, double theta1,
                                const Eigen::Vector3d& flexion,
                                JacobianMode mode, double fd_step = 1e-6);

struct FlexionResult {
  // (theta_2, theta_3, theta_4) with theta_4 = c * theta_3 exactly.
  Eigen::Vector3d angles = Eigen::Vector3d::Zero();
  double residual = 0.0;
  int iterations = 0;
  int damped_steps = 0;
  // Residual norm at the start and after every accepted step.
  std::vector<double> residual_history;
};

// Pseudo-inverse iteration over (theta_2, theta_3). `initial` holds the
// starting (theta_2, theta_3). Throws NoConvergence.
FlexionResult SolveFlexion(const FingerParams& params,
                           const Eigen::Vector3d& target, double theta1,
                           const SolverSettings& settings,
                           const Eigen::Vector2d& initial);

// Analytic IK along a trajectory; each point warm-starts from the previous
// converged solution, the first from theta_2 = theta_3 = 30 deg. A point
// whose warm start fails is retried from a fixed set of flexed postures.
// Failures are recorded per point. Throws InsufficientData on an empty trajectory.
std::vector<IkSolution> IkAnalytic(const FingerParams& params,
                                   const std::vector<Eigen::Vector3d>& trajectory,
                                   const SolverSettings& settings);

// Single-point analytic IK. Throws on failure.
IkSolution IkAnalyticPoint(const FingerParams& params,
                           const Eigen::Vector3d& target,
                           const SolverSettings& settings,
                           const JointAngles& warm_start);

// 4 x n table of solution angles.
Eigen::Matrix<double, 4, Eigen::Dynamic> AngleTable(
    const std::vector<IkSolution>& solutions);

// Squared distance used for cloud lookups, summed x, y, z in that order.
inline double SquaredDistance(const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

// Static 3-d tree over the fingertip positions of a cloud. Queries return the
// record with the smallest squared distance, lowest index on ties.
class PostureIndex {
 public:
  explicit PostureIndex(const PostureCloud& cloud);

  std::size_t Nearest(const Eigen::Vector3d& query) const;

 private:
  struct Node {
    int axis = -1;  // -1 for leaves
    double split = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
    int left = -1;
    int right = -1;
  };

  int Build(std::size_t begin, std::size_t end);
  void Search(int node, const Eigen::Vector3d& query, double& best_d2,
              std::size_t& best) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

// Record indices of the nearest cloud entries for each target.
std::vector<std::size_t> NearestRecords(const PostureIndex& index,
                                        const std::vector<Eigen::Vector3d>& trajectory);

// Angles of the nearest cloud record for each target.
std::vector<JointAngles> IkPcl(const PostureCloud& cloud,
                               const std::vector<Eigen::Vector3d>& trajectory);

// Regularized objective value ||f - FK||^2 + r ||theta_4 - c theta_3||^2.
double OptimizationObjective(const FingerParams& params,
                             const Eigen::Vector3d& target,
                             const JointAngles& angles, double weight);

// Local minimiser of the regularized objective starting at `initial`.
// converged is set when the position residual is within tolerance. Throws
// NoConvergence when the iteration budget runs out, DomainError when
// `initial` is outside the joint domain.
IkSolution IkOptimize(const FingerParams& params, const Eigen::Vector3d& target,
                      const JointAngles& initial, const SolverSettings& settings);

}  // namespace fingerkin

#endif  // FINGERKIN_IK_SOLVERS_H_
