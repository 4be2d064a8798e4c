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

// Geometry of one elliptic joint.
//
// The origin of the child frame rides on an ellipse centred on the joint's
// centre of rotation. The joint angle theta is measured from the rest axis z
// of the parent frame; the transverse coordinate of the offset is always
// z * tan(theta). Because the trajectory is not a circle, the child frame
// rotates by a frame angle phi = atan(k * tan(theta)) that differs from theta
// unless the two semi-axes are equal.

#ifndef FINGERKIN_ELLIPTIC_JOINT_H_
#define FINGERKIN_ELLIPTIC_JOINT_H_

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace fingerkin {

// Semi-major / semi-minor lengths (mm) of a joint's articular trajectory.
class EllipseAxes {
 public:
  // Throws DomainError unless major >= minor > 0.
  EllipseAxes(double major, double minor);

  // Circular (revolute) joint of the given radius.
  static EllipseAxes Circle(double radius) { return {radius, radius}; }

  double major() const { return major_; }
  double minor() const { return minor_; }
  bool is_circle() const { return major_ == minor_; }

  friend bool operator==(const EllipseAxes&, const EllipseAxes&) = default;

 private:
  double major_;
  double minor_;
};

// Plane in which a joint moves. AdAb moves in the x-z plane and rotates about
// y (positive theta moves the offset toward +x); FlexExt moves in the y-z
// plane and rotates about x (positive theta moves the offset toward +y).
enum class JointPlane { kAdAb, kFlexExt };

// Which semi-axis lies across the rest axis. kMajorTransverse puts the major
// axis on the transverse coordinate, so the rest offset is the minor
// semi-axis; kMajorLongitudinal is the transposed reading where the rest
// offset is the major semi-axis.
enum class AxisOrientation { kMajorTransverse, kMajorLongitudinal };

// Rigid transform parent <- child: q_parent = rotation * q_child + translation.
struct HomTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static HomTransform Identity() { return {}; }

  Eigen::Vector3d Apply(const Eigen::Vector3d& point) const {
    return rotation * point + translation;
  }
  HomTransform operator*(const HomTransform& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
  HomTransform Inverse() const {
    const Eigen::Matrix3d rt = rotation.transpose();
    return {rt, -rt * translation};
  }
  // 4x4 homogeneous matrix with bottom row [0 0 0 1].
  Eigen::Matrix4d Matrix() const;
};

// In-plane semi-axes of the offset ellipse: transverse (across the rest axis)
// and longitudinal (along it).
struct InPlaneAxes {
  double transverse;
  double longitudinal;
};
InPlaneAxes ResolveAxes(const EllipseAxes& axes, AxisOrientation orientation);

// Origin of the child frame expressed in the parent frame. The out-of-plane
// coordinate is zero and z > 0. Throws DomainError unless |theta| < pi/2.
Eigen::Vector3d EllipseOffset(
    const EllipseAxes& axes, double theta, JointPlane plane,
    AxisOrientation orientation = AxisOrientation::kMajorTransverse);

// d(EllipseOffset)/d(theta).
Eigen::Vector3d EllipseOffsetDerivative(
    const EllipseAxes& axes, double theta, JointPlane plane,
    AxisOrientation orientation = AxisOrientation::kMajorTransverse);

// phi = atan(k tan(theta)), k = transverse^2 / longitudinal^2.
double FrameAngle(
    const EllipseAxes& axes, double theta,
    AxisOrientation orientation = AxisOrientation::kMajorTransverse);

// d(phi)/d(theta); strictly positive on the open domain.
double FrameAngleDerivative(
    const EllipseAxes& axes, double theta,
    AxisOrientation orientation = AxisOrientation::kMajorTransverse);

// Elementary rotation of a joint frame by the frame angle phi.
Eigen::Matrix3d PlaneRotation(JointPlane plane, double phi);
// d(PlaneRotation)/d(phi).
Eigen::Matrix3d PlaneRotationDerivative(JointPlane plane, double phi);

// Transform parent <- child of one joint. The bone offset (0, 0, bone_length)
// is added in the parent frame on top of the ellipse offset, so the joint's
// centre of rotation sits at the end of the parent bone.
HomTransform JointTransform(
    const EllipseAxes& axes, double theta, JointPlane plane,
    double bone_length,
    AxisOrientation orientation = AxisOrientation::kMajorTransverse);

// Element-wise d/d(theta) of JointTransform. The result is not a rigid
// transform; rotation and translation hold the derivative blocks.
HomTransform JointTransformDerivative(
    const EllipseAxes& axes, double theta, JointPlane plane,
    AxisOrientation orientation = AxisOrientation::kMajorTransverse);

// Throws DomainError unless theta is finite and |theta| < pi/2.
void CheckJointAngle(double theta);

}  // namespace fingerkin

#endif  // FINGERKIN_ELLIPTIC_JOINT_H_
