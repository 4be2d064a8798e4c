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

#include "fingerkin/elliptic_joint.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fingerkin/errors.h"

namespace fingerkin {

EllipseAxes::EllipseAxes(double major, double minor)
    : major_(major), minor_(minor) {
  if (!(std::isfinite(major) && std::isfinite(minor)) || !(minor > 0.0) ||
      major < minor) {
    std::ostringstream os;
    os << "ellipse axes must satisfy major >= minor > 0, got major=" << major
       << " minor=" << minor;
    throw DomainError(os.str());
  }
}

Eigen::Matrix4d HomTransform::Matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

void CheckJointAngle(double theta) {
  if (!std::isfinite(theta) || std::abs(theta) >= std::numbers::pi / 2) {
    std::ostringstream os;
    os << "joint angle " << theta << " rad outside (-pi/2, pi/2)";
    throw DomainError(os.str());
  }
}

InPlaneAxes ResolveAxes(const EllipseAxes& axes, AxisOrientation orientation) {
  if (orientation == AxisOrientation::kMajorTransverse) {
    return {axes.major(), axes.minor()};
  }
  return {axes.minor(), axes.major()};
}

namespace {

// Longitudinal coordinate z and transverse coordinate u = z tan(theta) of the
// point on u^2/a^2 + z^2/b^2 = 1.
struct InPlanePoint {
  double u;
  double z;
};

InPlanePoint OffsetInPlane(const InPlaneAxes& ax, double t) {
  const double a = ax.transverse;
  const double b = ax.longitudinal;
  const double z = a * b / std::sqrt(a * a + b * b * t * t);
  return {z * t, z};
}

Eigen::Vector3d Embed(JointPlane plane, double u, double z) {
  if (plane == JointPlane::kAdAb) return {u, 0.0, z};
  return {0.0, u, z};
}

}  // namespace

Eigen::Vector3d EllipseOffset(const EllipseAxes& axes, double theta,
                              JointPlane plane, AxisOrientation orientation) {
  CheckJointAngle(theta);
  const InPlanePoint p =
      OffsetInPlane(ResolveAxes(axes, orientation), std::tan(theta));
  return Embed(plane, p.u, p.z);
}

Eigen::Vector3d EllipseOffsetDerivative(const EllipseAxes& axes, double theta,
                                        JointPlane plane,
                                        AxisOrientation orientation) {
  CheckJointAngle(theta);
  const InPlaneAxes ax = ResolveAxes(axes, orientation);
  const double t = std::tan(theta);
  const InPlanePoint p = OffsetInPlane(ax, t);
  const double a2 = ax.transverse * ax.transverse;
  const double dz_dt = -p.z * p.z * p.z * t / a2;
  const double du_dt = p.z + t * dz_dt;
  const double dt_dtheta = 1.0 + t * t;
  return Embed(plane, du_dt * dt_dtheta, dz_dt * dt_dtheta);
}

double FrameAngle(const EllipseAxes& axes, double theta,
                  AxisOrientation orientation) {
  CheckJointAngle(theta);
  const InPlaneAxes ax = ResolveAxes(axes, orientation);
  if (ax.transverse == ax.longitudinal) return theta;
  const double k =
      (ax.transverse * ax.transverse) / (ax.longitudinal * ax.longitudinal);
  return std::atan(k * std::tan(theta));
}

double FrameAngleDerivative(const EllipseAxes& axes, double theta,
                            AxisOrientation orientation) {
  CheckJointAngle(theta);
  const InPlaneAxes ax = ResolveAxes(axes, orientation);
  if (ax.transverse == ax.longitudinal) return 1.0;
  const double k =
      (ax.transverse * ax.transverse) / (ax.longitudinal * ax.longitudinal);
  const double t = std::tan(theta);
  return k * (1.0 + t * t) / (1.0 + k * k * t * t);
}

Eigen::Matrix3d PlaneRotation(JointPlane plane, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix3d r;
  if (plane == JointPlane::kAdAb) {
    // About +y: e_z -> (sin phi, 0, cos phi).
    r << c, 0, s,
         0, 1, 0,
         -s, 0, c;
  } else {
    // About -x: e_z -> (0, sin phi, cos phi).
    r << 1, 0, 0,
         0, c, s,
         0, -s, c;
  }
  return r;
}

Eigen::Matrix3d PlaneRotationDerivative(JointPlane plane, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix3d d;
  if (plane == JointPlane::kAdAb) {
    d << -s, 0, c,
         0, 0, 0,
         -c, 0, -s;
  } else {
    d << 0, 0, 0,
         0, -s, c,
         0, -c, -s;
  }
  return d;
}

HomTransform JointTransform(const EllipseAxes& axes, double theta,
                            JointPlane plane, double bone_length,
                            AxisOrientation orientation) {
  if (!(bone_length >= 0.0) || !std::isfinite(bone_length)) {
    throw DomainError("bone length must be finite and non-negative");
  }
  HomTransform t;
  t.rotation = PlaneRotation(plane, FrameAngle(axes, theta, orientation));
  t.translation = EllipseOffset(axes, theta, plane, orientation);
  t.translation.z() += bone_length;
  return t;
}

HomTransform JointTransformDerivative(const EllipseAxes& axes, double theta,
                                      JointPlane plane,
                                      AxisOrientation orientation) {
  HomTransform d;
  const double phi = FrameAngle(axes, theta, orientation);
  d.rotation = PlaneRotationDerivative(plane, phi) *
               FrameAngleDerivative(axes, theta, orientation);
  d.translation = EllipseOffsetDerivative(axes, theta, plane, orientation);
  return d;
}

}  // namespace fingerkin
