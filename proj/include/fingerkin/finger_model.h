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

// The four-joint finger chain: Ad/Ab and flexion at the MCP, flexion at the
// PIP and DIP. Frame 0 is fixed to the metacarpal.

#ifndef FINGERKIN_FINGER_MODEL_H_
#define FINGERKIN_FINGER_MODEL_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fingerkin/elliptic_joint.h"

namespace fingerkin {

enum JointIndex : int { kAdAb = 0, kMcp = 1, kPip = 2, kDip = 3 };
inline constexpr int kNumJoints = 4;
inline constexpr int kNumParams = 12;

// theta_1 (Ad/Ab), theta_2 (MCP flexion), theta_3 (PIP), theta_4 (DIP), rad.
using JointAngles = Eigen::Vector4d;
using ParamVector = std::array<double, kNumParams>;

// Full chain description. Flattened order (ParamVector):
//   [adab_major, adab_minor, mcp_major, mcp_minor, pip_major, pip_minor,
//    dip_major, dip_minor, proximal, intermediate, distal, coupling_ratio]
// The coupling ratio c ties DIP to PIP flexion: theta_4 = c * theta_3.
class FingerParams {
 public:
  FingerParams(const std::array<EllipseAxes, kNumJoints>& joints,
               const std::array<double, 3>& bones, double coupling_ratio,
               AxisOrientation orientation = AxisOrientation::kMajorTransverse);

  static FingerParams FromVector(
      const ParamVector& values,
      AxisOrientation orientation = AxisOrientation::kMajorTransverse);
  // Index-finger-sized default used by the CLI and tests.
  static FingerParams Reference();

  ParamVector ToVector() const;

  const EllipseAxes& joint(int index) const { return joints_[index]; }
  const std::array<EllipseAxes, kNumJoints>& joints() const { return joints_; }
  // 0 = proximal, 1 = intermediate, 2 = distal.
  double bone(int index) const { return bones_[index]; }
  const std::array<double, 3>& bones() const { return bones_; }
  double coupling_ratio() const { return coupling_ratio_; }
  AxisOrientation orientation() const { return orientation_; }

  // Upper bound on the fingertip distance from the frame-0 origin.
  double ReachBound() const;

  // Stable 64-bit FNV-1a digest over the flattened values and orientation.
  std::uint64_t Fingerprint() const;

  friend bool operator==(const FingerParams&, const FingerParams&) = default;

 private:
  std::array<EllipseAxes, kNumJoints> joints_;
  std::array<double, 3> bones_;
  double coupling_ratio_;
  AxisOrientation orientation_;
};

std::string FingerprintHex(std::uint64_t fingerprint);

// Plane of joint `index` and the bone length carried by its transform.
JointPlane PlaneOfJoint(int index);
double BoneBeforeJoint(const FingerParams& params, int index);

// Transform from frame index to index+1.
HomTransform LinkTransform(const FingerParams& params, int index,
                           double theta);

// Fingertip position (origin of frame 4) in frame 0, mm.
Eigen::Vector3d ForwardKinematics(const FingerParams& params,
                                  const JointAngles& angles);

// Frames 0->k for k = 0..4; element 0 is the identity.
std::vector<HomTransform> ChainFrames(const FingerParams& params,
                                      const JointAngles& angles);

// Analytic d(fingertip)/d(theta), 3x4.
Eigen::Matrix<double, 3, 4> FingertipJacobian(const FingerParams& params,
                                              const JointAngles& angles);

// Per-joint sampling interval, radians. Samples lie strictly inside.
struct AngleInterval {
  double lo;
  double hi;
};
using AngleLimits = std::array<AngleInterval, kNumJoints>;

// theta_1 in (-50, 50) deg, theta_2..4 in (0, 90) deg.
AngleLimits DefaultAngleLimits();
// Throws LimitsError if an interval is inverted or leaves [-pi/2, pi/2].
void CheckLimits(const AngleLimits& limits);
bool WithinLimits(const JointAngles& angles, const AngleLimits& limits);

struct FingertipRecord {
  Eigen::Vector3d position;
  JointAngles angles;
};

// Table of (fingertip, joint angles) samples for nearest-neighbour IK.
class PostureCloud {
 public:
  // Throws InsufficientData when `records` is empty.
  PostureCloud(std::uint64_t params_fingerprint, std::uint64_t seed,
               std::vector<FingertipRecord> records);

  std::uint64_t params_fingerprint() const { return params_fingerprint_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<FingertipRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  // Throws FingerprintMismatch when the cloud was built from other params,
  // DomainError when a record's position disagrees with FK beyond tolerance.
  void Verify(const FingerParams& params, double tolerance = 1e-9) const;

 private:
  std::uint64_t params_fingerprint_;
  std::uint64_t seed_;
  std::vector<FingertipRecord> records_;
};

// Uniform i.i.d. sampling of joint angles within `limits`. Each record draws
// from its own counter-seeded stream, so the result depends only on
// (params, n, seed, limits) and not on `threads`.
PostureCloud SampleWorkspace(const FingerParams& params, std::size_t n,
                             std::uint64_t seed, const AngleLimits& limits,
                             unsigned threads = 1);

// Angles of record `index` of the stream used by SampleWorkspace.
JointAngles SampleAngles(std::uint64_t seed, std::uint64_t index,
                         const AngleLimits& limits);

double DegToRad(double deg);
double RadToDeg(double rad);

}  // namespace fingerkin

#endif  // FINGERKIN_FINGER_MODEL_H_
