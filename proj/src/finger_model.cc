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

#include "fingerkin/finger_model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "fingerkin/errors.h"
#include "fingerkin/text_io.h"

namespace fingerkin {

double DegToRad(double deg) { return deg * std::numbers::pi / 180.0; }
double RadToDeg(double rad) { return rad * 180.0 / std::numbers::pi; }

FingerParams::FingerParams(const std::array<EllipseAxes, kNumJoints>& joints,
                           const std::array<double, 3>& bones,
                           double coupling_ratio, AxisOrientation orientation)
    : joints_(joints),
      bones_(bones),
      coupling_ratio_(coupling_ratio),
      orientation_(orientation) {
  for (double b : bones_) {
    if (!std::isfinite(b) || !(b > 0.0)) {
      throw DomainError("bone lengths must be positive");
    }
  }
  if (!std::isfinite(coupling_ratio_) || !(coupling_ratio_ > 0.0)) {
    throw DomainError("coupling ratio must be positive");
  }
}

FingerParams FingerParams::FromVector(const ParamVector& v,
                                      AxisOrientation orientation) {
  return FingerParams({EllipseAxes(v[0], v[1]), EllipseAxes(v[2], v[3]),
                       EllipseAxes(v[4], v[5]), EllipseAxes(v[6], v[7])},
                      {v[8], v[9], v[10]}, v[11], orientation);
}

FingerParams FingerParams::Reference() {
  return FromVector(
      {6.0, 5.0, 12.0, 10.0, 9.0, 7.5, 7.0, 6.0, 40.0, 25.0, 18.0, 2.0 / 3.0});
}

ParamVector FingerParams::ToVector() const {
  ParamVector v{};
  for (int j = 0; j < kNumJoints; ++j) {
    v[2 * j] = joints_[j].major();
    v[2 * j + 1] = joints_[j].minor();
  }
  v[8] = bones_[0];
  v[9] = bones_[1];
  v[10] = bones_[2];
  v[11] = coupling_ratio_;
  return v;
}

double FingerParams::ReachBound() const {
  double total = bones_[0] + bones_[1] + bones_[2];
  for (const auto& j : joints_) total += j.major();
  return total;
}

std::uint64_t FingerParams::Fingerprint() const {
  std::string bytes;
  for (double value : ToVector()) {
    const auto bits = std::bit_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i) bytes += static_cast<char>(bits >> (8 * i));
  }
  bytes += static_cast<char>(orientation_);
  return Fnv1a64(bytes);
}

std::string FingerprintHex(std::uint64_t fingerprint) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kDigits[fingerprint & 0xf];
    fingerprint >>= 4;
  }
  return out;
}

JointPlane PlaneOfJoint(int index) {
  return index == kAdAb ? JointPlane::kAdAb : JointPlane::kFlexExt;
}

double BoneBeforeJoint(const FingerParams& params, int index) {
  return index == kAdAb ? 0.0 : params.bone(index - 1);
}

HomTransform LinkTransform(const FingerParams& params, int index,
                           double theta) {
  return JointTransform(params.joint(index), theta, PlaneOfJoint(index),
                        BoneBeforeJoint(params, index), params.orientation());
}

Eigen::Vector3d ForwardKinematics(const FingerParams& params,
                                  const JointAngles& angles) {
  return ChainFrames(params, angles).back().translation;
}

std::vector<HomTransform> ChainFrames(const FingerParams& params,
                                      const JointAngles& angles) {
  std::vector<HomTransform> frames;
  frames.reserve(kNumJoints + 1);
  frames.push_back(HomTransform::Identity());
  for (int i = 0; i < kNumJoints; ++i) {
    frames.push_back(frames.back() * LinkTransform(params, i, angles[i]));
  }
  return frames;
}

Eigen::Matrix<double, 3, 4> FingertipJacobian(const FingerParams& params,
                                              const JointAngles& angles) {
  std::array<HomTransform, kNumJoints> links;
  for (int i = 0; i < kNumJoints; ++i) {
    links[i] = LinkTransform(params, i, angles[i]);
  }
  // tail[j]: fingertip expressed in frame j+1.
  std::array<Eigen::Vector3d, kNumJoints> tail;
  tail[kNumJoints - 1] = Eigen::Vector3d::Zero();
  for (int j = kNumJoints - 2; j >= 0; --j) {
    tail[j] = links[j + 1].Apply(tail[j + 1]);
  }
  Eigen::Matrix<double, 3, 4> jac;
  HomTransform head = HomTransform::Identity();
  for (int j = 0; j < kNumJoints; ++j) {
    const HomTransform d =
        JointTransformDerivative(params.joint(j), angles[j], PlaneOfJoint(j),
                                 params.orientation());
    jac.col(j) = head.rotation * (d.rotation * tail[j] + d.translation);
    head = head * links[j];
  }
  return jac;
}

AngleLimits DefaultAngleLimits() {
  return {AngleInterval{DegToRad(-50.0), DegToRad(50.0)},
          AngleInterval{0.0, DegToRad(90.0)},
          AngleInterval{0.0, DegToRad(90.0)},
          AngleInterval{0.0, DegToRad(90.0)}};
}

void CheckLimits(const AngleLimits& limits) {
  constexpr double kHalfPi = std::numbers::pi / 2;
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& [lo, hi] = limits[i];
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi ||
        lo < -kHalfPi || hi > kHalfPi) {
      std::ostringstream os;
      os << "limits for joint " << i + 1 << " [" << RadToDeg(lo) << ", "
         << RadToDeg(hi) << "] deg exceed the joint domain (-90, 90)";
      throw LimitsError(os.str());
    }
  }
}

bool WithinLimits(const JointAngles& angles, const AngleLimits& limits) {
  for (int i = 0; i < kNumJoints; ++i) {
    if (angles[i] < limits[i].lo || angles[i] > limits[i].hi) return false;
  }
  return true;
}

PostureCloud::PostureCloud(std::uint64_t params_fingerprint, std::uint64_t seed,
                           std::vector<FingertipRecord> records)
    : params_fingerprint_(params_fingerprint),
      seed_(seed),
      records_(std::move(records)) {
  if (records_.empty()) throw InsufficientData("posture cloud is empty");
}

void PostureCloud::Verify(const FingerParams& params, double tolerance) const {
  if (params.Fingerprint() != params_fingerprint_) {
    throw FingerprintMismatch("posture cloud fingerprint " +
                              FingerprintHex(params_fingerprint_) +
                              " does not match params " +
                              FingerprintHex(params.Fingerprint()));
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if ((ForwardKinematics(params, r.angles) - r.position).norm() > tolerance) {
      throw DomainError("posture cloud record " + std::to_string(i) +
                        " disagrees with forward kinematics");
    }
  }
}

JointAngles SampleAngles(std::uint64_t seed, std::uint64_t index,
                         const AngleLimits& limits) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 engine(seq);
  constexpr double kHalfPi = std::numbers::pi / 2;
  JointAngles angles;
  for (int i = 0; i < kNumJoints; ++i) {
    // Open unit interval from the top 53 bits.
    const double u =
        (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    double theta = limits[i].lo + u * (limits[i].hi - limits[i].lo);
    if (theta >= kHalfPi) theta = std::nextafter(kHalfPi, 0.0);
    if (theta <= -kHalfPi) theta = std::nextafter(-kHalfPi, 0.0);
    angles[i] = theta;
  }
  return angles;
}

PostureCloud SampleWorkspace(const FingerParams& params, std::size_t n,
                             std::uint64_t seed, const AngleLimits& limits,
                             unsigned threads) {
  if (n == 0) throw InsufficientData("workspace sample count must be >= 1");
  CheckLimits(limits);
  std::vector<FingertipRecord> records(n);
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      records[i].angles = SampleAngles(seed, i, limits);
      records[i].position = ForwardKinematics(params, records[i].angles);
    }
  };
  threads = std::clamp<unsigned>(threads, 1u, 64u);
  if (threads == 1 || n < 2 * threads) {
    fill(0, n);
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      workers.emplace_back(fill, begin, std::min(n, begin + chunk));
    }
    for (auto& w : workers) w.join();
  }
  return PostureCloud(params.Fingerprint(), seed, std::move(records));
}

}  // namespace fingerkin
