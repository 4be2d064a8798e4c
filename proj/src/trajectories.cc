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

#include "fingerkin/trajectories.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fingerkin/errors.h"
#include "fingerkin/text_io.h"

namespace fingerkin {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double HeartU(double t) {
  const double s = std::sin(t);
  return 16.0 * s * s * s;
}
double HeartV(double t) {
  return 13.0 * std::cos(t) - 5.0 * std::cos(2 * t) - 2.0 * std::cos(3 * t) -
         std::cos(4 * t);
}
double HeartDv(double t) {
  return -13.0 * std::sin(t) + 10.0 * std::sin(2 * t) + 6.0 * std::sin(3 * t) +
         4.0 * std::sin(4 * t);
}
double HeartD2v(double t) {
  return -13.0 * std::cos(t) + 20.0 * std::cos(2 * t) + 18.0 * std::cos(3 * t) +
         16.0 * std::cos(4 * t);
}

// Refines a stationary point of v by Newton on v'.
double RefineStationary(double t) {
  for (int i = 0; i < 50; ++i) {
    const double step = HeartDv(t) / HeartD2v(t);
    t -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return t;
}

void UpdateMaxStep(Trajectory& traj) {
  traj.max_step = 0.0;
  const auto& p = traj.points;
  for (std::size_t i = 1; i < p.size(); ++i) {
    traj.max_step = std::max(traj.max_step, (p[i] - p[i - 1]).norm());
  }
  if (traj.closed && p.size() > 1) {
    traj.max_step = std::max(traj.max_step, (p.front() - p.back()).norm());
  }
}

void CheckCount(int n, int minimum, const char* what) {
  if (n < minimum) {
    throw DomainError(std::string(what) + " needs at least " +
                      std::to_string(minimum) + " points");
  }
}

void CheckPositive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive");
  }
}

}  // namespace

TrajectoryPlane TrajectoryPlane::ParallelXZ() {
  return {Tag::kParallelXZ, Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitZ()};
}

TrajectoryPlane TrajectoryPlane::ParallelXY() {
  return {Tag::kParallelXY, Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()};
}

TrajectoryPlane TrajectoryPlane::Custom(const Eigen::Vector3d& first,
                                        const Eigen::Vector3d& second) {
  if (std::abs(first.norm() - 1.0) > 1e-10 ||
      std::abs(second.norm() - 1.0) > 1e-10 ||
      std::abs(first.dot(second)) > 1e-10) {
    throw DomainError("custom trajectory basis must be orthonormal");
  }
  return {Tag::kCustom, first, second};
}

Eigen::Vector4d HeartCurveBounds() {
  static const Eigen::Vector4d bounds = [] {
    // v is even in t, so the extremes lie in [0, pi]; scan then polish.
    constexpr int kScan = 4096;
    double t_max = 0.0;
    double t_min = 0.0;
    for (int i = 0; i <= kScan; ++i) {
      const double t = std::numbers::pi * i / kScan;
      if (HeartV(t) > HeartV(t_max)) t_max = t;
      if (HeartV(t) < HeartV(t_min)) t_min = t;
    }
    t_max = RefineStationary(t_max);
    t_min = RefineStationary(t_min);
    return Eigen::Vector4d(-16.0, 16.0, HeartV(t_min), HeartV(t_max));
  }();
  return bounds;
}

Trajectory Heart(int n, double scale, const Eigen::Vector3d& center) {
  CheckCount(n, 3, "heart");
  CheckPositive(scale, "heart scale");
  const Eigen::Vector4d b = HeartCurveBounds();
  const double u_mid = 0.5 * (b[0] + b[1]);
  const double v_mid = 0.5 * (b[2] + b[3]);
  const double u_span = b[1] - b[0];
  const double v_span = b[3] - b[2];
  Trajectory traj;
  traj.plane = TrajectoryPlane::ParallelXZ();
  traj.closed = true;
  traj.points.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double t = kTwoPi * k / n;
    const double u = scale * (HeartU(t) - u_mid) / u_span;
    const double v = scale * (HeartV(t) - v_mid) / v_span;
    traj.points.emplace_back(center.x() + u, center.y(), center.z() + v);
  }
  UpdateMaxStep(traj);
  return traj;
}

Trajectory Circle(int n, double radius, const Eigen::Vector3d& center,
                  const TrajectoryPlane& plane) {
  CheckCount(n, 1, "circle");
  CheckPositive(radius, "circle radius");
  Trajectory traj;
  traj.plane = plane;
  traj.closed = true;
  traj.points.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double a = kTwoPi * k / n;
    traj.points.push_back(center + radius * (std::cos(a) * plane.first +
                                             std::sin(a) * plane.second));
  }
  UpdateMaxStep(traj);
  return traj;
}

Trajectory Square(int n, double side, const Eigen::Vector3d& center,
                  const TrajectoryPlane& plane) {
  CheckCount(n, 4, "square");
  CheckPositive(side, "square side");
  const double h = 0.5 * side;
  const Eigen::Vector3d corners[4] = {
      center - h * plane.first - h * plane.second,
      center + h * plane.first - h * plane.second,
      center + h * plane.first + h * plane.second,
      center - h * plane.first + h * plane.second};
  Trajectory traj;
  traj.plane = plane;
  traj.closed = true;
  traj.points.reserve(n);
  for (int k = 0; k < 4; ++k) {
    const int m = n / 4 + (k < n % 4 ? 1 : 0);
    const Eigen::Vector3d& from = corners[k];
    const Eigen::Vector3d& to = corners[(k + 1) % 4];
    for (int j = 0; j < m; ++j) {
      traj.points.push_back(from + (static_cast<double>(j) / m) * (to - from));
    }
  }
  UpdateMaxStep(traj);
  return traj;
}

Placement PlaceInWorkspace(const Trajectory& trajectory,
                           const FingerParams& params,
                           const AngleLimits& limits, double min_fraction) {
  if (trajectory.points.empty()) throw InsufficientData("trajectory is empty");
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : trajectory.points) centroid += p;
  centroid /= static_cast<double>(trajectory.points.size());

  const SolverSettings settings;
  Placement placement;
  constexpr int kMaxShrinks = 25;
  constexpr double kShrink = 0.85;
  for (int round = 0; round <= kMaxShrinks; ++round) {
    placement.trajectory = trajectory;
    for (auto& p : placement.trajectory.points) {
      p = centroid + placement.shrink * (p - centroid);
    }
    UpdateMaxStep(placement.trajectory);
    const auto sols = IkAnalytic(params, placement.trajectory.points, settings);
    std::size_t inside = 0;
    for (const auto& s : sols) {
      if (s.converged && WithinLimits(s.angles, limits)) ++inside;
    }
    placement.inside_fraction =
        static_cast<double>(inside) / static_cast<double>(sols.size());
    if (placement.inside_fraction >= min_fraction) {
      placement.ok = true;
      return placement;
    }
    placement.shrink *= kShrink;
  }
  return placement;
}

namespace {

double ChainLength(const FingerParams& params) {
  return ForwardKinematics(params, JointAngles::Zero()).z();
}

// Fingertip of the sagittal pose with MCP = PIP = flex and coupled DIP.
Eigen::Vector3d CoupledPose(const FingerParams& params, double flex) {
  return ForwardKinematics(
      params, JointAngles(0.0, flex, flex, params.coupling_ratio() * flex));
}

}  // namespace

Eigen::Vector3d WorkspaceCentre(const FingerParams& params) {
  return CoupledPose(params, std::numbers::pi / 4);
}

Trajectory DefaultHeart(const FingerParams& params, int n) {
  return Heart(n, 0.3 * ChainLength(params), WorkspaceCentre(params));
}

Trajectory DefaultCircle(const FingerParams& params, int n) {
  // A horizontal slice through the 45 deg pose clips the coupled workspace;
  // a more flexed centre keeps the whole circle reachable.
  return Circle(n, 0.1 * ChainLength(params),
                CoupledPose(params, DegToRad(55.0)),
                TrajectoryPlane::ParallelXY());
}

Trajectory DefaultSquare(const FingerParams& params, int n) {
  return Square(n, 0.25 * ChainLength(params), WorkspaceCentre(params),
                TrajectoryPlane::ParallelXZ());
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view TagName(TrajectoryPlane::Tag tag) {
  switch (tag) {
    case TrajectoryPlane::Tag::kParallelXZ: return "parallel_xz";
    case TrajectoryPlane::Tag::kParallelXY: return "parallel_xy";
    case TrajectoryPlane::Tag::kCustom: return "custom";
  }
  return "custom";
}

std::string FormatVector(const Eigen::Vector3d& v) {
  return FormatDouble(v.x()) + ";" + FormatDouble(v.y()) + ";" +
         FormatDouble(v.z());
}

bool ParseVector(std::string_view text, Eigen::Vector3d& out) {
  const auto parts = SplitFields(text, ';');
  if (parts.size() != 3) return false;
  for (int i = 0; i < 3; ++i) {
    if (!ParseDouble(parts[i], out[i])) return false;
  }
  return true;
}

}  // namespace

std::string FormatTrajectory(const Trajectory& trajectory) {
  std::string out = "# plane=";
  out += TagName(trajectory.plane.tag);
  out += trajectory.closed ? " closed=true" : " closed=false";
  if (trajectory.plane.tag == TrajectoryPlane::Tag::kCustom) {
    out += " first=" + FormatVector(trajectory.plane.first);
    out += " second=" + FormatVector(trajectory.plane.second);
  }
  out += "\nx,y,z\n";
  for (const auto& p : trajectory.points) {
    out += FormatDouble(p.x()) + "," + FormatDouble(p.y()) + "," +
           FormatDouble(p.z()) + "\n";
  }
  return out;
}

Trajectory ParseTrajectory(std::string_view text) {
  Trajectory traj;
  bool saw_header = false;
  bool saw_columns = false;
  int number = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  Eigen::Vector3d first = Eigen::Vector3d::UnitX();
  Eigen::Vector3d second = Eigen::Vector3d::UnitZ();
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (saw_header) continue;
      saw_header = true;
      std::istringstream tokens{std::string(line.substr(1))};
      std::string token;
      while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "plane") {
          if (value == "parallel_xz") {
            traj.plane = TrajectoryPlane::ParallelXZ();
          } else if (value == "parallel_xy") {
            traj.plane = TrajectoryPlane::ParallelXY();
          } else if (value == "custom") {
            traj.plane.tag = TrajectoryPlane::Tag::kCustom;
          } else {
            throw ParseError("unknown plane tag `" + value + "`", number);
          }
        } else if (key == "closed") {
          if (value != "true" && value != "false") {
            throw ParseError("closed must be true or false", number);
          }
          traj.closed = value == "true";
        } else if (key == "first" && !ParseVector(value, first)) {
          throw ParseError("bad basis vector", number);
        } else if (key == "second" && !ParseVector(value, second)) {
          throw ParseError("bad basis vector", number);
        }
      }
      continue;
    }
    if (!saw_columns) {
      if (line != "x,y,z") throw ParseError("expected `x,y,z` header", number);
      saw_columns = true;
      continue;
    }
    const auto fields = SplitFields(line, ',');
    if (fields.size() != 3) throw ParseError("expected 3 fields", number);
    Eigen::Vector3d p;
    for (int k = 0; k < 3; ++k) {
      if (!ParseDouble(fields[k], p[k]) || !std::isfinite(p[k])) {
        throw ParseError("bad number `" + std::string(fields[k]) + "`", number,
                         k + 1);
      }
    }
    traj.points.push_back(p);
  }
  if (traj.plane.tag == TrajectoryPlane::Tag::kCustom) {
    traj.plane = TrajectoryPlane::Custom(first, second);
  }
  if (traj.points.empty()) throw ParseError("trajectory has no points", number);
  UpdateMaxStep(traj);
  return traj;
}

Trajectory LoadTrajectory(const std::string& path) {
  return ParseTrajectory(ReadTextFile(path));
}

void SaveTrajectory(const Trajectory& trajectory, const std::string& path) {
  WriteTextFile(path, FormatTrajectory(trajectory));
}

}  // namespace fingerkin
