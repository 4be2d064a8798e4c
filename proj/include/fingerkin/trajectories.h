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

// Target paths for the IK experiments.

#ifndef FINGERKIN_TRAJECTORIES_H_
#define FINGERKIN_TRAJECTORIES_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fingerkin/finger_model.h"
#include "fingerkin/ik_solvers.h"

namespace fingerkin {

// Plane carrying a trajectory. kCustom uses an explicit orthonormal pair
// (first, second); for the axis-parallel tags the pair is (x, z) or (x, y).
struct TrajectoryPlane {
  enum class Tag { kParallelXZ, kParallelXY, kCustom };

  Tag tag = Tag::kParallelXZ;
  Eigen::Vector3d first = Eigen::Vector3d::UnitX();
  Eigen::Vector3d second = Eigen::Vector3d::UnitZ();

  static TrajectoryPlane ParallelXZ();
  static TrajectoryPlane ParallelXY();
  // Throws DomainError unless the pair is orthonormal within 1e-10.
  static TrajectoryPlane Custom(const Eigen::Vector3d& first,
                                const Eigen::Vector3d& second);
};

struct Trajectory {
  std::vector<Eigen::Vector3d> points;
  TrajectoryPlane plane;
  bool closed = false;
  // Largest distance between consecutive points (closing segment included
  // for closed paths).
  double max_step = 0.0;
};

// Classic heart u = 16 sin^3 t, v = 13 cos t - 5 cos 2t - 2 cos 3t - cos 4t at
// n uniform parameters, each axis normalized to [-1/2, 1/2] using the
// continuous curve's bounding box, scaled, and embedded on a plane parallel
// to XZ through `center` (u -> x, v -> z).
Trajectory Heart(int n, double scale, const Eigen::Vector3d& center);

Trajectory Circle(int n, double radius, const Eigen::Vector3d& center,
                  const TrajectoryPlane& plane);

// Perimeter sampling of an axis-aligned square starting at a corner. Each side
// gets n/4 points (the first n % 4 sides one more), so all corners are
// samples and spacing is uniform whenever n % 4 == 0.
Trajectory Square(int n, double side, const Eigen::Vector3d& center,
                  const TrajectoryPlane& plane);

// Exact bounding box of the unnormalized heart curve, (u_min, u_max, v_min,
// v_max).
Eigen::Vector4d HeartCurveBounds();

struct Placement {
  Trajectory trajectory;
  // Share of points with a converged analytic IK solution inside the limits.
  double inside_fraction = 0.0;
  // Uniform shrink factor applied about the trajectory centroid.
  double shrink = 1.0;
  bool ok = false;
};

// Shrinks `trajectory` about its centroid until at least `min_fraction` of
// its points are reachable by the analytic solver with angles inside
// `limits`. ok is false (and a warning is due) when that never happens.
Placement PlaceInWorkspace(const Trajectory& trajectory,
                           const FingerParams& params,
                           const AngleLimits& limits,
                           double min_fraction = 0.99);

// Default experiment placements: a point in the middle of the coupled
// workspace, plus heart (XZ plane) and circle (XY plane) sized for the finger.
Eigen::Vector3d WorkspaceCentre(const FingerParams& params);
Trajectory DefaultHeart(const FingerParams& params, int n = 628);
Trajectory DefaultCircle(const FingerParams& params, int n = 360);
Trajectory DefaultSquare(const FingerParams& params, int n = 300);

// CSV: header line `# plane=<tag> closed=<true|false>` (custom planes append
// ` first=a;b;c second=d;e;f`), then `x,y,z`, then one point per row.
std::string FormatTrajectory(const Trajectory& trajectory);
Trajectory ParseTrajectory(std::string_view text);
Trajectory LoadTrajectory(const std::string& path);
void SaveTrajectory(const Trajectory& trajectory, const std::string& path);

}  // namespace fingerkin

#endif  // FINGERKIN_TRAJECTORIES_H_
