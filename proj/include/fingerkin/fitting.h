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

// Arc fitting about a fixed centre of rotation, the radial error metric, and
// recovery of finger parameters from bone captures.

#ifndef FINGERKIN_FITTING_H_
#define FINGERKIN_FITTING_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "fingerkin/capture_io.h"
#include "fingerkin/elliptic_joint.h"
#include "fingerkin/finger_model.h"
#include "fingerkin/ik_solvers.h"

namespace fingerkin {

// Points expressed in a plane with origin and orthonormal in-plane basis.
struct PlanarPointSet {
  std::vector<Eigen::Vector2d> points;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d first_axis = Eigen::Vector3d::UnitX();
  Eigen::Vector3d second_axis = Eigen::Vector3d::UnitY();
  // RMS out-of-plane distance of the source points, mm.
  double projection_rms = 0.0;

  Eigen::Vector3d Normal() const { return first_axis.cross(second_axis); }
  Eigen::Vector2d Project(const Eigen::Vector3d& p) const;
  Eigen::Vector3d Lift(const Eigen::Vector2d& q) const;
};

// Points already lying in the xy plane.
PlanarPointSet PlanarFromPoints(std::vector<Eigen::Vector2d> points);

// Best-fit plane through the centroid. Throws DegenerateGeometry for fewer
// than three points or collinear input.
PlanarPointSet ProjectToPlane(const std::vector<Eigen::Vector3d>& points);

enum class ArcModel { kCircle, kEllipse };

struct ArcFit {
  ArcModel model = ArcModel::kCircle;
  Eigen::Vector2d cor = Eigen::Vector2d::Zero();
  EllipseAxes axes = EllipseAxes::Circle(1.0);
  // Direction of the major axis in the plane, in [-pi/2, pi/2).
  double orientation = 0.0;
  std::vector<double> per_point_error;
  double mse = 0.0;

  // Distance from the CoR to the curve along the ray at `angle`.
  double RadiusAt(double angle) const;
  Eigen::Vector2d PointAt(double angle) const;
};

struct ArcFitOptions {
  // Hold the major axis at this direction instead of fitting it.
  std::optional<double> locked_orientation;
  int orientation_starts = 8;
  int max_iterations = 200;
};

// Minimises the summed squared radial error with the CoR held fixed. Needs
// at least 3 points for a circle and 5 for an ellipse.
ArcFit FitArcFixedCor(const PlanarPointSet& points, const Eigen::Vector2d& cor,
                      ArcModel model, const ArcFitOptions& options = {});

// Distance to the curve point on the same ray from the CoR, divided by that
// point's distance to the CoR. Throws DegenerateGeometry if point == cor.
double RadialError(const Eigen::Vector2d& point, const ArcFit& fit);

struct FitComparison {
  ArcFit ellipse;
  ArcFit circle;
  // ellipse.mse / circle.mse; 1 when both sit at the rounding floor.
  double mse_ratio = 1.0;
};

FitComparison CompareFits(const PlanarPointSet& points,
                          const Eigen::Vector2d& cor,
                          const ArcFitOptions& options = {});

// JSON report of a comparison and the CSV used for plotting it.
std::string FitReportJson(const FitComparison& comparison,
                          const PlanarPointSet& points);
std::string FitPlotCsv(const FitComparison& comparison,
                       const PlanarPointSet& points);

// Points on an arc of the given curve, evenly spaced in ray angle, with
// optional Gaussian radial noise of relative size `radial_noise`.
std::vector<Eigen::Vector2d> SampleArc(const EllipseAxes& axes,
                                       double orientation,
                                       const Eigen::Vector2d& cor,
                                       double start_angle, double span,
                                       int n, double radial_noise,
                                       std::uint64_t seed);

// Bone end points and fingertip in frame 0, in the name order
// proximal_start, proximal_end, intermediate_start, intermediate_end,
// distal_start, distal_end, tip.
inline constexpr int kNumBonePoints = 7;
std::vector<std::string> BonePointNames();
std::array<Eigen::Vector3d, kNumBonePoints> BonePoints(
    const FingerParams& params, const JointAngles& angles);

// Bone capture of the given postures with isotropic Gaussian noise (mm).
CaptureSession SimulateBoneCapture(const FingerParams& params,
                                   const std::vector<JointAngles>& postures,
                                   double frame_rate, double noise_sigma,
                                   std::uint64_t seed);

struct FingerFitSettings {
  int max_iterations = 500;
  // Relative parameter change below which the fit stops.
  double step_tolerance = 1e-12;
  // Refit the DIP/PIP coupling ratio from the per-frame angles.
  bool estimate_coupling = true;
};

struct FingerFitReport {
  FingerParams params;
  std::vector<JointAngles> frame_angles;
  std::vector<std::size_t> frames_used;
  // RMS distance between captured and modelled points, mm.
  double rms_residual = 0.0;
  int iterations = 0;
};

inline constexpr std::size_t kMinFitFrames = 4;

// Bone lengths come from capture medians. Ellipse axes and per-frame angles
// are then fitted jointly to all bone points. Captures are expected in the
// metacarpal frame. Throws InsufficientData, NoConvergence.
FingerFitReport FitFingerParams(const CaptureSession& capture,
                                const FingerParams& initial,
                                const FingerFitSettings& settings = {});

struct ReplayPoint {
  double time = 0.0;
  Eigen::Vector3d real;
  Eigen::Vector3d simulated;
  double error = 0.0;
  bool converged = false;
};

// Drives the model through the captured path of `tip_name` with analytic IK,
// falling back to the regularized optimizer where the path leaves the
// coupled workspace.
std::vector<ReplayPoint> ReplayCapture(const CaptureSession& capture,
                                       const FingerParams& params,
                                       const SolverSettings& settings,
                                       std::string_view tip_name = kTipName);
double ReplayRms(const std::vector<ReplayPoint>& replay);

}  // namespace fingerkin

#endif  // FINGERKIN_FITTING_H_
