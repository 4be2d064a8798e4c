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

#include "fingerkin/fitting.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "fingerkin/errors.h"
#include "fingerkin/least_squares.h"
#include "fingerkin/text_io.h"
#include "json.hpp"

namespace fingerkin {
namespace {

constexpr double kPi = std::numbers::pi;

double WrapHalfTurn(double angle) {
  return angle - kPi * std::floor((angle + kPi / 2) / kPi);
}

// Flips `v` so its largest-magnitude component is positive.
Eigen::Vector3d CanonicalSign(const Eigen::Vector3d& v) {
  Eigen::Index i;
  v.cwiseAbs().maxCoeff(&i);
  return v[i] < 0 ? Eigen::Vector3d(-v) : v;
}

}  // namespace

Eigen::Vector2d PlanarPointSet::Project(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d d = p - origin;
  return {d.dot(first_axis), d.dot(second_axis)};
}

Eigen::Vector3d PlanarPointSet::Lift(const Eigen::Vector2d& q) const {
  return origin + q.x() * first_axis + q.y() * second_axis;
}

PlanarPointSet PlanarFromPoints(std::vector<Eigen::Vector2d> points) {
  PlanarPointSet set;
  set.points = std::move(points);
  return set;
}

PlanarPointSet ProjectToPlane(const std::vector<Eigen::Vector3d>& points) {
  if (points.size() < 3) {
    throw DegenerateGeometry("plane fit needs at least 3 points, got " +
                             std::to_string(points.size()));
  }
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Eigen::MatrixXd centred(points.size(), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    centred.row(static_cast<Eigen::Index>(i)) = (points[i] - centroid).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  const Eigen::Vector3d sigma = svd.singularValues();
  if (!(sigma[0] > 0.0) || sigma[1] <= 1e-9 * sigma[0]) {
    throw DegenerateGeometry("points are collinear");
  }
  PlanarPointSet set;
  set.origin = centroid;
  const Eigen::Vector3d normal = CanonicalSign(svd.matrixV().col(2));
  set.first_axis = CanonicalSign(svd.matrixV().col(0));
  set.second_axis = normal.cross(set.first_axis).normalized();
  double sum_sq = 0.0;
  set.points.reserve(points.size());
  for (const auto& p : points) {
    const double off = (p - centroid).dot(normal);
    sum_sq += off * off;
    set.points.push_back(set.Project(p));
  }
  set.projection_rms = std::sqrt(sum_sq / static_cast<double>(points.size()));
  return set;
}

double ArcFit::RadiusAt(double angle) const {
  const double c = std::cos(angle - orientation);
  const double s = std::sin(angle - orientation);
  const double major = axes.major();
  const double minor = axes.minor();
  return 1.0 / std::sqrt(c * c / (major * major) + s * s / (minor * minor));
}

Eigen::Vector2d ArcFit::PointAt(double angle) const {
  return cor + RadiusAt(angle) * Eigen::Vector2d(std::cos(angle), std::sin(angle));
}

double RadialError(const Eigen::Vector2d& point, const ArcFit& fit) {
  const Eigen::Vector2d d = point - fit.cor;
  if (d.x() == 0.0 && d.y() == 0.0) {
    throw DegenerateGeometry("point coincides with the centre of rotation");
  }
  const double rho = fit.RadiusAt(std::atan2(d.y(), d.x()));
  return std::abs(d.norm() - rho) / rho;
}

namespace {

struct PolarSample {
  double distance;
  double angle;
};

std::vector<PolarSample> ToPolar(const PlanarPointSet& points,
                                 const Eigen::Vector2d& cor) {
  std::vector<PolarSample> polar;
  polar.reserve(points.points.size());
  for (const auto& p : points.points) {
    const Eigen::Vector2d d = p - cor;
    if (d.x() == 0.0 && d.y() == 0.0) {
      throw DegenerateGeometry("point coincides with the centre of rotation");
    }
    polar.push_back({d.norm(), std::atan2(d.y(), d.x())});
  }
  return polar;
}

void FinishFit(const PlanarPointSet& points, ArcFit& fit) {
  fit.per_point_error.clear();
  double sum = 0.0;
  for (const auto& p : points.points) {
    const double e = RadialError(p, fit);
    fit.per_point_error.push_back(e);
    sum += e * e;
  }
  fit.mse = sum / static_cast<double>(points.points.size());
}

// Residuals d * sqrt(g) - 1 over x = (ln a, ln b[, omega]) with a the
// semi-axis along omega.
struct EllipseProblem {
  const std::vector<PolarSample>* polar;
  std::optional<double> locked;

  double Omega(const Eigen::VectorXd& x) const {
    return locked ? *locked : x[2];
  }

  Eigen::VectorXd Residual(const Eigen::VectorXd& x) const {
    const double ia2 = std::exp(-2.0 * x[0]);
    const double ib2 = std::exp(-2.0 * x[1]);
    const double omega = Omega(x);
    Eigen::VectorXd r(polar->size());
    for (std::size_t i = 0; i < polar->size(); ++i) {
      const double c = std::cos((*polar)[i].angle - omega);
      const double s = std::sin((*polar)[i].angle - omega);
      r[static_cast<Eigen::Index>(i)] =
          (*polar)[i].distance * std::sqrt(c * c * ia2 + s * s * ib2) - 1.0;
    }
    return r;
  }

  Eigen::MatrixXd Jacobian(const Eigen::VectorXd& x) const {
    const double ia2 = std::exp(-2.0 * x[0]);
    const double ib2 = std::exp(-2.0 * x[1]);
    const double omega = Omega(x);
    Eigen::MatrixXd jac(polar->size(), x.size());
    for (std::size_t i = 0; i < polar->size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double c = std::cos((*polar)[i].angle - omega);
      const double s = std::sin((*polar)[i].angle - omega);
      const double g = c * c * ia2 + s * s * ib2;
      const double k = (*polar)[i].distance / (2.0 * std::sqrt(g));
      jac(row, 0) = -2.0 * c * c * ia2 * k;
      jac(row, 1) = -2.0 * s * s * ib2 * k;
      if (!locked) jac(row, 2) = 2.0 * c * s * (ia2 - ib2) * k;
    }
    return jac;
  }
};

}  // namespace

ArcFit FitArcFixedCor(const PlanarPointSet& points, const Eigen::Vector2d& cor,
                      ArcModel model, const ArcFitOptions& options) {
  const std::size_t needed = model == ArcModel::kCircle ? 3 : 5;
  if (points.points.size() < needed) {
    throw DegenerateGeometry("arc fit needs at least " + std::to_string(needed) +
                             " points, got " +
                             std::to_string(points.points.size()));
  }
  const auto polar = ToPolar(points, cor);

  // Closed form for the circle: minimise sum (d_i / R - 1)^2.
  double sum_d = 0.0;
  double sum_d2 = 0.0;
  for (const auto& p : polar) {
    sum_d += p.distance;
    sum_d2 += p.distance * p.distance;
  }
  const double radius = sum_d2 / sum_d;

  ArcFit fit;
  fit.cor = cor;
  if (model == ArcModel::kCircle) {
    fit.model = ArcModel::kCircle;
    fit.axes = EllipseAxes::Circle(radius);
    fit.orientation = 0.0;
    FinishFit(points, fit);
    return fit;
  }

  EllipseProblem problem{&polar, options.locked_orientation};
  const ResidualFn residual = [&](const Eigen::VectorXd& x) {
    return problem.Residual(x);
  };
  const JacobianFn jacobian = [&](const Eigen::VectorXd& x) {
    return problem.Jacobian(x);
  };
  LevenbergMarquardtOptions lm;
  lm.max_iterations = options.max_iterations;
  lm.step_tolerance = 1e-15;
  lm.gradient_tolerance = 0.0;

  const double ln_r = std::log(radius);
  std::vector<Eigen::VectorXd> starts;
  if (options.locked_orientation) {
    starts.push_back(Eigen::Vector2d(ln_r, ln_r));
    starts.push_back(Eigen::Vector2d(ln_r + std::log(1.1), ln_r + std::log(0.9)));
    starts.push_back(Eigen::Vector2d(ln_r + std::log(0.9), ln_r + std::log(1.1)));
  } else {
    starts.push_back(Eigen::Vector3d(ln_r, ln_r, 0.0));
    for (int k = 0; k < options.orientation_starts; ++k) {
      const double omega = kPi * k / options.orientation_starts;
      starts.push_back(
          Eigen::Vector3d(ln_r + std::log(1.1), ln_r + std::log(0.9), omega));
    }
  }
  std::optional<LeastSquaresResult> best;
  for (const auto& x0 : starts) {
    LeastSquaresResult r = LevenbergMarquardt(residual, jacobian, x0, lm);
    if (!r.converged) continue;
    if (!best || r.cost < best->cost) best = std::move(r);
  }
  if (!best) {
    throw NoConvergence("ellipse fit did not converge from any start");
  }
  double a = std::exp(best->x[0]);
  double b = std::exp(best->x[1]);
  double omega = problem.Omega(best->x);
  if (b > a) {
    std::swap(a, b);
    omega += kPi / 2;
  }
  fit.model = ArcModel::kEllipse;
  fit.axes = EllipseAxes(a, b);
  fit.orientation = WrapHalfTurn(omega);
  FinishFit(points, fit);
  return fit;
}

FitComparison CompareFits(const PlanarPointSet& points,
                          const Eigen::Vector2d& cor,
                          const ArcFitOptions& options) {
  // Below this both fits are exact up to rounding and their ratio is noise.
  constexpr double kMseFloor = 1e-24;
  FitComparison out;
  out.ellipse = FitArcFixedCor(points, cor, ArcModel::kEllipse, options);
  out.circle = FitArcFixedCor(points, cor, ArcModel::kCircle, options);
  out.mse_ratio = std::max(out.ellipse.mse, kMseFloor) /
                  std::max(out.circle.mse, kMseFloor);
  return out;
}

namespace {

nlohmann::ordered_json FitJson(const ArcFit& fit) {
  nlohmann::ordered_json j;
  j["model"] = fit.model == ArcModel::kCircle ? "circle" : "ellipse";
  j["cor"] = {fit.cor.x(), fit.cor.y()};
  j["major"] = fit.axes.major();
  j["minor"] = fit.axes.minor();
  j["orientation_deg"] = RadToDeg(fit.orientation);
  j["mse"] = fit.mse;
  j["per_point_error"] = fit.per_point_error;
  return j;
}

}  // namespace

std::string FitReportJson(const FitComparison& comparison,
                          const PlanarPointSet& points) {
  nlohmann::ordered_json j;
  j["points"] = points.points.size();
  j["plane"] = {
      {"origin", {points.origin.x(), points.origin.y(), points.origin.z()}},
      {"first_axis",
       {points.first_axis.x(), points.first_axis.y(), points.first_axis.z()}},
      {"second_axis",
       {points.second_axis.x(), points.second_axis.y(), points.second_axis.z()}},
      {"projection_rms", points.projection_rms}};
  j["ellipse"] = FitJson(comparison.ellipse);
  j["circle"] = FitJson(comparison.circle);
  j["mse_ratio"] = comparison.mse_ratio;
  return j.dump(2) + "\n";
}

std::string FitPlotCsv(const FitComparison& comparison,
                       const PlanarPointSet& points) {
  std::string out =
      "angle_deg,actual_radius,ellipse_radius,ellipse_error,circle_radius,"
      "circle_error\n";
  const Eigen::Vector2d cor = comparison.ellipse.cor;
  for (std::size_t i = 0; i < points.points.size(); ++i) {
    const Eigen::Vector2d d = points.points[i] - cor;
    const double angle = std::atan2(d.y(), d.x());
    out += FormatDouble(RadToDeg(angle)) + ',' + FormatDouble(d.norm()) + ',' +
           FormatDouble(comparison.ellipse.RadiusAt(angle)) + ',' +
           FormatDouble(comparison.ellipse.per_point_error[i]) + ',' +
           FormatDouble(comparison.circle.RadiusAt(angle)) + ',' +
           FormatDouble(comparison.circle.per_point_error[i]) + '\n';
  }
  return out;
}

std::vector<Eigen::Vector2d> SampleArc(const EllipseAxes& axes,
                                       double orientation,
                                       const Eigen::Vector2d& cor,
                                       double start_angle, double span, int n,
                                       double radial_noise,
                                       std::uint64_t seed) {
  if (n < 2) throw DomainError("arc needs at least 2 samples");
  ArcFit curve;
  curve.cor = cor;
  curve.axes = axes;
  curve.orientation = orientation;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double angle = start_angle + span * i / (n - 1);
    double rho = curve.RadiusAt(angle);
    if (radial_noise > 0.0) rho *= 1.0 + radial_noise * noise(rng);
    out.push_back(cor + rho * Eigen::Vector2d(std::cos(angle), std::sin(angle)));
  }
  return out;
}

std::vector<std::string> BonePointNames() {
  std::vector<std::string> names;
  for (int b = 0; b < 3; ++b) {
    names.push_back(BoneStartName(b));
    names.push_back(BoneEndName(b));
  }
  names.emplace_back(kTipName);
  return names;
}

std::array<Eigen::Vector3d, kNumBonePoints> BonePoints(
    const FingerParams& params, const JointAngles& angles) {
  const auto frames = ChainFrames(params, angles);
  std::array<Eigen::Vector3d, kNumBonePoints> out;
  for (int b = 0; b < 3; ++b) {
    const HomTransform& frame = frames[b + 1];
    out[2 * b] = frame.translation;
    out[2 * b + 1] = frame.Apply(Eigen::Vector3d(0.0, 0.0, params.bone(b)));
  }
  out[6] = frames[4].translation;
  return out;
}

CaptureSession SimulateBoneCapture(const FingerParams& params,
                                   const std::vector<JointAngles>& postures,
                                   double frame_rate, double noise_sigma,
                                   std::uint64_t seed) {
  if (postures.empty()) throw EmptyCapture("no postures to capture");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<CaptureFrame> frames;
  frames.reserve(postures.size());
  for (std::size_t f = 0; f < postures.size(); ++f) {
    CaptureFrame frame;
    frame.time = static_cast<double>(f) / frame_rate;
    for (Eigen::Vector3d p : BonePoints(params, postures[f])) {
      if (noise_sigma > 0.0) {
        for (int k = 0; k < 3; ++k) p[k] += noise_sigma * noise(rng);
      }
      frame.positions.push_back(p);
      frame.present.push_back(true);
    }
    frames.push_back(std::move(frame));
  }
  return CaptureSession(CaptureSource::kBone, frame_rate, BonePointNames(),
                        std::move(frames));
}

namespace {

constexpr int kAxisParams = 2 * kNumJoints;

struct FrameData {
  std::size_t index;
  std::array<Eigen::Vector3d, kNumBonePoints> points;
  std::array<bool, kNumBonePoints> present;
};

FingerParams ParamsFromLogAxes(const Eigen::Ref<const Eigen::VectorXd>& log_axes,
                               const std::array<double, 3>& bones,
                               double coupling, AxisOrientation orientation) {
  std::array<EllipseAxes, kNumJoints> joints{
      EllipseAxes::Circle(1.0), EllipseAxes::Circle(1.0),
      EllipseAxes::Circle(1.0), EllipseAxes::Circle(1.0)};
  for (int j = 0; j < kNumJoints; ++j) {
    joints[j] = EllipseAxes(std::exp(log_axes[2 * j]),
                            std::exp(log_axes[2 * j + 1]));
  }
  return FingerParams(joints, bones, coupling, orientation);
}

void FrameResidual(const FingerParams& params, const JointAngles& angles,
                   const FrameData& frame, Eigen::Ref<Eigen::VectorXd> out) {
  const auto model = BonePoints(params, angles);
  for (int k = 0; k < kNumBonePoints; ++k) {
    out.segment<3>(3 * k) = frame.present[k]
                                ? Eigen::Vector3d(model[k] - frame.points[k])
                                : Eigen::Vector3d::Zero();
  }
}

// Best angles for one frame with the parameters held fixed.
Eigen::VectorXd FitFrameAngles(const FingerParams& params,
                               const FrameData& frame,
                               const std::vector<JointAngles>& starts) {
  const ResidualFn residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(3 * kNumBonePoints);
    FrameResidual(params, JointAngles(x), frame, r);
    return r;
  };
  const JacobianFn jacobian = [&](const Eigen::VectorXd& x) {
    return CentralDifferenceJacobian(residual, x);
  };
  LevenbergMarquardtOptions lm;
  lm.max_iterations = 100;
  lm.step_tolerance = 1e-12;
  std::optional<LeastSquaresResult> best;
  for (const auto& start : starts) {
    LeastSquaresResult r =
        LevenbergMarquardt(residual, jacobian, Eigen::VectorXd(start), lm);
    if (!best || r.cost < best->cost) best = std::move(r);
  }
  return best->x;
}

}  // namespace

FingerFitReport FitFingerParams(const CaptureSession& capture,
                                const FingerParams& initial,
                                const FingerFitSettings& settings) {
  const std::array<double, 3> bones = BoneLengths(capture);
  const auto names = BonePointNames();
  std::array<std::size_t, kNumBonePoints> columns;
  for (int k = 0; k < kNumBonePoints; ++k) {
    if (!capture.Has(names[k])) {
      throw InsufficientData("capture lacks `" + names[k] + "`");
    }
    columns[k] = capture.IndexOf(names[k]);
  }
  std::vector<FrameData> frames;
  for (std::size_t f = 0; f < capture.num_frames(); ++f) {
    FrameData data;
    data.index = f;
    int present = 0;
    for (int k = 0; k < kNumBonePoints; ++k) {
      const auto p = capture.Position(f, columns[k]);
      data.present[k] = p.has_value();
      data.points[k] = p.value_or(Eigen::Vector3d::Zero());
      present += p.has_value();
    }
    // Fewer than three points cannot pin down four angles.
    if (present >= 3) frames.push_back(data);
  }
  if (frames.size() < kMinFitFrames) {
    throw InsufficientData("parameter fit needs at least " +
                           std::to_string(kMinFitFrames) +
                           " usable frames, got " +
                           std::to_string(frames.size()));
  }

  const AxisOrientation orientation = initial.orientation();
  const double coupling = initial.coupling_ratio();
  Eigen::VectorXd log_axes(kAxisParams);
  for (int j = 0; j < kNumJoints; ++j) {
    log_axes[2 * j] = std::log(initial.joint(j).major());
    log_axes[2 * j + 1] = std::log(initial.joint(j).minor());
  }
  const FingerParams start_params =
      ParamsFromLogAxes(log_axes, bones, coupling, orientation);

  const std::size_t num_frames = frames.size();
  const auto n_angles = static_cast<Eigen::Index>(kNumJoints * num_frames);
  Eigen::VectorXd x(kAxisParams + n_angles);
  x.head(kAxisParams) = log_axes;
  const double deg30 = kPi / 6;
  const JointAngles cold(0.0, deg30, deg30, coupling * deg30);
  JointAngles warm = cold;
  for (std::size_t f = 0; f < num_frames; ++f) {
    std::vector<JointAngles> starts{cold};
    if (f > 0) starts.push_back(warm);
    warm = FitFrameAngles(start_params, frames[f], starts);
    x.segment<kNumJoints>(kAxisParams + kNumJoints * static_cast<Eigen::Index>(f)) =
        warm;
  }

  constexpr Eigen::Index kRowsPerFrame = 3 * kNumBonePoints;
  const auto n_rows = static_cast<Eigen::Index>(kRowsPerFrame * num_frames);
  const ResidualFn residual = [&](const Eigen::VectorXd& v) {
    const FingerParams params =
        ParamsFromLogAxes(v.head(kAxisParams), bones, coupling, orientation);
    Eigen::VectorXd r(n_rows);
    for (std::size_t f = 0; f < num_frames; ++f) {
      const auto fi = static_cast<Eigen::Index>(f);
      FrameResidual(params,
                    JointAngles(v.segment<kNumJoints>(kAxisParams + kNumJoints * fi)),
                    frames[f], r.segment(kRowsPerFrame * fi, kRowsPerFrame));
    }
    return r;
  };
  const JacobianFn jacobian = [&](const Eigen::VectorXd& v) {
    constexpr double kStep = 1e-6;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_rows, v.size());
    for (Eigen::Index j = 0; j < kAxisParams; ++j) {
      jac.col(j) = DifferenceColumn(residual, v, j, kStep);
    }
    // Each frame's angles only touch that frame's rows.
    const FingerParams params =
        ParamsFromLogAxes(v.head(kAxisParams), bones, coupling, orientation);
    for (std::size_t f = 0; f < num_frames; ++f) {
      const auto fi = static_cast<Eigen::Index>(f);
      const Eigen::Index col0 = kAxisParams + kNumJoints * fi;
      const ResidualFn frame_residual = [&](const Eigen::VectorXd& a) {
        Eigen::VectorXd r(kRowsPerFrame);
        FrameResidual(params, JointAngles(a), frames[f], r);
        return r;
      };
      const Eigen::VectorXd angles = v.segment<kNumJoints>(col0);
      jac.block(kRowsPerFrame * fi, col0, kRowsPerFrame, kNumJoints) =
          CentralDifferenceJacobian(frame_residual, angles, kStep);
    }
    return jac;
  };

  LevenbergMarquardtOptions lm;
  lm.max_iterations = settings.max_iterations;
  lm.step_tolerance = settings.step_tolerance;
  lm.gradient_tolerance = 0.0;
  lm.scale_by_diagonal = true;
  const LeastSquaresResult result = LevenbergMarquardt(residual, jacobian, x, lm);
  if (!result.converged) {
    throw NoConvergence("parameter fit did not converge in " +
                        std::to_string(settings.max_iterations) + " iterations");
  }

  FingerFitReport report{
      ParamsFromLogAxes(result.x.head(kAxisParams), bones, coupling, orientation),
      {}, {}, 0.0, result.iterations};
  double num = 0.0;
  double den = 0.0;
  std::size_t observed = 0;
  for (std::size_t f = 0; f < num_frames; ++f) {
    const JointAngles angles = result.x.segment<kNumJoints>(
        kAxisParams + kNumJoints * static_cast<Eigen::Index>(f));
    report.frame_angles.push_back(angles);
    report.frames_used.push_back(frames[f].index);
    num += angles[kPip] * angles[kDip];
    den += angles[kPip] * angles[kPip];
    for (bool p : frames[f].present) observed += p;
  }
  report.rms_residual = std::sqrt(result.cost / static_cast<double>(observed));
  if (settings.estimate_coupling && den > 1e-12 && num > 0.0) {
    auto values = report.params.ToVector();
    values[kNumParams - 1] = num / den;
    report.params = FingerParams::FromVector(values, orientation);
  }
  return report;
}

std::vector<ReplayPoint> ReplayCapture(const CaptureSession& capture,
                                       const FingerParams& params,
                                       const SolverSettings& settings,
                                       std::string_view tip_name) {
  const std::size_t column = capture.IndexOf(tip_name);
  std::vector<double> times;
  std::vector<Eigen::Vector3d> path;
  for (std::size_t f = 0; f < capture.num_frames(); ++f) {
    if (const auto p = capture.Position(f, column)) {
      times.push_back(capture.frames()[f].time);
      path.push_back(*p);
    }
  }
  if (path.empty()) throw InsufficientData("capture has no `" +
                                           std::string(tip_name) + "` samples");
  const auto solutions = IkAnalytic(params, path, settings);
  std::vector<ReplayPoint> out;
  out.reserve(path.size());
  JointAngles previous = solutions.front().angles;
  for (std::size_t i = 0; i < path.size(); ++i) {
    ReplayPoint point;
    point.time = times[i];
    point.real = path[i];
    JointAngles angles = solutions[i].angles;
    point.converged = solutions[i].converged;
    if (!point.converged) {
      try {
        const IkSolution sol = IkOptimize(params, path[i], previous, settings);
        angles = sol.angles;
        point.converged = sol.converged;
      } catch (const Error&) {
        angles = previous;
      }
    }
    previous = angles;
    point.simulated = ForwardKinematics(params, angles);
    point.error = (point.simulated - point.real).norm();
    out.push_back(point);
  }
  return out;
}

double ReplayRms(const std::vector<ReplayPoint>& replay) {
  if (replay.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : replay) sum += p.error * p.error;
  return std::sqrt(sum / static_cast<double>(replay.size()));
}

}  // namespace fingerkin
