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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fingerkin/errors.h"
#include "json.hpp"
#include "oracles.h"

namespace fingerkin {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

TEST(ProjectToPlaneTest, CoplanarPointsHaveZeroResidual) {
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 20; ++i) {
    pts.emplace_back(std::cos(0.3 * i) * (5 + i), std::sin(0.3 * i) * 3, 5.0);
  }
  const PlanarPointSet set = ProjectToPlane(pts);
  EXPECT_NEAR(set.projection_rms, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(set.Normal().z()), 1.0, 1e-12);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_LT((set.Lift(set.points[i]) - pts[i]).norm(), 1e-12);
  }
}

TEST(ProjectToPlaneTest, BasisIsOrthonormalAndRightHanded) {
  std::mt19937_64 rng(2);
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 50; ++i) {
    pts.emplace_back(testing::Uniform(rng, -5, 5), testing::Uniform(rng, -5, 5),
                     testing::Uniform(rng, -1, 1));
  }
  const PlanarPointSet set = ProjectToPlane(pts);
  EXPECT_NEAR(set.first_axis.norm(), 1.0, 1e-10);
  EXPECT_NEAR(set.second_axis.norm(), 1.0, 1e-10);
  EXPECT_NEAR(set.first_axis.dot(set.second_axis), 0.0, 1e-10);
  EXPECT_NEAR(set.Normal().norm(), 1.0, 1e-10);
  // Same input, same basis.
  const PlanarPointSet again = ProjectToPlane(pts);
  EXPECT_EQ(again.first_axis, set.first_axis);
  EXPECT_EQ(again.points, set.points);
}

TEST(ProjectToPlaneTest, RecoversTiltedPlaneUnderNoise) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 1.0);
  const Eigen::Vector3d normal = Eigen::Vector3d(0.3, -0.5, 0.8).normalized();
  const Eigen::Vector3d u = normal.unitOrthogonal();
  const Eigen::Vector3d v = normal.cross(u);
  const double spread = 40.0;
  const double sigma = 0.01 * spread;
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 200; ++i) {
    pts.push_back(Eigen::Vector3d(7, 8, 9) +
                  testing::Uniform(rng, -spread / 2, spread / 2) * u +
                  testing::Uniform(rng, -spread / 2, spread / 2) * v +
                  sigma * noise(rng) * normal);
  }
  const PlanarPointSet set = ProjectToPlane(pts);
  const double angle = std::acos(std::min(1.0, std::abs(set.Normal().dot(normal))));
  EXPECT_LT(angle, 1.0 * kDeg);
  EXPECT_NEAR(set.projection_rms, sigma, 0.3 * sigma);
}

TEST(ProjectToPlaneTest, DegenerateInputs) {
  EXPECT_THROW(ProjectToPlane({{0, 0, 0}, {1, 1, 1}}), DegenerateGeometry);
  EXPECT_THROW(ProjectToPlane({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {-3, -3, -3}}),
               DegenerateGeometry);
  EXPECT_THROW(ProjectToPlane({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}), DegenerateGeometry);
}

TEST(RadialErrorTest, Examples) {
  ArcFit circle;
  circle.cor = Eigen::Vector2d(1, -2);
  circle.axes = EllipseAxes::Circle(4.0);
  EXPECT_NEAR(RadialError(circle.cor + Eigen::Vector2d(0, 4), circle), 0.0, 1e-15);
  EXPECT_NEAR(RadialError(circle.cor + Eigen::Vector2d(8, 0), circle), 1.0, 1e-15);
  const double delta = 0.3;
  const Eigen::Vector2d ray = Eigen::Vector2d(1, 1).normalized();
  EXPECT_NEAR(RadialError(circle.cor + (4 + delta) * ray, circle), delta / 4, 1e-15);
  EXPECT_THROW(RadialError(circle.cor, circle), DegenerateGeometry);

  ArcFit ellipse;
  ellipse.axes = EllipseAxes(3.0, 1.0);
  ellipse.orientation = 0.4;
  for (double a = -3.0; a < 3.0; a += 0.3) {
    EXPECT_NEAR(RadialError(ellipse.PointAt(a), ellipse), 0.0, 1e-14);
    const Eigen::Vector2d twice = 2.0 * ellipse.PointAt(a);
    EXPECT_NEAR(RadialError(twice, ellipse), 1.0, 1e-14);
  }
}

TEST(RadialErrorProperty, ScaleInvariant) {
  std::mt19937_64 rng(6);
  ArcFit fit;
  fit.cor = Eigen::Vector2d(2, 3);
  fit.axes = EllipseAxes(5.0, 3.0);
  fit.orientation = 0.7;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d p(testing::Uniform(rng, -10, 10), testing::Uniform(rng, -10, 10));
    const double k = testing::Uniform(rng, 0.01, 100);
    ArcFit scaled = fit;
    scaled.cor = k * fit.cor;
    scaled.axes = EllipseAxes(k * 5.0, k * 3.0);
    EXPECT_NEAR(RadialError(k * p, scaled), RadialError(p, fit),
                1e-12 * std::max(1.0, RadialError(p, fit)));
  }
}

TEST(FitArcTest, NoiselessCircleIsExact) {
  const Eigen::Vector2d cor(3, -1);
  const auto pts = SampleArc(EllipseAxes::Circle(12.0), 0.0, cor, 0.3, 70 * kDeg,
                             40, 0.0, 1);
  const ArcFit c = FitArcFixedCor(PlanarFromPoints(pts), cor, ArcModel::kCircle);
  EXPECT_NEAR(c.axes.major(), 12.0, 1e-9);
  EXPECT_EQ(c.axes.major(), c.axes.minor());
  EXPECT_LT(c.mse, 1e-18);
  const ArcFit e = FitArcFixedCor(PlanarFromPoints(pts), cor, ArcModel::kEllipse);
  EXPECT_LT(e.mse, 1e-18);
}

TEST(FitArcTest, NoiselessEllipseRecoversAxesAndOrientation) {
  const Eigen::Vector2d cor(0, 0);
  const auto pts =
      SampleArc(EllipseAxes(2.0, 1.0), 20 * kDeg, cor, -1.0, 2.5, 40, 0.0, 1);
  const ArcFit e = FitArcFixedCor(PlanarFromPoints(pts), cor, ArcModel::kEllipse);
  EXPECT_NEAR(e.axes.major(), 2.0, 2e-6);
  EXPECT_NEAR(e.axes.minor(), 1.0, 1e-6);
  EXPECT_NEAR(e.orientation, 20 * kDeg, 1e-6 * 20 * kDeg);
  EXPECT_LT(e.mse, 1e-20);
}

TEST(FitArcTest, OrientationLock) {
  const Eigen::Vector2d cor(1, 1);
  const auto pts =
      SampleArc(EllipseAxes(13.0, 10.0), 0.0, cor, 0.2, 80 * kDeg, 30, 0.0, 1);
  ArcFitOptions locked;
  locked.locked_orientation = 0.0;
  const ArcFit e = FitArcFixedCor(PlanarFromPoints(pts), cor, ArcModel::kEllipse, locked);
  EXPECT_EQ(e.orientation, 0.0);
  EXPECT_NEAR(e.axes.major(), 13.0, 1e-8);
  EXPECT_NEAR(e.axes.minor(), 10.0, 1e-8);
  locked.locked_orientation = 0.5;
  const ArcFit off = FitArcFixedCor(PlanarFromPoints(pts), cor, ArcModel::kEllipse, locked);
  EXPECT_GT(off.mse, e.mse);
}

TEST(FitArcTest, MseIsMeanSquaredPointError) {
  const Eigen::Vector2d cor(0, 0);
  const auto pts = SampleArc(EllipseAxes(13.0, 10.0), 0.2, cor, 0.0, 1.2, 25, 0.02, 9);
  for (ArcModel m : {ArcModel::kCircle, ArcModel::kEllipse}) {
    const ArcFit f = FitArcFixedCor(PlanarFromPoints(pts), cor, m);
    ASSERT_EQ(f.per_point_error.size(), pts.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_DOUBLE_EQ(f.per_point_error[i], RadialError(pts[i], f));
      sum += f.per_point_error[i] * f.per_point_error[i];
    }
    EXPECT_DOUBLE_EQ(f.mse, sum / static_cast<double>(pts.size()));
  }
}

TEST(FitArcTest, CircleRadiusMinimisesSummedRadialError) {
  const Eigen::Vector2d cor(0, 0);
  const auto pts = SampleArc(EllipseAxes(13.0, 10.0), 0.2, cor, 0.0, 1.2, 25, 0.02, 9);
  const ArcFit best = FitArcFixedCor(PlanarFromPoints(pts), cor, ArcModel::kCircle);
  for (double factor : {0.999, 1.001}) {
    ArcFit other = best;
    other.axes = EllipseAxes::Circle(best.axes.major() * factor);
    double mse = 0.0;
    for (const auto& p : pts) mse += std::pow(RadialError(p, other), 2);
    EXPECT_GT(mse / static_cast<double>(pts.size()), best.mse);
  }
}

TEST(FitArcTest, DegenerateInputs) {
  const PlanarPointSet two = PlanarFromPoints({{1, 0}, {0, 1}});
  EXPECT_THROW(FitArcFixedCor(two, {0, 0}, ArcModel::kCircle), DegenerateGeometry);
  const PlanarPointSet four = PlanarFromPoints({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  EXPECT_NO_THROW(FitArcFixedCor(four, {0, 0}, ArcModel::kCircle));
  EXPECT_THROW(FitArcFixedCor(four, {0, 0}, ArcModel::kEllipse), DegenerateGeometry);
  const PlanarPointSet with_cor = PlanarFromPoints({{1, 0}, {0, 1}, {0, 0}});
  EXPECT_THROW(FitArcFixedCor(with_cor, {0, 0}, ArcModel::kCircle), DegenerateGeometry);
}

TEST(FitArcProperty, EllipseNeverWorseThanCircle) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 40; ++i) {
    const double major = testing::Uniform(rng, 5, 20);
    const double ratio = testing::Uniform(rng, 1.0, 1.6);
    const double noise = i % 2 ? 0.0 : 0.01;
    const Eigen::Vector2d cor(testing::Uniform(rng, -5, 5), testing::Uniform(rng, -5, 5));
    const auto pts = SampleArc(EllipseAxes(major, major / ratio),
                               testing::Uniform(rng, -1.5, 1.5), cor,
                               testing::Uniform(rng, -3, 3),
                               testing::Uniform(rng, 0.5, 3.0), 30, noise, i);
    const FitComparison cmp = CompareFits(PlanarFromPoints(pts), cor);
    EXPECT_LE(cmp.ellipse.mse, cmp.circle.mse + 1e-9);
  }
}

TEST(CompareFitsTest, CircularDataGivesUnitRatio) {
  const Eigen::Vector2d cor(0, 0);
  const auto pts = SampleArc(EllipseAxes::Circle(9.0), 0.0, cor, 0.1, 1.2, 30, 0.0, 1);
  const FitComparison cmp = CompareFits(PlanarFromPoints(pts), cor);
  EXPECT_NEAR(cmp.mse_ratio, 1.0, 1e-9);
  EXPECT_LT(cmp.ellipse.mse, 1e-18);
  EXPECT_LT(cmp.circle.mse, 1e-18);
}

TEST(CompareFitsTest, NoisyEllipticArcsFavourEllipse) {
  int wins = 0;
  for (int seed = 0; seed < 30; ++seed) {
    const Eigen::Vector2d cor(0, 0);
    const auto pts =
        SampleArc(EllipseAxes(13.0, 10.0), 0.25, cor, 0.4, 70 * kDeg, 40, 0.01, seed);
    const FitComparison cmp = CompareFits(PlanarFromPoints(pts), cor);
    EXPECT_EQ(cmp.mse_ratio, cmp.ellipse.mse / cmp.circle.mse);
    wins += cmp.mse_ratio < 1.0;
  }
  EXPECT_GE(wins, 28);
}

TEST(FitReportTest, JsonAndPlotCsv) {
  const Eigen::Vector2d cor(0, 0);
  const auto pts = SampleArc(EllipseAxes(13.0, 10.0), 0.25, cor, 0.4, 1.0, 12, 0.01, 3);
  const PlanarPointSet set = PlanarFromPoints(pts);
  const FitComparison cmp = CompareFits(set, cor);
  const auto j = nlohmann::json::parse(FitReportJson(cmp, set));
  EXPECT_EQ(j["ellipse"]["model"], "ellipse");
  EXPECT_EQ(j["circle"]["model"], "circle");
  EXPECT_EQ(j["ellipse"]["per_point_error"].size(), 12u);
  EXPECT_EQ(j["mse_ratio"].get<double>(), cmp.mse_ratio);
  EXPECT_EQ(j["circle"]["major"].get<double>(), j["circle"]["minor"].get<double>());
  const std::string csv = FitPlotCsv(cmp, set);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
  EXPECT_EQ(csv.rfind("angle_deg,actual_radius,ellipse_radius", 0), 0u);
}

TEST(BonePointsTest, GeometryOfEndPoints) {
  const FingerParams p = FingerParams::Reference();
  const JointAngles a(0.2, 0.6, 0.5, 0.3);
  const auto pts = BonePoints(p, a);
  const auto frames = ChainFrames(p, a);
  EXPECT_EQ(pts[6], ForwardKinematics(p, a));
  for (int b = 0; b < 3; ++b) {
    EXPECT_NEAR((pts[2 * b + 1] - pts[2 * b]).norm(), p.bone(b), 1e-12);
    EXPECT_EQ(pts[2 * b], frames[b + 1].translation);
  }
  // Past the end of a bone, the next frame origin sits on the following
  // joint's ellipse, expressed in the bone's frame.
  for (int b = 0; b < 3; ++b) {
    const Eigen::Vector3d next = b < 2 ? pts[2 * b + 2] : pts[6];
    const Eigen::Vector3d local =
        frames[b + 1].rotation.transpose() * (next - pts[2 * b + 1]);
    const Eigen::Vector3d expected =
        EllipseOffset(p.joint(b + 1), a[b + 1], JointPlane::kFlexExt);
    EXPECT_LT((local - expected).norm(), 1e-12);
  }
  EXPECT_EQ(BonePointNames().size(), 7u);
  EXPECT_EQ(BonePointNames()[6], "tip");
}

std::vector<JointAngles> RandomPostures(int n, double coupling, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<JointAngles> out;
  for (int i = 0; i < n; ++i) {
    const double t3 = testing::Uniform(rng, 5 * kDeg, 85 * kDeg);
    out.emplace_back(testing::Uniform(rng, -40 * kDeg, 40 * kDeg),
                     testing::Uniform(rng, 5 * kDeg, 85 * kDeg), t3, coupling * t3);
  }
  return out;
}

FingerParams Truth() {
  return FingerParams::FromVector({7, 5.5, 13, 9.5, 10, 7, 8, 5.5, 42, 26, 19, 0.7});
}

TEST(FitFingerParamsTest, NoiselessCaptureRecoversParameters) {
  const FingerParams truth = Truth();
  const CaptureSession cap =
      SimulateBoneCapture(truth, RandomPostures(30, 0.7, 1), 100, 0.0, 1);
  const FingerFitReport r = FitFingerParams(cap, FingerParams::Reference());
  const auto got = r.params.ToVector();
  const auto want = truth.ToVector();
  for (int i = 0; i < kNumParams; ++i) {
    EXPECT_NEAR(got[i] / want[i], 1.0, 1e-4) << i;
  }
  EXPECT_LT(r.rms_residual, 1e-6);
  EXPECT_EQ(r.frame_angles.size(), 30u);
}

TEST(FitFingerParamsTest, SkipsMissingSamples) {
  const FingerParams truth = Truth();
  const CaptureSession full =
      SimulateBoneCapture(truth, RandomPostures(20, 0.7, 2), 100, 0.0, 1);
  std::vector<CaptureFrame> frames = full.frames();
  frames[3].present[0] = false;
  frames[5].present.assign(7, false);
  frames[5].present[6] = true;
  const CaptureSession cap(CaptureSource::kBone, 100, full.names(), frames);
  const FingerFitReport r = FitFingerParams(cap, FingerParams::Reference());
  EXPECT_EQ(r.frames_used.size(), 19u);
  const auto got = r.params.ToVector();
  const auto want = truth.ToVector();
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(got[i] / want[i], 1.0, 1e-4) << i;
}

TEST(FitFingerParamsTest, NoisyCaptureStillReplaysClosely) {
  const FingerParams truth = Truth();
  const CaptureSession cap =
      SimulateBoneCapture(truth, RandomPostures(40, 0.7, 3), 100, 0.5, 7);
  const FingerFitReport r = FitFingerParams(cap, FingerParams::Reference());
  const auto replay = ReplayCapture(cap, r.params, SolverSettings{});
  EXPECT_LT(ReplayRms(replay), 1.5);
  // Isotropic 3-d noise of 0.5 mm per axis: point distances near 0.5 sqrt(3).
  EXPECT_NEAR(r.rms_residual, 0.5 * std::sqrt(3.0), 0.2);
}

TEST(FitFingerParamsTest, TooFewFrames) {
  const CaptureSession cap =
      SimulateBoneCapture(Truth(), RandomPostures(2, 0.7, 4), 100, 0.0, 1);
  EXPECT_THROW(FitFingerParams(cap, FingerParams::Reference()), InsufficientData);
}

TEST(ReplayCaptureTest, NoiselessReplayIsExact) {
  const FingerParams p = FingerParams::Reference();
  const CaptureSession cap =
      SimulateBoneCapture(p, RandomPostures(50, p.coupling_ratio(), 5), 100, 0.0, 1);
  const auto replay = ReplayCapture(cap, p, SolverSettings{});
  ASSERT_EQ(replay.size(), 50u);
  for (const auto& pt : replay) EXPECT_TRUE(pt.converged);
  EXPECT_LT(ReplayRms(replay), 1e-6);
  EXPECT_THROW(ReplayCapture(cap, p, SolverSettings{}, "nail"), UnknownMarker);
}

}  // namespace
}  // namespace fingerkin
