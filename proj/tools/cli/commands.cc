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

#include "commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fingerkin/capture_io.h"
#include "fingerkin/fitting.h"
#include "fingerkin/model_io.h"
#include "fingerkin/text_io.h"
#include "fingerkin/trajectories.h"
#include "run_manifest.h"
#include "svg_plot.h"

namespace fingerkin::cli {
namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

// Collects outputs of one run and finishes with the manifest.
class RunRecorder {
 public:
  RunRecorder(std::string command, const CommonOptions& options)
      : out_dir_(options.out_dir), start_(Clock::now()) {
    manifest_.command = std::move(command);
    if (out_dir_.empty()) throw UsageError("output directory is empty");
    std::error_code ec;
    std::filesystem::create_directories(out_dir_, ec);
    if (ec) {
      throw IoError("cannot create `" + out_dir_ + "`: " + ec.message());
    }
  }

  void AddInput(const std::string& path) {
    manifest_.inputs.push_back(DigestFile(path));
  }
  void SetSeed(std::uint64_t seed) { manifest_.seed = seed; }
  Json& settings() { return manifest_.settings; }

  void Write(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::path(out_dir_) / name).string();
    WriteFileAtomic(path, content);
    manifest_.outputs.push_back(DigestFile(path));
    outcome_.outputs.push_back(path);
  }

  CommandOutcome Finish(std::string summary, int exit_code = 0) {
    manifest_.duration_seconds =
        std::chrono::duration<double>(Clock::now() - start_).count();
    const std::string path =
        (std::filesystem::path(out_dir_) / kManifestName).string();
    WriteFileAtomic(path, manifest_.ToJson().dump(2) + "\n");
    outcome_.outputs.push_back(path);
    outcome_.summary = std::move(summary);
    outcome_.exit_code = exit_code;
    return outcome_;
  }

 private:
  std::string out_dir_;
  Clock::time_point start_;
  RunManifest manifest_;
  CommandOutcome outcome_;
};

FingerParams LoadParamsOption(const CommonOptions& options,
                              RunRecorder& recorder) {
  if (options.params_path.empty()) return FingerParams::Reference();
  recorder.AddInput(options.params_path);
  return LoadParams(options.params_path);
}

std::string Csv(std::initializer_list<double> values) {
  std::string line;
  for (double v : values) {
    if (!line.empty()) line += ',';
    line += FormatDouble(v);
  }
  return line;
}

Json SettingsJson(const SolverSettings& s) {
  return {{"max_iterations", s.max_iterations},
          {"tolerance", s.tolerance},
          {"damping", s.damping},
          {"constraint_weight", s.constraint_weight},
          {"jacobian", s.jacobian == JacobianMode::kAnalytic ? "analytic"
                                                             : "central_difference"},
          {"fd_step", s.fd_step}};
}

Json LimitsJson(const AngleLimits& limits) {
  Json j = Json::array();
  for (const auto& l : limits) j.push_back({RadToDeg(l.lo), RadToDeg(l.hi)});
  return j;
}

Trajectory ResolveTrajectory(const std::string& name, int points,
                             const FingerParams& params,
                             RunRecorder& recorder) {
  if (points < 0) throw UsageError("--points must be positive");
  if (name == "heart") {
    return points ? DefaultHeart(params, points) : DefaultHeart(params);
  }
  if (name == "circle") {
    return points ? DefaultCircle(params, points) : DefaultCircle(params);
  }
  if (name == "square") {
    return points ? DefaultSquare(params, points) : DefaultSquare(params);
  }
  if (points) throw UsageError("--points only applies to built-in shapes");
  recorder.AddInput(name);
  return LoadTrajectory(name);
}

}  // namespace

AngleLimits ParseLimitsDeg(std::string_view text) {
  const auto parts = SplitFields(text, ',');
  if (parts.size() != kNumJoints) {
    throw UsageError("--limits needs " + std::to_string(kNumJoints) +
                     " lo:hi ranges, got " + std::to_string(parts.size()));
  }
  AngleLimits limits;
  for (int i = 0; i < kNumJoints; ++i) {
    const auto bounds = SplitFields(parts[i], ':');
    double lo;
    double hi;
    if (bounds.size() != 2 || !ParseDouble(bounds[0], lo) ||
        !ParseDouble(bounds[1], hi)) {
      throw UsageError("bad range `" + std::string(parts[i]) +
                       "` in --limits (expected lo:hi in degrees)");
    }
    limits[i] = {DegToRad(lo), DegToRad(hi)};
  }
  CheckLimits(limits);
  return limits;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kLimits:
      return kExitUsage;
    case ErrorKind::kParse:
    case ErrorKind::kUnit:
    case ErrorKind::kEmptyCapture:
    case ErrorKind::kFingerprintMismatch:
      return 3;
    case ErrorKind::kDomain:
      return 4;
    case ErrorKind::kNoConvergence:
    case ErrorKind::kSingularJacobian:
      return 5;
    case ErrorKind::kDegenerateGeometry:
    case ErrorKind::kInsufficientData:
    case ErrorKind::kUnknownMarker:
      return 6;
    case ErrorKind::kIo:
      return 7;
  }
  return 1;
}

CommandOutcome CmdWorkspace(const WorkspaceOptions& options) {
  if (options.n == 0) throw UsageError("--n must be at least 1");
  if (options.threads < 1) throw UsageError("--threads must be at least 1");
  CheckLimits(options.limits);
  RunRecorder rec("workspace", options);
  const FingerParams params = LoadParamsOption(options, rec);
  rec.SetSeed(options.seed);
  rec.settings() = {{"n", options.n}, {"limits_deg", LimitsJson(options.limits)}};

  const PostureCloud cloud = SampleWorkspace(params, options.n, options.seed,
                                             options.limits, options.threads);
  rec.Write("cloud.csv", FormatCloud(cloud));
  for (int j = 0; j < kNumJoints; ++j) {
    std::string csv = "theta_deg,x,y,z\n";
    for (const auto& r : cloud.records()) {
      csv += Csv({RadToDeg(r.angles[j]), r.position.x(), r.position.y(),
                  r.position.z()}) +
             '\n';
    }
    rec.Write("workspace_joint" + std::to_string(j + 1) + ".csv", csv);
  }
  if (options.svg) {
    PlotSeries xz{"x-z", {}, false};
    PlotSeries yz{"y-z", {}, false};
    for (const auto& r : cloud.records()) {
      xz.points.emplace_back(r.position.x(), r.position.z());
      yz.points.emplace_back(r.position.y(), r.position.z());
    }
    rec.Write("workspace.svg",
              SvgPlot("Fingertip workspace", "x or y (mm)", "z (mm)", {xz, yz}));
  }
  return rec.Finish("sampled " + std::to_string(cloud.size()) + " postures");
}

CommandOutcome CmdFk(const FkOptions& options) {
  RunRecorder rec("fk", options);
  const FingerParams params = LoadParamsOption(options, rec);
  JointAngles angles;
  for (int i = 0; i < kNumJoints; ++i) angles[i] = DegToRad(options.angles_deg[i]);
  rec.settings() = {{"angles_deg", options.angles_deg}};
  const Eigen::Vector3d tip = ForwardKinematics(params, angles);
  const std::string line = Csv({tip.x(), tip.y(), tip.z()});
  rec.Write("fk.csv", "x,y,z\n" + line + "\n");
  return rec.Finish(line);
}

CommandOutcome CmdIk(const IkOptions& options) {
  const std::string& method = options.method;
  if (method != "analytic" && method != "pcl" && method != "optimize") {
    throw UsageError("--method must be analytic, pcl or optimize");
  }
  if (method == "pcl" && options.cloud_path.empty()) {
    throw UsageError("--method pcl needs --cloud");
  }
  options.settings.Validate();
  RunRecorder rec("ik", options);
  const FingerParams params = LoadParamsOption(options, rec);
  const Trajectory traj =
      ResolveTrajectory(options.trajectory, options.points, params, rec);
  rec.settings() = {{"method", method},
                    {"trajectory", options.trajectory},
                    {"solver", SettingsJson(options.settings)}};

  const std::size_t n = traj.points.size();
  std::vector<JointAngles> angles(n, JointAngles::Zero());
  std::vector<bool> ok(n, true);
  if (method == "analytic") {
    const auto sols = IkAnalytic(params, traj.points, options.settings);
    for (std::size_t i = 0; i < n; ++i) {
      angles[i] = sols[i].angles;
      ok[i] = sols[i].failure.empty() && sols[i].converged;
    }
  } else if (method == "pcl") {
    rec.AddInput(options.cloud_path);
    const PostureCloud cloud = LoadCloud(options.cloud_path);
    cloud.Verify(params);
    rec.SetSeed(cloud.seed());
    angles = IkPcl(cloud, traj.points);
  } else {
    JointAngles warm = JointAngles::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      try {
        const IkSolution sol =
            IkOptimize(params, traj.points[i], warm, options.settings);
        angles[i] = sol.angles;
        ok[i] = sol.converged;
      } catch (const NoConvergence&) {
        angles[i] = warm;
        ok[i] = false;
      }
      if (ok[i]) warm = angles[i];
    }
  }

  std::string angle_csv = "index,theta1_deg,theta2_deg,theta3_deg,theta4_deg\n";
  std::string error_csv =
      "index,target_x,target_y,target_z,x,y,z,error_mm,converged\n";
  double sum = 0.0;
  double worst = 0.0;
  std::size_t failures = 0;
  PlotSeries errors{"error (mm)", {}, true};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = angles[i];
    const auto idx = static_cast<double>(i);
    angle_csv += std::to_string(i) + ',' +
                 Csv({RadToDeg(a[0]), RadToDeg(a[1]), RadToDeg(a[2]),
                      RadToDeg(a[3])}) +
                 '\n';
    const Eigen::Vector3d& t = traj.points[i];
    const Eigen::Vector3d p = ForwardKinematics(params, a);
    const double e = (p - t).norm();
    error_csv += std::to_string(i) + ',' +
                 Csv({t.x(), t.y(), t.z(), p.x(), p.y(), p.z(), e}) + ',' +
                 (ok[i] ? "1" : "0") + '\n';
    sum += e;
    worst = std::max(worst, e);
    failures += !ok[i];
    errors.points.emplace_back(idx, e);
  }
  rec.Write("ik_angles.csv", angle_csv);
  rec.Write("ik_error.csv", error_csv);
  if (options.svg) {
    rec.Write("ik_error.svg", SvgPlot("IK error (" + method + ")", "point",
                                      "error (mm)", {errors}));
  }
  std::ostringstream summary;
  summary << "points " << n << " failed " << failures << " mean_error_mm "
          << FormatDouble(sum / static_cast<double>(n)) << " max_error_mm "
          << FormatDouble(worst);
  return rec.Finish(summary.str(),
                    failures ? ExitCodeFor(ErrorKind::kNoConvergence) : 0);
}

CommandOutcome CmdFit(const FitOptions& options) {
  if (options.cor.size() != 2 && options.cor.size() != 3) {
    throw UsageError("--cor needs 2 (in-plane) or 3 (capture frame) values");
  }
  if (!options.anchors.empty() && options.anchors.size() != 3) {
    throw UsageError("--anchors needs exactly 3 marker names");
  }
  RunRecorder rec("fit", options);
  rec.AddInput(options.capture_path);
  const CaptureSession capture = LoadCapture(options.capture_path);
  rec.settings() = {{"cor", options.cor},
                    {"moving", options.moving},
                    {"reference", options.reference},
                    {"anchors", options.anchors}};
  if (options.lock_orientation_deg) {
    rec.settings()["lock_orientation_deg"] = *options.lock_orientation_deg;
  }

  std::vector<Eigen::Vector3d> path;
  if (!options.anchors.empty()) {
    path = RelativeMotion(capture,
                          {options.anchors[0], options.anchors[1],
                           options.anchors[2]},
                          options.moving);
  } else if (!options.reference.empty()) {
    path = RelativeMotion(capture, options.reference, options.moving);
  } else {
    const std::size_t col = capture.IndexOf(options.moving);
    for (std::size_t f = 0; f < capture.num_frames(); ++f) {
      if (const auto p = capture.Position(f, col)) path.push_back(*p);
    }
  }
  const PlanarPointSet plane = ProjectToPlane(path);
  const Eigen::Vector2d cor =
      options.cor.size() == 2
          ? Eigen::Vector2d(options.cor[0], options.cor[1])
          : plane.Project({options.cor[0], options.cor[1], options.cor[2]});
  ArcFitOptions fit_options;
  if (options.lock_orientation_deg) {
    fit_options.locked_orientation = DegToRad(*options.lock_orientation_deg);
  }
  const FitComparison cmp = CompareFits(plane, cor, fit_options);
  rec.Write("fit_report.json", FitReportJson(cmp, plane));
  rec.Write("fit_plot.csv", FitPlotCsv(cmp, plane));
  if (options.svg) {
    PlotSeries actual{"captured", {}, false};
    PlotSeries ellipse{"ellipse", {}, true};
    PlotSeries circle{"circle", {}, true};
    std::vector<double> angles;
    for (const auto& p : plane.points) {
      const Eigen::Vector2d d = p - cor;
      const double a = std::atan2(d.y(), d.x());
      actual.points.emplace_back(RadToDeg(a), d.norm());
      angles.push_back(a);
    }
    std::sort(angles.begin(), angles.end());
    for (double a : angles) {
      ellipse.points.emplace_back(RadToDeg(a), cmp.ellipse.RadiusAt(a));
      circle.points.emplace_back(RadToDeg(a), cmp.circle.RadiusAt(a));
    }
    rec.Write("fit_plot.svg", SvgPlot("Arc fit about the CoR", "angle (deg)",
                                      "radius (mm)", {actual, ellipse, circle}));
  }
  std::ostringstream summary;
  summary << "ellipse_mse " << FormatDouble(cmp.ellipse.mse) << " circle_mse "
          << FormatDouble(cmp.circle.mse) << " mse_ratio "
          << FormatDouble(cmp.mse_ratio);
  return rec.Finish(summary.str());
}

CommandOutcome CmdReplay(const ReplayOptions& options) {
  options.settings.Validate();
  RunRecorder rec("replay", options);
  rec.AddInput(options.capture_path);
  const CaptureSession capture = LoadCapture(options.capture_path);
  FingerParams params = LoadParamsOption(options, rec);
  rec.settings() = {{"fit_params", options.fit_params},
                    {"moving", options.moving},
                    {"solver", SettingsJson(options.settings)}};
  std::string fit_note;
  if (options.fit_params) {
    const FingerFitReport fit = FitFingerParams(capture, params);
    params = fit.params;
    rec.Write("fitted_params.txt", FormatParams(params));
    fit_note = " fit_rms_mm " + FormatDouble(fit.rms_residual);
  }
  const auto replay =
      ReplayCapture(capture, params, options.settings, options.moving);
  std::string csv =
      "frame,t,real_x,real_y,real_z,sim_x,sim_y,sim_z,error_mm\n";
  double worst = 0.0;
  std::size_t failures = 0;
  PlotSeries real{"captured", {}, true};
  PlotSeries sim{"simulated", {}, true};
  for (std::size_t i = 0; i < replay.size(); ++i) {
    const auto& p = replay[i];
    csv += std::to_string(i) + ',' +
           Csv({p.time, p.real.x(), p.real.y(), p.real.z(), p.simulated.x(),
                p.simulated.y(), p.simulated.z(), p.error}) +
           '\n';
    worst = std::max(worst, p.error);
    failures += !p.converged;
    real.points.emplace_back(p.real.y(), p.real.z());
    sim.points.emplace_back(p.simulated.y(), p.simulated.z());
  }
  rec.Write("replay_error.csv", csv);
  if (options.svg) {
    rec.Write("replay.svg", SvgPlot("Replay of the captured fingertip",
                                    "y (mm)", "z (mm)", {real, sim}));
  }
  std::ostringstream summary;
  summary << "frames " << replay.size() << " unreached " << failures
          << " rms_error_mm " << FormatDouble(ReplayRms(replay))
          << " max_error_mm " << FormatDouble(worst) << fit_note;
  return rec.Finish(summary.str());
}

CommandOutcome CmdTrajectory(const TrajectoryOptions& options) {
  if (options.shape != "heart" && options.shape != "circle" &&
      options.shape != "square") {
    throw UsageError("shape must be heart, circle or square");
  }
  RunRecorder rec("trajectory", options);
  const FingerParams params = LoadParamsOption(options, rec);
  const Trajectory traj =
      ResolveTrajectory(options.shape, options.points, params, rec);
  rec.settings() = {{"shape", options.shape}, {"points", traj.points.size()}};
  rec.Write(options.shape + ".csv", FormatTrajectory(traj));
  return rec.Finish(std::to_string(traj.points.size()) + " points");
}

namespace {

void AddCommon(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--params", common.params_path,
                  "Finger parameter file (default: reference set)");
  cmd->add_option("--out", common.out_dir, "Output directory")
      ->envname(kOutDirEnv)
      ->capture_default_str();
  cmd->add_flag("--svg", common.svg, "Also write SVG plots");
}

void AddSolver(CLI::App* cmd, SolverSettings& s, std::string& jacobian) {
  cmd->add_option("--max-iterations", s.max_iterations)->capture_default_str();
  cmd->add_option("--tolerance", s.tolerance, "Position tolerance (mm)")
      ->capture_default_str();
  cmd->add_option("--damping", s.damping)->capture_default_str();
  cmd->add_option("--constraint-weight", s.constraint_weight)
      ->capture_default_str();
  cmd->add_option("--jacobian", jacobian, "fd or analytic")
      ->check(CLI::IsMember({"fd", "analytic"}))
      ->capture_default_str();
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Elliptic-joint finger kinematics"};
  app.name("fingerkin");
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);

  WorkspaceOptions ws;
  std::string limits_text;
  auto* ws_cmd = app.add_subcommand("workspace", "Sample the fingertip workspace");
  AddCommon(ws_cmd, ws);
  ws_cmd->add_option("--n", ws.n, "Number of postures")->capture_default_str();
  ws_cmd->add_option("--seed", ws.seed)->capture_default_str();
  ws_cmd->add_option("--limits", limits_text,
                     "Joint ranges in degrees, e.g. -50:50,0:90,0:90,0:90");
  ws_cmd->add_option("--threads", ws.threads)->capture_default_str();

  FkOptions fk;
  std::vector<double> fk_angles;
  auto* fk_cmd = app.add_subcommand("fk", "Fingertip position for joint angles");
  AddCommon(fk_cmd, fk);
  fk_cmd->add_option("angles", fk_angles, "theta1..theta4 in degrees")
      ->expected(kNumJoints)
      ->required();

  IkOptions ik;
  std::string ik_jacobian = "fd";
  auto* ik_cmd = app.add_subcommand("ik", "Track a trajectory with inverse kinematics");
  AddCommon(ik_cmd, ik);
  ik_cmd->add_option("--trajectory", ik.trajectory,
                     "heart, circle, square, or a trajectory file")
      ->capture_default_str();
  ik_cmd->add_option("--points", ik.points, "Samples for built-in shapes");
  ik_cmd->add_option("--method", ik.method)
      ->check(CLI::IsMember({"analytic", "pcl", "optimize"}))
      ->capture_default_str();
  ik_cmd->add_option("--cloud", ik.cloud_path, "Posture cloud for --method pcl");
  AddSolver(ik_cmd, ik.settings, ik_jacobian);

  FitOptions fit;
  std::optional<double> lock_deg;
  auto* fit_cmd = app.add_subcommand("fit", "Compare ellipse and circle arc fits");
  AddCommon(fit_cmd, fit);
  fit_cmd->add_option("capture", fit.capture_path, "Capture file")->required();
  fit_cmd->add_option("--cor", fit.cor, "Centre of rotation x,y[,z] (mm)")
      ->delimiter(',')
      ->required();
  fit_cmd->add_option("--moving", fit.moving, "Tracked marker")
      ->capture_default_str();
  fit_cmd->add_option("--reference", fit.reference,
                      "Express the moving marker relative to this marker");
  fit_cmd->add_option("--anchors", fit.anchors,
                      "Three markers defining an oriented reference frame")
      ->delimiter(',');
  fit_cmd->add_option("--lock-orientation", lock_deg,
                      "Fix the ellipse major axis direction (degrees)");

  ReplayOptions replay;
  std::string replay_jacobian = "fd";
  auto* replay_cmd =
      app.add_subcommand("replay", "Drive the model along a captured fingertip path");
  AddCommon(replay_cmd, replay);
  replay_cmd->add_option("capture", replay.capture_path, "Bone capture file")
      ->required();
  replay_cmd->add_flag("--fit-params", replay.fit_params,
                       "Fit ellipse axes to the capture first");
  replay_cmd->add_option("--moving", replay.moving, "Fingertip point name")
      ->capture_default_str();
  AddSolver(replay_cmd, replay.settings, replay_jacobian);

  TrajectoryOptions tr;
  auto* tr_cmd =
      app.add_subcommand("trajectory", "Write a built-in trajectory to a file");
  AddCommon(tr_cmd, tr);
  tr_cmd->add_option("shape", tr.shape, "heart, circle or square")
      ->check(CLI::IsMember({"heart", "circle", "square"}))
      ->capture_default_str();
  tr_cmd->add_option("--points", tr.points, "Number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    CommandOutcome outcome;
    if (ws_cmd->parsed()) {
      if (!limits_text.empty()) ws.limits = ParseLimitsDeg(limits_text);
      outcome = CmdWorkspace(ws);
    } else if (fk_cmd->parsed()) {
      std::copy(fk_angles.begin(), fk_angles.end(), fk.angles_deg.begin());
      outcome = CmdFk(fk);
    } else if (ik_cmd->parsed()) {
      ik.settings.jacobian = ik_jacobian == "analytic"
                                 ? JacobianMode::kAnalytic
                                 : JacobianMode::kCentralDifference;
      outcome = CmdIk(ik);
    } else if (fit_cmd->parsed()) {
      fit.lock_orientation_deg = lock_deg;
      outcome = CmdFit(fit);
    } else if (replay_cmd->parsed()) {
      replay.settings.jacobian = replay_jacobian == "analytic"
                                     ? JacobianMode::kAnalytic
                                     : JacobianMode::kCentralDifference;
      outcome = CmdReplay(replay);
    } else {
      outcome = CmdTrajectory(tr);
    }
    out << outcome.summary << '\n';
    for (const auto& path : outcome.outputs) out << "wrote " << path << '\n';
    if (outcome.exit_code != 0) {
      err << "error: some points did not converge\n";
    }
    return outcome.exit_code;
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fingerkin::cli
