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

#include "cli/commands.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/run_manifest.h"
#include "fingerkin/capture_io.h"
#include "fingerkin/fitting.h"
#include "fingerkin/ik_solvers.h"
#include "fingerkin/model_io.h"
#include "fingerkin/text_io.h"
#include "fingerkin/trajectories.h"
#include "json.hpp"
#include "oracles.h"

namespace fingerkin::cli {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "fingerkin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Read(const fs::path& p) { return ReadTextFile(p.string()); }

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

TEST(CliFkTest, RestPostureAndDomain) {
  const fs::path dir = testing::ScratchDir("cli_fk");
  RunResult r = RunCli({"fk", "0", "0", "0", "0", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Lines(r.out)[0], "0,0,111.5");
  EXPECT_TRUE(fs::exists(dir / "fk.csv"));
  EXPECT_TRUE(fs::exists(dir / kManifestName));
  r = RunCli({"fk", "0", "95", "0", "0", "--out", dir.string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("error (DomainError)"), std::string::npos) << r.err;
  r = RunCli({"fk", "0", "1", "--out", dir.string()});
  EXPECT_EQ(r.code, kExitUsage);
  r = RunCli({"bogus"});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(CliWorkspaceTest, DeterministicAcrossRunsAndThreads) {
  const fs::path a = testing::ScratchDir("cli_ws_a");
  const fs::path b = testing::ScratchDir("cli_ws_b");
  ASSERT_EQ(RunCli({"workspace", "--n", "500", "--seed", "5", "--out", a.string()}).code, 0);
  ASSERT_EQ(RunCli({"workspace", "--n", "500", "--seed", "5", "--threads", "3",
                    "--out", b.string()})
                .code,
            0);
  EXPECT_EQ(Read(a / "cloud.csv"), Read(b / "cloud.csv"));
  for (int j = 1; j <= 4; ++j) {
    const std::string name = "workspace_joint" + std::to_string(j) + ".csv";
    EXPECT_EQ(Read(a / name), Read(b / name));
  }
  const PostureCloud cloud = LoadCloud((a / "cloud.csv").string());
  EXPECT_EQ(cloud.size(), 500u);
  EXPECT_NO_THROW(cloud.Verify(FingerParams::Reference()));
}

TEST(CliWorkspaceTest, RejectsBadCountsAndLimits) {
  const fs::path dir = testing::ScratchDir("cli_ws_bad");
  EXPECT_EQ(RunCli({"workspace", "--n", "0", "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(RunCli({"workspace", "--limits=10:-10,0:90,0:90,0:90", "--out",
                    dir.string()})
                .code,
            kExitUsage);
  EXPECT_EQ(RunCli({"workspace", "--limits=-95:50,0:90,0:90,0:90", "--out",
                    dir.string()})
                .code,
            kExitUsage);
}

TEST(CliWorkspaceTest, ManifestRecordsDigestsAndSettings) {
  const fs::path dir = testing::ScratchDir("cli_manifest");
  ASSERT_EQ(RunCli({"workspace", "--n", "100", "--seed", "9", "--svg", "--out",
                    dir.string()})
                .code,
            0);
  const auto m = nlohmann::json::parse(Read(dir / kManifestName));
  EXPECT_EQ(m["command"], "workspace");
  EXPECT_EQ(m["seed"], 9);
  EXPECT_TRUE(m["duration_seconds"].is_number());
  ASSERT_FALSE(m["outputs"].empty());
  bool saw_svg = false;
  for (const auto& o : m["outputs"]) {
    const std::string path = o["path"];
    EXPECT_EQ(o["fnv1a64"], DigestFile(path).digest);
    saw_svg |= path.ends_with("workspace.svg");
  }
  EXPECT_TRUE(saw_svg);
  EXPECT_EQ(Read(dir / "workspace.svg").rfind("<svg", 0), 0u);
}

TEST(CliOptionsTest, EnvironmentAndConfigFile) {
  const fs::path env_dir = testing::ScratchDir("cli_env");
  ::setenv(kOutDirEnv, env_dir.string().c_str(), 1);
  const RunResult r = RunCli({"fk", "10", "20", "30", "20"});
  ::unsetenv(kOutDirEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(env_dir / "fk.csv"));

  const fs::path dir = testing::ScratchDir("cli_config");
  const std::string config = (dir / "run.ini").string();
  WriteTextFile(config, "[workspace]\nn = 40\nseed = 3\nout = \"" +
                            (dir / "from_config").string() + "\"\n");
  ASSERT_EQ(RunCli({"--config", config, "workspace"}).code, 0);
  EXPECT_EQ(LoadCloud((dir / "from_config" / "cloud.csv").string()).size(), 40u);
  // Command-line values win over the file.
  ASSERT_EQ(RunCli({"--config", config, "workspace", "--n", "7"}).code, 0);
  EXPECT_EQ(LoadCloud((dir / "from_config" / "cloud.csv").string()).size(), 7u);
}

TEST(CliIkTest, AnalyticHeartTracksClosely) {
  const fs::path dir = testing::ScratchDir("cli_ik");
  const RunResult r = RunCli({"ik", "--trajectory", "heart", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = Lines(Read(dir / "ik_error.csv"));
  ASSERT_GT(rows.size(), 100u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::string field = rows[i].substr(0, rows[i].rfind(','));
    const double err = std::stod(field.substr(field.rfind(',') + 1));
    EXPECT_LT(err, 1e-3) << rows[i];
  }
  EXPECT_EQ(Lines(Read(dir / "ik_angles.csv")).size(), rows.size());
}

TEST(CliIkTest, PclNeedsMatchingCloud) {
  const fs::path dir = testing::ScratchDir("cli_pcl");
  EXPECT_EQ(RunCli({"ik", "--method", "pcl", "--out", dir.string()}).code, kExitUsage);
  ASSERT_EQ(RunCli({"workspace", "--n", "2000", "--out", dir.string()}).code, 0);
  const std::string cloud = (dir / "cloud.csv").string();
  RunResult r = RunCli({"ik", "--method", "pcl", "--trajectory", "circle", "--cloud",
                        cloud, "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mean_error_mm"), std::string::npos);

  ParamVector v = FingerParams::Reference().ToVector();
  v[8] += 2.0;
  const std::string params = (dir / "other.txt").string();
  SaveParams(FingerParams::FromVector(v), params);
  r = RunCli({"ik", "--method", "pcl", "--cloud", cloud, "--params", params, "--out",
              dir.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("fingerprint"), std::string::npos) << r.err;
}

TEST(CliIkTest, OptimizerAndTrajectoryFile) {
  const fs::path dir = testing::ScratchDir("cli_opt");
  ASSERT_EQ(RunCli({"trajectory", "square", "--points", "80", "--out", dir.string()}).code, 0);
  const std::string traj = (dir / "square.csv").string();
  const RunResult r = RunCli({"ik", "--trajectory", traj, "--method", "optimize",
                              "--jacobian", "analytic", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Lines(Read(dir / "ik_angles.csv")).size(), 81u);
  EXPECT_EQ(RunCli({"ik", "--method", "newton"}).code, kExitUsage);
}

CaptureSession MarkerArc(double major, double minor, double noise, std::uint64_t seed) {
  const auto pts2 = SampleArc(EllipseAxes(major, minor), 0.3, {0.0, 0.0}, 0.2,
                              70.0 * std::numbers::pi / 180.0, 60, noise, seed);
  std::vector<CaptureFrame> frames;
  for (std::size_t i = 0; i < pts2.size(); ++i) {
    CaptureFrame f;
    f.time = 0.01 * static_cast<double>(i);
    f.positions = {Eigen::Vector3d(pts2[i].x(), pts2[i].y(), 4.0),
                   Eigen::Vector3d(0.0, 0.0, 4.0)};
    f.present = {true, true};
    frames.push_back(f);
  }
  return CaptureSession(CaptureSource::kMarker, 100.0, {"tip", "base"}, frames);
}

TEST(CliFitTest, EllipticAndCircularArcs) {
  const fs::path dir = testing::ScratchDir("cli_fit");
  const std::string elliptic = (dir / "elliptic.csv").string();
  SaveCapture(MarkerArc(13.0, 10.0, 0.01, 4), elliptic);
  RunResult r = RunCli({"fit", elliptic, "--cor", "0,0,4", "--svg", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto report = nlohmann::json::parse(Read(dir / "fit_report.json"));
  EXPECT_LT(report["mse_ratio"].get<double>(), 1.0);
  EXPECT_EQ(Read(dir / "fit_plot.svg").rfind("<svg", 0), 0u);
  EXPECT_EQ(Lines(Read(dir / "fit_plot.csv")).size(), 61u);

  const std::string circular = (dir / "circular.csv").string();
  SaveCapture(MarkerArc(12.0, 12.0, 0.0, 1), circular);
  r = RunCli({"fit", circular, "--cor", "0,0,4", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  report = nlohmann::json::parse(Read(dir / "fit_report.json"));
  EXPECT_NEAR(report["circle"]["major"].get<double>(), 12.0, 1e-9);
  EXPECT_NEAR(report["mse_ratio"].get<double>(), 1.0, 1e-6);

  r = RunCli({"fit", circular, "--reference", "base", "--cor", "0,0,0", "--out",
              dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(CliFitTest, ErrorExitCodes) {
  const fs::path dir = testing::ScratchDir("cli_fit_err");
  const std::string capture = (dir / "arc.csv").string();
  SaveCapture(MarkerArc(13.0, 10.0, 0.0, 1), capture);
  EXPECT_EQ(RunCli({"fit", capture, "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(RunCli({"fit", capture, "--cor", "0,0,4", "--moving", "nail", "--out",
                    dir.string()})
                .code,
            6);
  const std::string corrupt = (dir / "corrupt.csv").string();
  WriteTextFile(corrupt, Read(capture) + "0.5,tip,1,x,2\n");
  EXPECT_EQ(RunCli({"fit", corrupt, "--cor", "0,0,4", "--out", dir.string()}).code, 3);
  EXPECT_EQ(RunCli({"fit", (dir / "missing.csv").string(), "--cor", "0,0", "--out",
                    dir.string()})
                .code,
            7);
}

TEST(CliReplayTest, SyntheticCaptureReplaysExactly) {
  const fs::path dir = testing::ScratchDir("cli_replay");
  const FingerParams p = FingerParams::Reference();
  std::vector<JointAngles> postures;
  for (int i = 0; i < 40; ++i) {
    const double s = 0.02 * i;
    postures.emplace_back(0.2 * std::sin(3 * s), 0.2 + s, 0.1 + 0.8 * s,
                          p.coupling_ratio() * (0.1 + 0.8 * s));
  }
  const std::string capture = (dir / "bones.csv.gz").string();
  SaveCapture(SimulateBoneCapture(p, postures, 100.0, 0.0, 1), capture);
  const RunResult r = RunCli({"replay", capture, "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = Lines(Read(dir / "replay_error.csv"));
  ASSERT_EQ(rows.size(), 41u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(std::stod(rows[i].substr(rows[i].rfind(',') + 1)), 1e-6);
  }
  EXPECT_EQ(RunCli({"replay", capture, "--moving", "nail", "--out", dir.string()}).code,
            6);
}

TEST(CliReplayTest, SquareCaptureGivesOneRowPerSample) {
  const fs::path dir = testing::ScratchDir("cli_replay_square");
  const FingerParams p = FingerParams::Reference();
  const Trajectory square = DefaultSquare(p, 300);
  std::vector<JointAngles> postures;
  for (const auto& sol : IkAnalytic(p, square.points, SolverSettings{})) {
    ASSERT_TRUE(sol.converged) << sol.failure;
    postures.push_back(sol.angles);
  }
  const std::string capture = (dir / "square_capture.csv").string();
  SaveCapture(SimulateBoneCapture(p, postures, 120.0, 0.0, 1), capture);
  const RunResult r = RunCli({"replay", capture, "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Lines(Read(dir / "replay_error.csv")).size(), 301u);
  EXPECT_NE(r.out.find("frames 300 unreached 0"), std::string::npos) << r.out;
}

TEST(CliManifestTest, RerunsReproduceOutputDigests) {
  const fs::path dir = testing::ScratchDir("cli_rerun");
  auto digests = [&] {
    EXPECT_EQ(RunCli({"workspace", "--n", "300", "--seed", "12", "--out", dir.string()})
                  .code,
              0);
    const auto m = nlohmann::json::parse(Read(dir / kManifestName));
    return m["outputs"].dump();
  };
  EXPECT_EQ(digests(), digests());
}

TEST(CliTrajectoryTest, SquareHasRequestedRows) {
  const fs::path dir = testing::ScratchDir("cli_traj");
  ASSERT_EQ(RunCli({"trajectory", "square", "--points", "300", "--out", dir.string()}).code,
            0);
  int rows = 0;
  for (const auto& line : Lines(Read(dir / "square.csv"))) {
    rows += !line.empty() && line[0] != '#' && line != "x,y,z";
  }
  EXPECT_EQ(rows, 300);
}

TEST(CliExitCodeTest, KindsMapToDocumentedCodes) {
  EXPECT_EQ(ExitCodeFor(ErrorKind::kUsage), 2);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kParse), 3);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kDomain), 4);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kNoConvergence), 5);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kInsufficientData), 6);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kIo), 7);
  const AngleLimits lim = ParseLimitsDeg("-10:10,0:45,0:45,0:30");
  EXPECT_NEAR(lim[1].hi, std::numbers::pi / 4, 1e-15);
  EXPECT_THROW(ParseLimitsDeg("0:1,0:1"), UsageError);
}

}  // namespace
}  // namespace fingerkin::cli
