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

// The fingerkin commands. Each writes its outputs and a manifest.json into
// the output directory and returns a summary; errors surface as
// fingerkin::Error.

#ifndef FINGERKIN_TOOLS_CLI_COMMANDS_H_
#define FINGERKIN_TOOLS_CLI_COMMANDS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fingerkin/errors.h"
#include "fingerkin/finger_model.h"
#include "fingerkin/ik_solvers.h"

namespace fingerkin::cli {

inline constexpr const char* kOutDirEnv = "FINGERKIN_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "fingerkin_out";

struct CommonOptions {
  // Empty selects the reference parameter set.
  std::string params_path;
  std::string out_dir = kDefaultOutDir;
  bool svg = false;
};

struct CommandOutcome {
  std::vector<std::string> outputs;
  std::string summary;
  // Nonzero when the command finished but some results failed.
  int exit_code = 0;
};

struct WorkspaceOptions : CommonOptions {
  std::size_t n = 8000;
  std::uint64_t seed = 1;
  AngleLimits limits = DefaultAngleLimits();
  int threads = 1;
};

struct FkOptions : CommonOptions {
  std::array<double, kNumJoints> angles_deg{};
};

struct IkOptions : CommonOptions {
  // heart, circle, square, or a trajectory file.
  std::string trajectory = "heart";
  // Sample count for built-in shapes; 0 keeps each shape's default.
  int points = 0;
  std::string method = "analytic";
  std::string cloud_path;
  SolverSettings settings;
};

struct FitOptions : CommonOptions {
  std::string capture_path;
  // In-plane (2 values) or capture coordinates (3 values), mm.
  std::vector<double> cor;
  std::string moving = "tip";
  std::string reference;
  std::vector<std::string> anchors;
  std::optional<double> lock_orientation_deg;
};

struct ReplayOptions : CommonOptions {
  std::string capture_path;
  bool fit_params = false;
  std::string moving = "tip";
  SolverSettings settings;
};

struct TrajectoryOptions : CommonOptions {
  std::string shape = "heart";
  int points = 0;
};

CommandOutcome CmdWorkspace(const WorkspaceOptions& options);
CommandOutcome CmdFk(const FkOptions& options);
CommandOutcome CmdIk(const IkOptions& options);
CommandOutcome CmdFit(const FitOptions& options);
CommandOutcome CmdReplay(const ReplayOptions& options);
CommandOutcome CmdTrajectory(const TrajectoryOptions& options);

// "lo:hi" per joint in degrees, comma separated.
AngleLimits ParseLimitsDeg(std::string_view text);

int ExitCodeFor(ErrorKind kind);
inline constexpr int kExitUsage = 2;

// Parses argv and runs one command.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace fingerkin::cli

#endif  // FINGERKIN_TOOLS_CLI_COMMANDS_H_
