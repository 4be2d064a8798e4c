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

// Pre-recorded motion capture: marker positions or bone end points.
//
// File format (CSV, optionally gzip-compressed when the name ends in .gz):
//
//   source,<marker|bone>
//   unit,<mm|m>
//   frame_rate,<Hz>
//   t,name,x,y,z            (optional column line)
//   <t>,<name>,<x>,<y>,<z>
//   ...
//
// Rows sharing the same t form one frame. A name absent from a frame, or a
// row whose coordinates are empty or "nan", is a missing sample. Files in
// metres are converted to millimetres on load.

#ifndef FINGERKIN_CAPTURE_IO_H_
#define FINGERKIN_CAPTURE_IO_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace fingerkin {

enum class CaptureSource { kMarker, kBone };

struct CaptureFileHeader {
  std::string source_label;
  std::string unit;
  double frame_rate = 0.0;
  std::vector<std::string> columns{"t", "name", "x", "y", "z"};
};

struct CaptureFrame {
  double time = 0.0;
  // Indexed like CaptureSession::names(). Missing samples hold NaN.
  std::vector<Eigen::Vector3d> positions;
  std::vector<bool> present;
};

// Immutable, time-ordered capture. Every frame carries every name.
class CaptureSession {
 public:
  // Throws EmptyCapture without frames, ParseError on inconsistent frames.
  CaptureSession(CaptureSource source, double frame_rate,
                 std::vector<std::string> names,
                 std::vector<CaptureFrame> frames);

  CaptureSource source() const { return source_; }
  double frame_rate() const { return frame_rate_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<CaptureFrame>& frames() const { return frames_; }
  std::size_t num_frames() const { return frames_.size(); }

  bool Has(std::string_view name) const;
  // Throws UnknownMarker.
  std::size_t IndexOf(std::string_view name) const;
  std::optional<Eigen::Vector3d> Position(std::size_t frame,
                                          std::size_t name_index) const;

 private:
  CaptureSource source_;
  double frame_rate_;
  std::vector<std::string> names_;
  std::vector<CaptureFrame> frames_;
};

// Bone end point names used by bone captures.
inline constexpr std::array<std::string_view, 3> kBoneNames = {
    "proximal", "intermediate", "distal"};
std::string BoneStartName(int bone);
std::string BoneEndName(int bone);
inline constexpr std::string_view kTipName = "tip";

CaptureSession ParseCapture(std::string_view text);
CaptureSession LoadCapture(const std::string& path);
// Always written in millimetres.
std::string FormatCapture(const CaptureSession& session);
void SaveCapture(const CaptureSession& session, const std::string& path);

// Median over frames of each bone's end point distance (proximal,
// intermediate, distal). Throws InsufficientData for marker captures or when
// a bone has no complete frame.
std::array<double, 3> BoneLengths(const CaptureSession& session);

// Position of `moving` relative to `reference` for every frame where both are
// present (translation only).
std::vector<Eigen::Vector3d> RelativeMotion(const CaptureSession& session,
                                            std::string_view reference,
                                            std::string_view moving);

// Position of `moving` in a frame anchored on three reference markers: origin
// at anchors[0], x toward anchors[1], z normal to the plane of all three.
// Frames with a missing or collinear anchor are skipped.
std::vector<Eigen::Vector3d> RelativeMotion(
    const CaptureSession& session,
    const std::array<std::string_view, 3>& anchors, std::string_view moving);

}  // namespace fingerkin

#endif  // FINGERKIN_CAPTURE_IO_H_
