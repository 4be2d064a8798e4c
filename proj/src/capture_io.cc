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

#include "fingerkin/capture_io.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Geometry>

#include "fingerkin/errors.h"
#include "fingerkin/text_io.h"

namespace fingerkin {

CaptureSession::CaptureSession(CaptureSource source, double frame_rate,
                               std::vector<std::string> names,
                               std::vector<CaptureFrame> frames)
    : source_(source),
      frame_rate_(frame_rate),
      names_(std::move(names)),
      frames_(std::move(frames)) {
  if (frames_.empty()) throw EmptyCapture("capture has no frames");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) {
        throw ParseError("duplicate name `" + names_[i] + "`", 0);
      }
    }
  }
  for (const auto& f : frames_) {
    if (f.positions.size() != names_.size() ||
        f.present.size() != names_.size()) {
      throw ParseError("frame does not carry every name", 0);
    }
  }
  std::stable_sort(frames_.begin(), frames_.end(),
                   [](const CaptureFrame& a, const CaptureFrame& b) {
                     return a.time < b.time;
                   });
}

bool CaptureSession::Has(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t CaptureSession::IndexOf(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw UnknownMarker("capture has no marker named `" + std::string(name) + "`");
  }
  return static_cast<std::size_t>(it - names_.begin());
}

std::optional<Eigen::Vector3d> CaptureSession::Position(
    std::size_t frame, std::size_t name_index) const {
  const auto& f = frames_.at(frame);
  if (!f.present.at(name_index)) return std::nullopt;
  return f.positions[name_index];
}

std::string BoneStartName(int bone) {
  return std::string(kBoneNames.at(bone)) + "_start";
}

std::string BoneEndName(int bone) {
  return std::string(kBoneNames.at(bone)) + "_end";
}

namespace {

std::string_view SourceLabel(CaptureSource source) {
  return source == CaptureSource::kBone ? "bone" : "marker";
}

}  // namespace

CaptureSession ParseCapture(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.push_back(text.substr(start, end - start));
      start = end + 1;
    }
  }
  auto header_value = [&](std::size_t index, std::string_view key) {
    if (index >= lines.size()) {
      throw ParseError("missing `" + std::string(key) + "` header line",
                       static_cast<int>(index) + 1);
    }
    const auto fields = SplitFields(lines[index], ',');
    if (fields.size() != 2 || fields[0] != key) {
      throw ParseError("expected `" + std::string(key) + ",<value>`",
                       static_cast<int>(index) + 1);
    }
    return fields[1];
  };

  CaptureFileHeader header;
  header.source_label = std::string(header_value(0, "source"));
  CaptureSource source;
  if (header.source_label == "bone") {
    source = CaptureSource::kBone;
  } else if (header.source_label == "marker") {
    source = CaptureSource::kMarker;
  } else {
    throw ParseError("unknown source `" + header.source_label + "`", 1, 8);
  }
  header.unit = std::string(header_value(1, "unit"));
  double scale;
  if (header.unit == "mm") {
    scale = 1.0;
  } else if (header.unit == "m") {
    scale = 1000.0;
  } else {
    throw UnitError("unsupported unit `" + header.unit + "` (expected mm or m)");
  }
  if (!ParseDouble(header_value(2, "frame_rate"), header.frame_rate) ||
      !(header.frame_rate > 0.0)) {
    throw ParseError("frame_rate must be a positive number", 3, 12);
  }

  std::vector<std::string> names;
  struct Sample {
    Eigen::Vector3d position;
    bool present;
  };
  std::map<double, std::map<std::size_t, Sample>> by_time;
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    const std::string_view line = Trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = SplitFields(line, ',');
    if (i == 3 && fields.size() == 5 && fields[0] == "t" &&
        fields[1] == "name") {
      if (fields[2] != "x" || fields[3] != "y" || fields[4] != "z") {
        throw ParseError("column line must be `t,name,x,y,z`", number);
      }
      continue;
    }
    if (fields.size() != 5) {
      throw ParseError("expected 5 fields, got " + std::to_string(fields.size()),
                       number);
    }
    double t;
    if (!ParseDouble(fields[0], t) || !std::isfinite(t)) {
      throw ParseError("bad time `" + std::string(fields[0]) + "`", number, 1);
    }
    if (fields[1].empty()) throw ParseError("empty name", number, 2);
    Eigen::Vector3d p;
    int parsed = 0;
    int empty = 0;
    for (int k = 0; k < 3; ++k) {
      const auto f = fields[2 + k];
      if (f.empty()) {
        ++empty;
        continue;
      }
      if (!ParseDouble(f, p[k]) || std::isinf(p[k])) {
        throw ParseError("bad coordinate `" + std::string(f) + "`", number,
                         3 + k);
      }
      ++parsed;
    }
    if (empty != 0 && empty != 3) {
      throw ParseError("partially empty coordinates", number);
    }
    const bool present = parsed == 3 && p.allFinite();
    if (!present) p.setConstant(std::numeric_limits<double>::quiet_NaN());
    auto it = std::find(names.begin(), names.end(), fields[1]);
    std::size_t idx;
    if (it == names.end()) {
      names.emplace_back(fields[1]);
      idx = names.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - names.begin());
    }
    auto& frame = by_time[t];
    if (frame.count(idx)) {
      throw ParseError("duplicate sample for `" + std::string(fields[1]) +
                           "` at t=" + std::string(fields[0]),
                       number);
    }
    frame[idx] = Sample{p * scale, present};
  }
  if (by_time.empty()) throw EmptyCapture("capture has no samples");

  std::vector<CaptureFrame> frames;
  frames.reserve(by_time.size());
  for (const auto& [t, samples] : by_time) {
    CaptureFrame f;
    f.time = t;
    f.positions.assign(names.size(), Eigen::Vector3d::Constant(
                                         std::numeric_limits<double>::quiet_NaN()));
    f.present.assign(names.size(), false);
    for (const auto& [idx, s] : samples) {
      f.positions[idx] = s.position;
      f.present[idx] = s.present;
    }
    frames.push_back(std::move(f));
  }
  return CaptureSession(source, header.frame_rate, std::move(names),
                        std::move(frames));
}

CaptureSession LoadCapture(const std::string& path) {
  return ParseCapture(ReadTextFile(path));
}

std::string FormatCapture(const CaptureSession& session) {
  std::string out = "source,";
  out += SourceLabel(session.source());
  out += "\nunit,mm\nframe_rate,";
  out += FormatDouble(session.frame_rate());
  out += '\n';
  for (const auto& f : session.frames()) {
    const std::string t = FormatDouble(f.time);
    for (std::size_t i = 0; i < session.names().size(); ++i) {
      out += t;
      out += ',';
      out += session.names()[i];
      if (f.present[i]) {
        for (int k = 0; k < 3; ++k) {
          out += ',';
          out += FormatDouble(f.positions[i][k]);
        }
      } else {
        out += ",nan,nan,nan";
      }
      out += '\n';
    }
  }
  return out;
}

void SaveCapture(const CaptureSession& session, const std::string& path) {
  WriteTextFile(path, FormatCapture(session));
}

std::array<double, 3> BoneLengths(const CaptureSession& session) {
  if (session.source() != CaptureSource::kBone) {
    throw InsufficientData("bone lengths need a bone capture");
  }
  std::array<double, 3> lengths{};
  for (int b = 0; b < 3; ++b) {
    const std::string start = BoneStartName(b);
    const std::string end = BoneEndName(b);
    if (!session.Has(start) || !session.Has(end)) {
      throw InsufficientData("capture lacks end points of the " +
                             std::string(kBoneNames[b]) + " bone");
    }
    const std::size_t is = session.IndexOf(start);
    const std::size_t ie = session.IndexOf(end);
    std::vector<double> samples;
    for (std::size_t f = 0; f < session.num_frames(); ++f) {
      const auto a = session.Position(f, is);
      const auto c = session.Position(f, ie);
      if (a && c) samples.push_back((*c - *a).norm());
    }
    if (samples.empty()) {
      throw InsufficientData("no complete frame for the " +
                             std::string(kBoneNames[b]) + " bone");
    }
    const std::size_t mid = samples.size() / 2;
    std::nth_element(samples.begin(), samples.begin() + mid, samples.end());
    double median = samples[mid];
    if (samples.size() % 2 == 0) {
      const double lower =
          *std::max_element(samples.begin(), samples.begin() + mid);
      median = 0.5 * (median + lower);
    }
    lengths[b] = median;
  }
  return lengths;
}

std::vector<Eigen::Vector3d> RelativeMotion(const CaptureSession& session,
                                            std::string_view reference,
                                            std::string_view moving) {
  const std::size_t ir = session.IndexOf(reference);
  const std::size_t im = session.IndexOf(moving);
  std::vector<Eigen::Vector3d> out;
  for (std::size_t f = 0; f < session.num_frames(); ++f) {
    const auto r = session.Position(f, ir);
    const auto m = session.Position(f, im);
    if (r && m) out.push_back(*m - *r);
  }
  return out;
}

std::vector<Eigen::Vector3d> RelativeMotion(
    const CaptureSession& session,
    const std::array<std::string_view, 3>& anchors, std::string_view moving) {
  const std::size_t i0 = session.IndexOf(anchors[0]);
  const std::size_t i1 = session.IndexOf(anchors[1]);
  const std::size_t i2 = session.IndexOf(anchors[2]);
  const std::size_t im = session.IndexOf(moving);
  std::vector<Eigen::Vector3d> out;
  for (std::size_t f = 0; f < session.num_frames(); ++f) {
    const auto a = session.Position(f, i0);
    const auto b = session.Position(f, i1);
    const auto c = session.Position(f, i2);
    const auto m = session.Position(f, im);
    if (!a || !b || !c || !m) continue;
    const Eigen::Vector3d ex_raw = *b - *a;
    const Eigen::Vector3d ez_raw = ex_raw.cross(*c - *a);
    if (ex_raw.norm() == 0.0 || ez_raw.norm() <= 1e-12 * ex_raw.squaredNorm()) {
      continue;
    }
    Eigen::Matrix3d basis;
    basis.col(0) = ex_raw.normalized();
    basis.col(2) = ez_raw.normalized();
    basis.col(1) = basis.col(2).cross(basis.col(0));
    out.push_back(basis.transpose() * (*m - *a));
  }
  return out;
}

}  // namespace fingerkin
