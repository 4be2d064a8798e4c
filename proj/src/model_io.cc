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

#include "fingerkin/model_io.h"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "fingerkin/errors.h"
#include "fingerkin/text_io.h"

namespace fingerkin {
namespace {

// Calls fn(line_number, line) for each line of text.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(number, line);
    if (end == text.size()) break;
    start = end + 1;
  }
}

std::string_view OrientationName(AxisOrientation o) {
  return o == AxisOrientation::kMajorTransverse ? "major_transverse"
                                                : "major_longitudinal";
}

}  // namespace

std::string FormatParams(const FingerParams& params) {
  std::ostringstream os;
  os << "# fingerkin finger parameters (lengths in mm)\n";
  const ParamVector v = params.ToVector();
  for (int i = 0; i < kNumParams; ++i) {
    os << kParamKeys[i] << " = " << FormatDouble(v[i]) << '\n';
  }
  os << "axis_orientation = " << OrientationName(params.orientation()) << '\n';
  return os.str();
}

FingerParams ParseParams(std::string_view text) {
  std::array<std::optional<double>, kNumParams> values;
  AxisOrientation orientation = AxisOrientation::kMajorTransverse;
  ForEachLine(text, [&](int number, std::string_view line) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected `key = value`", number);
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "axis_orientation") {
      if (value == OrientationName(AxisOrientation::kMajorTransverse)) {
        orientation = AxisOrientation::kMajorTransverse;
      } else if (value == OrientationName(AxisOrientation::kMajorLongitudinal)) {
        orientation = AxisOrientation::kMajorLongitudinal;
      } else {
        throw ParseError("unknown axis_orientation `" + std::string(value) + "`",
                         number);
      }
      return;
    }
    for (int i = 0; i < kNumParams; ++i) {
      if (key != kParamKeys[i]) continue;
      if (values[i]) {
        throw ParseError("duplicate key `" + std::string(key) + "`", number);
      }
      double parsed;
      if (!ParseDouble(value, parsed)) {
        throw ParseError("bad number for `" + std::string(key) + "`", number,
                         static_cast<int>(eq) + 2);
      }
      values[i] = parsed;
      return;
    }
    throw ParseError("unknown key `" + std::string(key) + "`", number);
  });
  ParamVector v{};
  for (int i = 0; i < kNumParams; ++i) {
    if (!values[i]) {
      throw ParseError("missing key `" + std::string(kParamKeys[i]) + "`", 0);
    }
    v[i] = *values[i];
  }
  return FingerParams::FromVector(v, orientation);
}

FingerParams LoadParams(const std::string& path) {
  return ParseParams(ReadTextFile(path));
}

void SaveParams(const FingerParams& params, const std::string& path) {
  WriteTextFile(path, FormatParams(params));
}

std::string FormatCloud(const PostureCloud& cloud) {
  std::string out;
  out.reserve(cloud.size() * 140 + 128);
  out += "# fingerkin posture cloud\n# params_fingerprint: ";
  out += FingerprintHex(cloud.params_fingerprint());
  out += "\n# seed: ";
  out += std::to_string(cloud.seed());
  out += "\nx,y,z,theta1,theta2,theta3,theta4\n";
  for (const auto& r : cloud.records()) {
    for (int k = 0; k < 3; ++k) {
      out += FormatDouble(r.position[k]);
      out += ',';
    }
    for (int k = 0; k < kNumJoints; ++k) {
      out += FormatDouble(r.angles[k]);
      out += k + 1 < kNumJoints ? ',' : '\n';
    }
  }
  return out;
}

PostureCloud ParseCloud(std::string_view text) {
  std::optional<std::uint64_t> fingerprint;
  std::optional<std::uint64_t> seed;
  bool saw_columns = false;
  std::vector<FingertipRecord> records;
  auto parse_u64 = [](std::string_view s, int base, int line) {
    std::uint64_t v = 0;
    s = Trim(s);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
      throw ParseError("bad integer `" + std::string(s) + "`", line);
    }
    return v;
  };
  ForEachLine(text, [&](int number, std::string_view line) {
    line = Trim(line);
    if (line.empty()) return;
    if (line.front() == '#') {
      line.remove_prefix(1);
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) return;
      const auto key = Trim(line.substr(0, colon));
      const auto value = line.substr(colon + 1);
      if (key == "params_fingerprint") fingerprint = parse_u64(value, 16, number);
      if (key == "seed") seed = parse_u64(value, 10, number);
      return;
    }
    if (!saw_columns) {
      if (line != "x,y,z,theta1,theta2,theta3,theta4") {
        throw ParseError("expected column header", number);
      }
      saw_columns = true;
      return;
    }
    const auto fields = SplitFields(line, ',');
    if (fields.size() != 7) {
      throw ParseError("expected 7 fields, got " + std::to_string(fields.size()),
                       number);
    }
    FingertipRecord r;
    for (int k = 0; k < 7; ++k) {
      double v;
      if (!ParseDouble(fields[k], v) || !std::isfinite(v)) {
        throw ParseError("bad number `" + std::string(fields[k]) + "`", number,
                         k + 1);
      }
      if (k < 3) {
        r.position[k] = v;
      } else {
        r.angles[k - 3] = v;
      }
    }
    records.push_back(r);
  });
  if (!fingerprint) throw ParseError("missing params_fingerprint header", 1);
  if (!seed) throw ParseError("missing seed header", 1);
  if (records.empty()) throw ParseError("posture cloud has no records", 0);
  return PostureCloud(*fingerprint, *seed, std::move(records));
}

PostureCloud LoadCloud(const std::string& path) {
  return ParseCloud(ReadTextFile(path));
}

void SaveCloud(const PostureCloud& cloud, const std::string& path) {
  WriteTextFile(path, FormatCloud(cloud));
}

}  // namespace fingerkin
