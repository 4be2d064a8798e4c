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

// Text formats for FingerParams and PostureCloud.
//
// Params file: one `key = value` per line, '#' starts a comment. The twelve
// keys (lengths in mm) are listed in kParamKeys; `axis_orientation`
// (major_transverse | major_longitudinal) is optional.
//
// Cloud file: CSV with a commented header
//   # fingerkin posture cloud
//   # params_fingerprint: <16 hex digits>
//   # seed: <decimal>
//   x,y,z,theta1,theta2,theta3,theta4
// followed by one record per row; positions in mm, angles in radians.

#ifndef FINGERKIN_MODEL_IO_H_
#define FINGERKIN_MODEL_IO_H_

#include <array>
#include <string>
#include <string_view>

#include "fingerkin/finger_model.h"

namespace fingerkin {

inline constexpr std::array<std::string_view, kNumParams> kParamKeys = {
    "adab_major", "adab_minor",   "mcp_major",         "mcp_minor",
    "pip_major",  "pip_minor",    "dip_major",         "dip_minor",
    "proximal_length", "intermediate_length", "distal_length",
    "coupling_ratio"};

std::string FormatParams(const FingerParams& params);
FingerParams ParseParams(std::string_view text);
FingerParams LoadParams(const std::string& path);
void SaveParams(const FingerParams& params, const std::string& path);

std::string FormatCloud(const PostureCloud& cloud);
PostureCloud ParseCloud(std::string_view text);
PostureCloud LoadCloud(const std::string& path);
void SaveCloud(const PostureCloud& cloud, const std::string& path);

}  // namespace fingerkin

#endif  // FINGERKIN_MODEL_IO_H_
