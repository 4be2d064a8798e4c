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

// Small text helpers shared by the file formats.

#ifndef FINGERKIN_TEXT_IO_H_
#define FINGERKIN_TEXT_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fingerkin {

// Shortest decimal text that parses back to the identical double. NaN is
// written as "nan".
std::string FormatDouble(double value);

// Full-field parse; accepts "nan"/"inf". Returns false on trailing garbage.
bool ParseDouble(std::string_view text, double& out);

std::string_view Trim(std::string_view text);
std::vector<std::string_view> SplitFields(std::string_view line, char sep);

// 64-bit FNV-1a hash of raw bytes.
std::uint64_t Fnv1a64(std::string_view bytes);

// Whole-file read/write. Paths ending in ".gz" are (de)compressed with zlib.
// Throws IoError.
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& content);

}  // namespace fingerkin

#endif  // FINGERKIN_TEXT_IO_H_
