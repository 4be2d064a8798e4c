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

// Record of one command run, written next to its outputs.

#ifndef FINGERKIN_TOOLS_CLI_RUN_MANIFEST_H_
#define FINGERKIN_TOOLS_CLI_RUN_MANIFEST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fingerkin::cli {

inline constexpr const char* kManifestName = "manifest.json";

struct FileDigest {
  std::string path;
  // FNV-1a 64 of the raw file bytes, hex.
  std::string digest;
};

struct RunManifest {
  std::string command;
  std::vector<FileDigest> inputs;
  std::optional<std::uint64_t> seed;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  std::vector<FileDigest> outputs;
  double duration_seconds = 0.0;

  nlohmann::ordered_json ToJson() const;
};

FileDigest DigestFile(const std::string& path);

// Writes to a sibling temporary file, then renames over `path`.
void WriteFileAtomic(const std::string& path, const std::string& content);

}  // namespace fingerkin::cli

#endif  // FINGERKIN_TOOLS_CLI_RUN_MANIFEST_H_
