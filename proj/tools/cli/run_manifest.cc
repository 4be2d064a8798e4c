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

#include "run_manifest.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <system_error>

#include "fingerkin/errors.h"
#include "fingerkin/finger_model.h"
#include "fingerkin/text_io.h"

namespace fingerkin::cli {
namespace {

nlohmann::ordered_json DigestList(const std::vector<FileDigest>& files) {
  auto list = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    list.push_back({{"path", f.path}, {"fnv1a64", f.digest}});
  }
  return list;
}

}  // namespace

nlohmann::ordered_json RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["inputs"] = DigestList(inputs);
  if (seed) {
    j["seed"] = *seed;
  } else {
    j["seed"] = nullptr;
  }
  j["settings"] = settings;
  j["outputs"] = DigestList(outputs);
  j["duration_seconds"] = duration_seconds;
  return j;
}

FileDigest DigestFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read `" + path + "`");
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return {path, FingerprintHex(Fnv1a64(bytes))};
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write `" + tmp + "`");
    out << content;
    if (!out.flush()) throw IoError("write to `" + tmp + "` failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move `" + tmp + "` to `" + path + "`: " + ec.message());
}

}  // namespace fingerkin::cli
