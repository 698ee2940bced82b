// Copyright 2026 The gec-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEC_MANIFEST_H_
#define GEC_MANIFEST_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace gec {

// Provenance record written next to every machine-readable report.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::vector<std::string>> options;
  std::map<std::string, std::string> input_digests;  // path -> sha256
  std::uint64_t seed = 42;
  std::string version;
  std::string timestamp;
  std::string report_digest;

  nlohmann::json ToJson() const;
};

std::string ManifestPathFor(const std::string& report_path);

// Writes `report` to `path` and the manifest (with report_digest filled in)
// to ManifestPathFor(path). Throws IoError.
void WriteReport(const std::string& path, const std::string& report,
                 RunManifest manifest);

void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace gec

#endif  // GEC_MANIFEST_H_
