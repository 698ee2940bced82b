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

#include "gec/manifest.h"

#include <fstream>

#include "gec/digest.h"
#include "gec/errors.h"

namespace gec {

nlohmann::json RunManifest::ToJson() const {
  return {{"subcommand", subcommand},
          {"options", options},
          {"input_digests", input_digests},
          {"seed", seed},
          {"version", version},
          {"timestamp", timestamp},
          {"report_digest", report_digest}};
}

std::string ManifestPathFor(const std::string& report_path) {
  return report_path + ".manifest.json";
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path);
}

void WriteReport(const std::string& path, const std::string& report,
                 RunManifest manifest) {
  manifest.report_digest = Sha256Hex(report);
  WriteTextFile(path, report);
  WriteTextFile(ManifestPathFor(path), manifest.ToJson().dump(2) + "\n");
}

}  // namespace gec
