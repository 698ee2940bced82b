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

#ifndef GEC_DIGEST_H_
#define GEC_DIGEST_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace gec {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

// Stable 64-bit seed material derived from text (first 8 bytes of SHA-256).
std::uint64_t StableHash64(std::string_view data);

}  // namespace gec

#endif  // GEC_DIGEST_H_
