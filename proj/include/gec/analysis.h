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

// Per-error-type behaviour of one system: how often it reproduces gold edits
// of each type (correction rate) and how often its own edits of a type match
// nothing (false insertion rate).

#ifndef GEC_ANALYSIS_H_
#define GEC_ANALYSIS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gec/corpus.h"
#include "gec/metrics.h"
#include "gec/stats.h"

namespace gec {

inline constexpr long kLowSupportThreshold = 5;

struct TypeRow {
  // Percentages; present only when the matching count is positive.
  std::optional<double> correction_rate;
  std::optional<double> false_insertion_rate;
  // Unknown for profiles read from published tables.
  std::optional<long> gold_count;
  std::optional<long> sys_count;

  bool low_support() const {
    return gold_count.has_value() && *gold_count < kLowSupportThreshold;
  }
};

struct TypeProfile {
  std::map<ErrorTag, TypeRow> rows;
};

struct ProfileOptions {
  double beta = kDefaultBeta;
  // Score every sentence against this annotator instead of the best one.
  std::optional<int> fixed_annotator;
};

TypeProfile ProfileSystem(std::span<const std::vector<Edit>> hyp_edits,
                          const Corpus& refs, const ProfileOptions& options = {});

enum class RateField { kCorrection, kFalseInsertion };
// "correction" or "false_insertion"; throws ConfigError.
RateField ParseRateField(std::string_view name);

// Spearman over the tags where both profiles define `field`. Throws
// InsufficientData for fewer than three such tags.
CorrelationResult CorrelateProfiles(const TypeProfile& a, const TypeProfile& b,
                                    RateField field);

// Tab-separated: tag, correction_rate, false_insertion_rate, gold_count,
// sys_count, with a header row and "NA" for absent values.
std::string WriteProfileTsv(const TypeProfile& profile);
TypeProfile ParseProfileTsv(std::string_view text);

}  // namespace gec

#endif  // GEC_ANALYSIS_H_
