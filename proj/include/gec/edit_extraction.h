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

// Token alignment, span-edit extraction and rule-based error typing.

#ifndef GEC_EDIT_EXTRACTION_H_
#define GEC_EDIT_EXTRACTION_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gec/corpus.h"

namespace gec {

struct Span {
  int start = 0;
  int end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

enum class AlignKind { kMatch, kSubstitute, kInsert, kDelete, kTranspose };

struct AlignmentOp {
  AlignKind kind;
  Span source;
  Span hyp;
  friend bool operator==(const AlignmentOp&, const AlignmentOp&) = default;
};

// Costs are kept in tenths so the DP works on integers.
namespace align_cost {
inline constexpr int kMatch = 0;
inline constexpr int kCaseOnly = 1;
inline constexpr int kPrefix = 5;
inline constexpr int kSubstitute = 10;
inline constexpr int kIndel = 10;
inline constexpr int kTranspose = 15;
}  // namespace align_cost

// Cost of substituting `a` with `b`, in tenths. Zero when equal.
int SubstitutionCost(std::string_view a, std::string_view b);

// Minimal-cost alignment. Consecutive matches are merged into one op. Ties are
// broken Match > Substitute > Transpose > Delete > Insert.
std::vector<AlignmentOp> Align(const Sentence& source,
                               const Sentence& hypothesis);

// Total alignment cost in tenths.
int AlignmentCost(const Sentence& source, const Sentence& hypothesis);

// Universal POS tags ("NOUN", "VERB", "ADJ", ...), one per token. When present
// they override the suffix heuristics for open-class categories.
struct PosTags {
  std::vector<std::string> source;
  std::vector<std::string> hypothesis;
};

// One edit per maximal run of non-match alignment ops, classified.
std::vector<Edit> ExtractEdits(const Sentence& source,
                               const Sentence& hypothesis,
                               const PosTags* pos = nullptr);

// Edit spans index `source`; the replacement must be the corresponding slice
// of `hypothesis`. Never returns kNoop.
ErrorTag Classify(const Edit& edit, const Sentence& source,
                  const Sentence& hypothesis, const PosTags* pos = nullptr);

// Every category Classify can emit.
const std::vector<std::string>& KnownCategories();

int CharacterLevenshtein(std::string_view a, std::string_view b);

// Closed-class word lists compiled from data/lexicon/.
struct Lexicon {
  std::string version;
  std::vector<std::string> determiners;
  std::vector<std::string> prepositions;
  std::vector<std::string> conjunctions;
  std::vector<std::string> punctuation;
  std::vector<std::string> subject_pronouns;
  std::vector<std::string> verbs;
};
const Lexicon& BuiltinLexicon();

}  // namespace gec

#endif  // GEC_EDIT_EXTRACTION_H_
