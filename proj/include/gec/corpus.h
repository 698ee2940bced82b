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

// Tokenized sentences, span edits, and the M2 annotation format.
//
// Offsets are token offsets into the source sentence. Tokenization is taken
// from the input file as-is and never recomputed.

#ifndef GEC_CORPUS_H_
#define GEC_CORPUS_H_

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gec/errors.h"

namespace gec {

// A whitespace-free, non-empty token sequence. Serializes with single spaces.
class Sentence {
 public:
  Sentence() = default;
  // Throws ContractViolation if any token is empty or contains whitespace.
  explicit Sentence(std::vector<std::string> tokens);

  // Splits on runs of ASCII whitespace. Never throws.
  static Sentence FromText(std::string_view text);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }

  std::string Join() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
  friend auto operator<=>(const Sentence&, const Sentence&) = default;

 private:
  std::vector<std::string> tokens_;
};

bool IsValidToken(std::string_view token);

enum class Operation { kMissing, kReplacement, kUnnecessary, kUnknown, kNoop };

struct ErrorTag {
  Operation operation = Operation::kUnknown;
  std::string category;

  // "M:DET", "R:VERB:SVA", "U:PUNCT", "noop", "UNK". Tags outside this
  // scheme (e.g. CoNLL-style "ArtOrDet") parse as kUnknown with the raw
  // string kept as the category and render back verbatim.
  static ErrorTag Parse(std::string_view text);
  std::string ToString() const;

  friend bool operator==(const ErrorTag&, const ErrorTag&) = default;
  friend auto operator<=>(const ErrorTag&, const ErrorTag&) = default;
};

struct Edit {
  static constexpr int kNoopOffset = -1;

  int start = 0;
  int end = 0;
  std::vector<std::string> replacement;
  ErrorTag tag;
  int annotator = 0;
  // Verbatim M2 fields; carried for round-tripping, ignored by scoring.
  std::string required = "REQUIRED";
  std::string comment = "-NONE-";

  bool IsInsertion() const { return start == end && !replacement.empty(); }
  bool IsDeletion() const { return start < end && replacement.empty(); }
  bool IsNoop() const { return start == kNoopOffset && end == kNoopOffset; }

  // Span and replacement only; the identity used for matching and voting.
  bool SameCorrection(const Edit& other) const {
    return start == other.start && end == other.end &&
           replacement == other.replacement;
  }

  friend bool operator==(const Edit&, const Edit&) = default;
};

// Sorts by (start, end, replacement).
bool EditOrder(const Edit& a, const Edit& b);

// True when two edits over the same source conflict. Spans overlap when they
// share a token; an insertion at p also conflicts with any edit starting at
// p, but not with one ending at p.
bool EditsOverlap(const Edit& a, const Edit& b);

// True when `edits` is sorted by EditOrder and pairwise non-overlapping.
bool IsCanonicalEditSet(std::span<const Edit> edits);

struct AnnotatedSentence {
  Sentence source;
  std::map<int, std::vector<Edit>> edits_by_annotator;

  friend bool operator==(const AnnotatedSentence&,
                         const AnnotatedSentence&) = default;
};

struct Corpus {
  std::vector<AnnotatedSentence> sentences;

  std::size_t size() const { return sentences.size(); }
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Throws ParseError (with a 1-based line number) on malformed input.
Corpus ParseM2(std::string_view text);
std::string WriteM2(const Corpus& corpus);

// Splices `edits` into `source` right to left. Noop edits are skipped.
// Throws ContractViolation for unsorted, overlapping or out-of-range edits.
Sentence ApplyEdits(const Sentence& source, std::span<const Edit> edits);

// One sentence per line, tokens separated by whitespace. A trailing newline
// does not produce an extra empty sentence.
std::vector<Sentence> ParseSentenceLines(std::string_view text);
std::string WriteSentenceLines(std::span<const Sentence> sentences);

// Reads a whole file; throws IoError.
std::string ReadFile(const std::string& path);

}  // namespace gec

#endif  // GEC_CORPUS_H_
