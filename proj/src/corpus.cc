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

#include "gec/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

namespace gec {
namespace {

constexpr std::string_view kFieldSeparator = "|||";
constexpr std::string_view kNone = "-NONE-";
constexpr int kM2FieldCount = 6;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> SplitOn(std::string_view text,
                                      std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(text.substr(pos));
      return out;
    }
    out.push_back(text.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

bool ParseInt(std::string_view text, int& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct PendingEdit {
  Edit edit;
  std::size_t line;
};

struct BlockBuilder {
  std::size_t start_line = 0;
  bool has_source = false;
  Sentence source;
  std::map<int, std::vector<PendingEdit>> edits;
  std::map<int, bool> seen;
};

Edit ParseEditLine(std::string_view body, std::size_t line_no,
                   std::size_t source_len) {
  std::vector<std::string_view> fields = SplitOn(body, kFieldSeparator);
  if (fields.size() != kM2FieldCount) {
    throw ParseError(line_no, "expected 6 '|||'-separated fields, found " +
                                  std::to_string(fields.size()));
  }
  std::vector<std::string> span = SplitWhitespace(fields[0]);
  Edit edit;
  if (span.size() != 2 || !ParseInt(span[0], edit.start) ||
      !ParseInt(span[1], edit.end)) {
    throw ParseError(line_no, "malformed span '" + std::string(fields[0]) +
                                  "'");
  }
  if (!ParseInt(fields[5], edit.annotator) || edit.annotator < 0) {
    throw ParseError(line_no, "malformed annotator id '" +
                                  std::string(fields[5]) + "'");
  }
  edit.tag = ErrorTag::Parse(fields[1]);
  if (fields[2] != kNone) edit.replacement = SplitWhitespace(fields[2]);
  edit.required = std::string(fields[3]);
  edit.comment = std::string(fields[4]);
  if (edit.IsNoop()) return edit;
  if (edit.start < 0 || edit.start > edit.end ||
      static_cast<std::size_t>(edit.end) > source_len) {
    throw ParseError(line_no, "span " + std::to_string(edit.start) + " " +
                                  std::to_string(edit.end) +
                                  " out of range for source of length " +
                                  std::to_string(source_len));
  }
  if (edit.start == edit.end && edit.replacement.empty()) {
    throw ParseError(line_no, "empty insertion at " +
                                  std::to_string(edit.start));
  }
  return edit;
}

AnnotatedSentence FinishBlock(BlockBuilder& block) {
  if (!block.has_source) {
    throw ParseError(block.start_line, "block has no 'S ' line");
  }
  AnnotatedSentence out;
  out.source = std::move(block.source);
  for (auto& [annotator, _] : block.seen) out.edits_by_annotator[annotator];
  for (auto& [annotator, pending] : block.edits) {
    std::stable_sort(pending.begin(), pending.end(),
                     [](const PendingEdit& a, const PendingEdit& b) {
                       return EditOrder(a.edit, b.edit);
                     });
    std::vector<Edit>& kept = out.edits_by_annotator[annotator];
    for (PendingEdit& p : pending) {
      if (!kept.empty() && kept.back().SameCorrection(p.edit)) continue;
      if (!kept.empty() && EditsOverlap(kept.back(), p.edit)) {
        throw ParseError(p.line, "edit overlaps another edit of annotator " +
                                     std::to_string(annotator));
      }
      kept.push_back(std::move(p.edit));
    }
  }
  return out;
}

}  // namespace

bool IsValidToken(std::string_view token) {
  return !token.empty() &&
         std::none_of(token.begin(), token.end(), [](char c) {
           return IsSpace(c);
         });
}

Sentence::Sentence(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (const std::string& t : tokens_) {
    if (!IsValidToken(t)) {
      throw ContractViolation("invalid token '" + t + "'");
    }
  }
}

Sentence Sentence::FromText(std::string_view text) {
  Sentence s;
  s.tokens_ = SplitWhitespace(text);
  return s;
}

std::string Sentence::Join() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens_[i];
  }
  return out;
}

ErrorTag ErrorTag::Parse(std::string_view text) {
  if (text == "noop") return {Operation::kNoop, ""};
  if (text == "UNK") return {Operation::kUnknown, ""};
  if (text.size() > 2 && text[1] == ':') {
    switch (text[0]) {
      case 'M':
        return {Operation::kMissing, std::string(text.substr(2))};
      case 'R':
        return {Operation::kReplacement, std::string(text.substr(2))};
      case 'U':
        return {Operation::kUnnecessary, std::string(text.substr(2))};
      default:
        break;
    }
  }
  return {Operation::kUnknown, std::string(text)};
}

std::string ErrorTag::ToString() const {
  switch (operation) {
    case Operation::kMissing:
      return "M:" + category;
    case Operation::kReplacement:
      return "R:" + category;
    case Operation::kUnnecessary:
      return "U:" + category;
    case Operation::kNoop:
      return "noop";
    case Operation::kUnknown:
      return category.empty() ? "UNK" : category;
  }
  return "UNK";
}

bool EditOrder(const Edit& a, const Edit& b) {
  return std::tie(a.start, a.end, a.replacement) <
         std::tie(b.start, b.end, b.replacement);
}

bool EditsOverlap(const Edit& a, const Edit& b) {
  if (a.IsNoop() || b.IsNoop()) return false;
  auto insertion_hits = [](const Edit& ins, const Edit& other) {
    const int p = ins.start;
    return other.start == p || (other.start < p && p < other.end);
  };
  if (a.start == a.end) return insertion_hits(a, b);
  if (b.start == b.end) return insertion_hits(b, a);
  return std::max(a.start, b.start) < std::min(a.end, b.end);
}

bool IsCanonicalEditSet(std::span<const Edit> edits) {
  for (std::size_t i = 1; i < edits.size(); ++i) {
    if (EditOrder(edits[i], edits[i - 1])) return false;
  }
  for (std::size_t i = 0; i < edits.size(); ++i) {
    for (std::size_t j = i + 1; j < edits.size(); ++j) {
      if (EditsOverlap(edits[i], edits[j])) return false;
    }
  }
  return true;
}

Corpus ParseM2(std::string_view text) {
  Corpus corpus;
  BlockBuilder block;
  bool in_block = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      if (in_block) {
        corpus.sentences.push_back(FinishBlock(block));
        block = BlockBuilder();
        in_block = false;
      }
      continue;
    }
    if (!in_block) {
      in_block = true;
      block.start_line = line_no;
    }
    if (line == "S" || line.starts_with("S ")) {
      if (block.has_source) {
        throw ParseError(line_no, "second 'S ' line in one block");
      }
      block.has_source = true;
      block.source = Sentence::FromText(line.substr(1));
    } else if (line.starts_with("A ")) {
      if (!block.has_source) {
        throw ParseError(line_no, "'A ' line before the 'S ' line");
      }
      Edit edit = ParseEditLine(line.substr(2), line_no, block.source.size());
      block.seen[edit.annotator] = true;
      if (!edit.IsNoop()) {
        int annotator = edit.annotator;
        block.edits[annotator].push_back({std::move(edit), line_no});
      }
    } else {
      throw ParseError(line_no, "expected a line starting with 'S ' or 'A '");
    }
  }
  if (in_block) corpus.sentences.push_back(FinishBlock(block));
  return corpus;
}

std::string WriteM2(const Corpus& corpus) {
  std::ostringstream out;
  bool first = true;
  for (const AnnotatedSentence& sentence : corpus.sentences) {
    if (!first) out << '\n';
    first = false;
    out << "S " << sentence.source.Join() << '\n';
    for (const auto& [annotator, edits] : sentence.edits_by_annotator) {
      if (edits.empty()) {
        out << "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||" << annotator
            << '\n';
        continue;
      }
      for (const Edit& e : edits) {
        out << "A " << e.start << ' ' << e.end << kFieldSeparator
            << e.tag.ToString() << kFieldSeparator;
        if (e.replacement.empty()) {
          out << kNone;
        } else {
          out << Sentence(e.replacement).Join();
        }
        out << kFieldSeparator << e.required << kFieldSeparator << e.comment
            << kFieldSeparator << annotator << '\n';
      }
    }
  }
  return out.str();
}

Sentence ApplyEdits(const Sentence& source, std::span<const Edit> edits) {
  const int n = static_cast<int>(source.size());
  const Edit* prev = nullptr;
  for (const Edit& e : edits) {
    if (e.IsNoop()) continue;
    if (e.start < 0 || e.start > e.end || e.end > n) {
      throw ContractViolation("edit span " + std::to_string(e.start) + " " +
                              std::to_string(e.end) +
                              " out of range for source of length " +
                              std::to_string(n));
    }
    if (prev != nullptr) {
      if (e.start < prev->start ||
          (e.start == prev->start && e.end < prev->end)) {
        throw ContractViolation("edits are not sorted by start offset");
      }
      if (EditsOverlap(*prev, e)) {
        throw ContractViolation("overlapping edits at " +
                                std::to_string(prev->start) + " and " +
                                std::to_string(e.start));
      }
    }
    prev = &e;
  }

  std::vector<std::string> tokens = source.tokens();
  for (auto it = edits.rbegin(); it != edits.rend(); ++it) {
    if (it->IsNoop()) continue;
    auto first = tokens.begin() + it->start;
    tokens.erase(first, tokens.begin() + it->end);
    tokens.insert(tokens.begin() + it->start, it->replacement.begin(),
                  it->replacement.end());
  }
  return Sentence(std::move(tokens));
}

std::vector<Sentence> ParseSentenceLines(std::string_view text) {
  std::vector<Sentence> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    out.push_back(Sentence::FromText(text.substr(pos, eol - pos)));
    pos = eol + 1;
  }
  return out;
}

std::string WriteSentenceLines(std::span<const Sentence> sentences) {
  std::string out;
  for (const Sentence& s : sentences) {
    out += s.Join();
    out += '\n';
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace gec
