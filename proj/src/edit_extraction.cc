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

#include "gec/edit_extraction.h"

#include <algorithm>
#include <array>
#include <limits>
#include <set>
#include <unordered_set>

#include "gec/text_util.h"
#include "lexicon_data.h"

namespace gec {
namespace {

std::vector<std::string> ParseWordList(std::string_view text,
                                       std::string* version) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) {
      line.remove_suffix(1);
    }
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kVersion = "# version:";
      if (version != nullptr && line.starts_with(kVersion)) {
        std::string_view v = line.substr(kVersion.size());
        while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
        *version = std::string(v);
      }
      continue;
    }
    out.emplace_back(line);
  }
  return out;
}

class WordSet {
 public:
  explicit WordSet(const std::vector<std::string>& words)
      : words_(words.begin(), words.end()) {}
  bool Contains(const std::string& lower) const {
    return words_.count(lower) > 0;
  }

 private:
  std::unordered_set<std::string> words_;
};

struct CompiledLexicon {
  WordSet determiners;
  WordSet prepositions;
  WordSet conjunctions;
  WordSet subject_pronouns;
  WordSet verbs;
  std::vector<std::string> punctuation;

  explicit CompiledLexicon(const Lexicon& lex)
      : determiners(lex.determiners),
        prepositions(lex.prepositions),
        conjunctions(lex.conjunctions),
        subject_pronouns(lex.subject_pronouns),
        verbs(lex.verbs),
        punctuation(lex.punctuation) {
    // Longest entries first so multi-byte marks win over their lead bytes.
    std::sort(punctuation.begin(), punctuation.end(),
              [](const std::string& a, const std::string& b) {
                return a.size() > b.size();
              });
  }

  bool IsPunctuation(std::string_view token) const {
    if (token.empty()) return false;
    while (!token.empty()) {
      bool matched = false;
      for (const std::string& mark : punctuation) {
        if (token.starts_with(mark)) {
          token.remove_prefix(mark.size());
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  }
};

const CompiledLexicon& Compiled() {
  static const CompiledLexicon* lex = new CompiledLexicon(BuiltinLexicon());
  return *lex;
}

// Base forms `word` could be an inflection of, including itself.
std::set<std::string> CandidateStems(const std::string& word) {
  std::set<std::string> stems{word};
  auto strip = [&](std::string_view suffix, std::string_view restore) {
    if (word.size() > suffix.size() + 1 && word.ends_with(suffix)) {
      std::string base = word.substr(0, word.size() - suffix.size());
      stems.insert(base + std::string(restore));
      // stopped -> stop, running -> run, forbidden -> forbid
      const std::size_t n = base.size();
      if (restore.empty() && n >= 2 && base[n - 1] == base[n - 2]) {
        stems.insert(base.substr(0, n - 1));
      }
    }
  };
  for (std::string_view suffix : {"s", "es", "ed", "ing", "en", "d", "n"}) {
    strip(suffix, "");
  }
  strip("ing", "e");  // making -> make
  strip("ies", "y");
  strip("ied", "y");
  return stems;
}

bool IsThirdPersonPair(const std::string& base, const std::string& other) {
  if (other == base + "s" || other == base + "es") return true;
  return base.size() > 1 && base.back() == 'y' &&
         other == base.substr(0, base.size() - 1) + "ies";
}

bool IsNumberPair(const std::string& a, const std::string& b) {
  return IsThirdPersonPair(a, b) || IsThirdPersonPair(b, a);
}

bool IsIrregularAgreementPair(const std::string& a, const std::string& b) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 5>
      kPairs = {{{"have", "has"},
                 {"is", "are"},
                 {"was", "were"},
                 {"do", "does"},
                 {"am", "is"}}};
  for (const auto& [x, y] : kPairs) {
    if ((a == x && b == y) || (a == y && b == x)) return true;
  }
  return false;
}

bool IsInflectionPair(const std::string& a, const std::string& b) {
  if (a == b) return false;
  std::set<std::string> sa = CandidateStems(a);
  std::set<std::string> sb = CandidateStems(b);
  for (const std::string& s : sa) {
    if (s.size() >= 2 && sb.count(s) > 0) return true;
  }
  return false;
}

bool IsPastTensePair(const std::string& a, const std::string& b) {
  auto past_of = [](const std::string& base, const std::string& other) {
    if (!other.ends_with("ed") && !other.ends_with("d")) return false;
    return CandidateStems(other).count(base) > 0 && base != other;
  };
  return past_of(a, b) || past_of(b, a);
}

std::size_t CommonPrefix(std::string_view a, std::string_view b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

bool IsSpelling(const std::string& a, const std::string& b) {
  return a.size() >= 4 && b.size() >= 4 && a.front() == b.front() &&
         CharacterLevenshtein(a, b) <= 2;
}

bool IsDerivationPair(const std::string& a, const std::string& b) {
  const std::size_t shorter = std::min(a.size(), b.size());
  const std::size_t prefix = CommonPrefix(a, b);
  return a != b && prefix >= 3 && 2 * prefix >= shorter;
}

std::string NormalizePos(std::string_view tag) {
  if (tag == "PROPN") return "NOUN";
  if (tag == "AUX") return "VERB";
  return std::string(tag);
}

// Shared POS of every token in the edit, or empty if they differ or fall
// outside the open classes.
std::string OpenClassPos(const std::vector<std::string>& tags) {
  if (tags.empty()) return "";
  std::string first = NormalizePos(tags.front());
  for (const std::string& t : tags) {
    if (NormalizePos(t) != first) return "";
  }
  if (first == "NOUN" || first == "VERB" || first == "ADJ" || first == "ADV") {
    return first;
  }
  return "";
}

bool AllIn(const std::vector<std::string>& lower_tokens, const WordSet& set) {
  return !lower_tokens.empty() &&
         std::all_of(lower_tokens.begin(), lower_tokens.end(),
                     [&](const std::string& t) { return set.Contains(t); });
}

struct EditView {
  std::vector<std::string> orig;
  std::vector<std::string> cor;
  std::vector<std::string> orig_pos;
  std::vector<std::string> cor_pos;
  std::string preceding;  // lowercased source token before the span
};

std::string ClassifyCategory(const EditView& v) {
  const CompiledLexicon& lex = Compiled();
  std::vector<std::string> all;
  for (const auto& t : v.orig) all.push_back(ToLower(t));
  for (const auto& t : v.cor) all.push_back(ToLower(t));

  if (std::all_of(v.orig.begin(), v.orig.end(),
                  [&](const std::string& t) { return lex.IsPunctuation(t); }) &&
      std::all_of(v.cor.begin(), v.cor.end(),
                  [&](const std::string& t) { return lex.IsPunctuation(t); })) {
    return "PUNCT";
  }
  if (AllIn(all, lex.determiners)) return "DET";
  if (AllIn(all, lex.prepositions)) return "PREP";
  if (AllIn(all, lex.conjunctions)) return "CONJ";

  const bool replacement = !v.orig.empty() && !v.cor.empty();
  if (replacement && ToLower(JoinTokens(v.orig)) == ToLower(JoinTokens(v.cor))) {
    return "ORTH";
  }

  const bool single = v.orig.size() == 1 && v.cor.size() == 1;
  const std::string a = single ? ToLower(v.orig[0]) : "";
  const std::string b = single ? ToLower(v.cor[0]) : "";

  std::vector<std::string> all_pos = v.orig_pos;
  all_pos.insert(all_pos.end(), v.cor_pos.begin(), v.cor_pos.end());
  const bool have_pos = all_pos.size() == v.orig.size() + v.cor.size();
  const std::string pos = have_pos ? OpenClassPos(all_pos) : "";
  if (!pos.empty()) {
    if (single) {
      if (pos == "NOUN" && IsNumberPair(a, b)) return "NOUN:NUM";
      if (pos == "VERB") {
        if (IsNumberPair(a, b) || IsIrregularAgreementPair(a, b)) {
          return "VERB:SVA";
        }
        if (IsPastTensePair(a, b)) return "VERB:TENSE";
        if (IsInflectionPair(a, b)) return "VERB:FORM";
      }
      if (IsSpelling(a, b)) return "SPELL";
      if (IsDerivationPair(a, b)) return "MORPH";
    }
    return pos;
  }

  if (!single) return "OTHER";
  if (IsNumberPair(a, b)) {
    const std::string& base = a.size() < b.size() ? a : b;
    const bool verb_context = lex.subject_pronouns.Contains(v.preceding) ||
                              lex.verbs.Contains(base);
    return verb_context ? "VERB:SVA" : "NOUN:NUM";
  }
  if (IsIrregularAgreementPair(a, b)) return "VERB:SVA";
  if (IsInflectionPair(a, b)) return "VERB:FORM";
  if (IsSpelling(a, b)) return "SPELL";
  if (IsDerivationPair(a, b)) return "MORPH";
  return "OTHER";
}

ErrorTag ClassifySpan(int src_start, int src_end, int hyp_start, int hyp_end,
                      const Sentence& source, const Sentence& hypothesis,
                      const PosTags* pos) {
  EditView v;
  for (int i = src_start; i < src_end; ++i) v.orig.push_back(source[i]);
  for (int j = hyp_start; j < hyp_end; ++j) v.cor.push_back(hypothesis[j]);
  if (src_start > 0) v.preceding = ToLower(source[src_start - 1]);
  if (pos != nullptr) {
    if (pos->source.size() == source.size()) {
      for (int i = src_start; i < src_end; ++i) {
        v.orig_pos.push_back(pos->source[i]);
      }
    }
    if (pos->hypothesis.size() == hypothesis.size() && hyp_start >= 0) {
      for (int j = hyp_start; j < hyp_end; ++j) {
        v.cor_pos.push_back(pos->hypothesis[j]);
      }
    }
  }
  Operation op = Operation::kReplacement;
  if (v.orig.empty()) op = Operation::kMissing;
  if (v.cor.empty()) op = Operation::kUnnecessary;
  return {op, ClassifyCategory(v)};
}

std::vector<std::vector<int>> CostTable(const Sentence& s, const Sentence& h) {
  const std::size_t n = s.size();
  const std::size_t m = h.size();
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i) cost[i][0] = cost[i - 1][0] + align_cost::kIndel;
  for (std::size_t j = 1; j <= m; ++j) cost[0][j] = cost[0][j - 1] + align_cost::kIndel;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      int best = cost[i - 1][j - 1] + SubstitutionCost(s[i - 1], h[j - 1]);
      best = std::min(best, cost[i - 1][j] + align_cost::kIndel);
      best = std::min(best, cost[i][j - 1] + align_cost::kIndel);
      if (i >= 2 && j >= 2 && s[i - 2] == h[j - 1] && s[i - 1] == h[j - 2] &&
          s[i - 2] != s[i - 1]) {
        best = std::min(best, cost[i - 2][j - 2] + align_cost::kTranspose);
      }
      cost[i][j] = best;
    }
  }
  return cost;
}

}  // namespace

const Lexicon& BuiltinLexicon() {
  static const Lexicon* lex = [] {
    auto* l = new Lexicon;
    l->determiners = ParseWordList(lexicon_data::kDeterminers, &l->version);
    l->prepositions = ParseWordList(lexicon_data::kPrepositions, nullptr);
    l->conjunctions = ParseWordList(lexicon_data::kConjunctions, nullptr);
    l->punctuation = ParseWordList(lexicon_data::kPunctuation, nullptr);
    l->subject_pronouns =
        ParseWordList(lexicon_data::kSubjectPronouns, nullptr);
    l->verbs = ParseWordList(lexicon_data::kVerbs, nullptr);
    return l;
  }();
  return *lex;
}

const std::vector<std::string>& KnownCategories() {
  static const std::vector<std::string> kCategories = {
      "ADJ",  "ADV",      "CONJ",      "DET",       "MORPH",      "NOUN",
      "NOUN:NUM", "ORTH", "OTHER",     "PREP",      "PUNCT",      "SPELL",
      "VERB", "VERB:FORM", "VERB:SVA", "VERB:TENSE"};
  return kCategories;
}

int CharacterLevenshtein(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1);
  std::vector<int> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

int SubstitutionCost(std::string_view a, std::string_view b) {
  if (a == b) return align_cost::kMatch;
  if (ToLower(a) == ToLower(b)) return align_cost::kCaseOnly;
  std::string_view shorter = a.size() <= b.size() ? a : b;
  std::string_view longer = a.size() <= b.size() ? b : a;
  if (longer.starts_with(shorter) && 2 * shorter.size() >= longer.size()) {
    return align_cost::kPrefix;
  }
  return align_cost::kSubstitute;
}

int AlignmentCost(const Sentence& source, const Sentence& hypothesis) {
  return CostTable(source, hypothesis)[source.size()][hypothesis.size()];
}

std::vector<AlignmentOp> Align(const Sentence& s, const Sentence& h) {
  const auto cost = CostTable(s, h);
  std::vector<AlignmentOp> reversed;
  int i = static_cast<int>(s.size());
  int j = static_cast<int>(h.size());
  while (i > 0 || j > 0) {
    const int here = cost[i][j];
    if (i > 0 && j > 0 && s[i - 1] == h[j - 1] && here == cost[i - 1][j - 1]) {
      reversed.push_back({AlignKind::kMatch, {i - 1, i}, {j - 1, j}});
      --i;
      --j;
    } else if (i > 0 && j > 0 &&
               here == cost[i - 1][j - 1] + SubstitutionCost(s[i - 1], h[j - 1])) {
      reversed.push_back({AlignKind::kSubstitute, {i - 1, i}, {j - 1, j}});
      --i;
      --j;
    } else if (i >= 2 && j >= 2 && s[i - 2] == h[j - 1] &&
               s[i - 1] == h[j - 2] && s[i - 2] != s[i - 1] &&
               here == cost[i - 2][j - 2] + align_cost::kTranspose) {
      reversed.push_back({AlignKind::kTranspose, {i - 2, i}, {j - 2, j}});
      i -= 2;
      j -= 2;
    } else if (i > 0 && here == cost[i - 1][j] + align_cost::kIndel) {
      reversed.push_back({AlignKind::kDelete, {i - 1, i}, {j, j}});
      --i;
    } else {
      reversed.push_back({AlignKind::kInsert, {i, i}, {j - 1, j}});
      --j;
    }
  }

  std::vector<AlignmentOp> ops;
  for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
    if (it->kind == AlignKind::kMatch && !ops.empty() &&
        ops.back().kind == AlignKind::kMatch) {
      ops.back().source.end = it->source.end;
      ops.back().hyp.end = it->hyp.end;
    } else {
      ops.push_back(*it);
    }
  }
  return ops;
}

std::vector<Edit> ExtractEdits(const Sentence& source,
                               const Sentence& hypothesis,
                               const PosTags* pos) {
  std::vector<Edit> edits;
  std::vector<AlignmentOp> ops = Align(source, hypothesis);
  std::size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].kind == AlignKind::kMatch) {
      ++k;
      continue;
    }
    const AlignmentOp& first = ops[k];
    std::size_t last = k;
    while (last + 1 < ops.size() && ops[last + 1].kind != AlignKind::kMatch) {
      ++last;
    }
    Edit edit;
    edit.start = first.source.start;
    edit.end = ops[last].source.end;
    for (int j = first.hyp.start; j < ops[last].hyp.end; ++j) {
      edit.replacement.push_back(hypothesis[j]);
    }
    edit.tag = ClassifySpan(edit.start, edit.end, first.hyp.start,
                            ops[last].hyp.end, source, hypothesis, pos);
    edits.push_back(std::move(edit));
    k = last + 1;
  }
  return edits;
}

ErrorTag Classify(const Edit& edit, const Sentence& source,
                  const Sentence& hypothesis, const PosTags* pos) {
  if (edit.start < 0 || edit.start > edit.end ||
      edit.end > static_cast<int>(source.size())) {
    throw ContractViolation("edit span out of range for classification");
  }
  // Locate the replacement inside the hypothesis so hypothesis-side POS tags
  // line up. Edits that are not part of the extracted set fall back to a
  // single-edit splice with source-side tags only.
  int offset = 0;
  for (const Edit& e : ExtractEdits(source, hypothesis)) {
    if (e.SameCorrection(edit)) {
      const int hyp_start = e.start + offset;
      return ClassifySpan(edit.start, edit.end, hyp_start,
                          hyp_start + static_cast<int>(edit.replacement.size()),
                          source, hypothesis, pos);
    }
    offset += static_cast<int>(e.replacement.size()) - (e.end - e.start);
  }
  PosTags source_only;
  if (pos != nullptr) source_only.source = pos->source;
  Sentence spliced = ApplyEdits(source, std::span<const Edit>(&edit, 1));
  return ClassifySpan(edit.start, edit.end, edit.start,
                      edit.start + static_cast<int>(edit.replacement.size()),
                      source, spliced, pos != nullptr ? &source_only : nullptr);
}

}  // namespace gec
