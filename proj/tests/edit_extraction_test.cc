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

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "gec/edit_extraction.h"

namespace gec {
namespace {

Sentence S(const char* text) { return Sentence::FromText(text); }

std::string TagOf(const char* src, const char* hyp) {
  const std::vector<Edit> edits = ExtractEdits(S(src), S(hyp));
  if (edits.size() != 1) return "<" + std::to_string(edits.size()) + " edits>";
  return edits[0].tag.ToString();
}

Sentence RandomSentence(std::mt19937& rng, int max_len) {
  static const std::vector<std::string> kVocab = {
      "the", "a",  "cat", "cats", "go",  "goes", "went", "He",  "he",
      ".",   ",",  "in",  "on",   "and", "recieve", "receive", "happy",
      "happiness", "run", "running", "I", "is", "are"};
  std::vector<std::string> toks;
  const int n = static_cast<int>(rng() % (max_len + 1));
  for (int i = 0; i < n; ++i) toks.push_back(kVocab[rng() % kVocab.size()]);
  return Sentence(toks);
}

// Random (source, hypothesis) pairs; half of the hypotheses are small
// perturbations of the source, half are unrelated.
std::vector<std::pair<Sentence, Sentence>> RandomPairs(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<std::pair<Sentence, Sentence>> out;
  for (int i = 0; i < count; ++i) {
    Sentence src = RandomSentence(rng, 12);
    Sentence hyp;
    if (i % 2 == 0) {
      std::vector<std::string> toks = src.tokens();
      const int changes = 1 + static_cast<int>(rng() % 3);
      for (int c = 0; c < changes; ++c) {
        const int op = static_cast<int>(rng() % 4);
        const std::size_t at = toks.empty() ? 0 : rng() % (toks.size() + 1);
        if (op == 0 || toks.empty()) {
          toks.insert(toks.begin() + at, "ins" + std::to_string(c));
        } else if (op == 1 && at < toks.size()) {
          toks.erase(toks.begin() + at);
        } else if (op == 2 && at < toks.size()) {
          toks[at] = "sub" + std::to_string(c);
        } else if (at + 1 < toks.size()) {
          std::swap(toks[at], toks[at + 1]);
        }
      }
      hyp = Sentence(toks);
    } else {
      hyp = RandomSentence(rng, 12);
    }
    out.emplace_back(src, hyp);
  }
  return out;
}

TEST(AlignTest, SingleDifferingToken) {
  const std::vector<AlignmentOp> ops = Align(S("He go home"), S("He goes home"));
  ASSERT_EQ(ops.size(), 3u);
  EXPECT_EQ(ops[0], (AlignmentOp{AlignKind::kMatch, {0, 1}, {0, 1}}));
  EXPECT_EQ(ops[1], (AlignmentOp{AlignKind::kSubstitute, {1, 2}, {1, 2}}));
  EXPECT_EQ(ops[2], (AlignmentOp{AlignKind::kMatch, {2, 3}, {2, 3}}));
}

TEST(AlignTest, IdentityIsOneMatch) {
  const std::vector<AlignmentOp> ops = Align(S("a b c d"), S("a b c d"));
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(ops[0], (AlignmentOp{AlignKind::kMatch, {0, 4}, {0, 4}}));
}

TEST(AlignTest, AdjacentSwapIsTranspose) {
  const std::vector<AlignmentOp> ops = Align(S("a b c"), S("a c b"));
  EXPECT_TRUE(std::any_of(ops.begin(), ops.end(), [](const AlignmentOp& op) {
    return op.kind == AlignKind::kTranspose && op.source == Span{1, 3} &&
           op.hyp == Span{1, 3};
  }));
  EXPECT_EQ(AlignmentCost(S("a b c"), S("a c b")), align_cost::kTranspose);
}

TEST(AlignTest, EmptySides) {
  EXPECT_TRUE(Align(S(""), S("")).empty());
  EXPECT_EQ(AlignmentCost(S(""), S("a b")), 2 * align_cost::kIndel);
  EXPECT_EQ(AlignmentCost(S("a b"), S("")), 2 * align_cost::kIndel);
}

TEST(AlignTest, SubstitutionCosts) {
  EXPECT_EQ(SubstitutionCost("the", "the"), 0);
  EXPECT_EQ(SubstitutionCost("The", "the"), align_cost::kCaseOnly);
  EXPECT_EQ(SubstitutionCost("walk", "walked"), align_cost::kPrefix);
  EXPECT_EQ(SubstitutionCost("cat", "dog"), align_cost::kSubstitute);
}

TEST(AlignTest, CostIsSymmetric) {
  for (const auto& [a, b] : RandomPairs(300, 3)) {
    EXPECT_EQ(AlignmentCost(a, b), AlignmentCost(b, a))
        << a.Join() << " | " << b.Join();
  }
}

TEST(AlignTest, SpansAreContiguousAndCoverBothSides) {
  for (const auto& [a, b] : RandomPairs(300, 5)) {
    int s = 0, h = 0;
    for (const AlignmentOp& op : Align(a, b)) {
      EXPECT_EQ(op.source.start, s);
      EXPECT_EQ(op.hyp.start, h);
      if (op.kind == AlignKind::kMatch) {
        for (int k = 0; k < op.source.end - op.source.start; ++k) {
          EXPECT_EQ(a[op.source.start + k], b[op.hyp.start + k]);
        }
      }
      s = op.source.end;
      h = op.hyp.end;
    }
    EXPECT_EQ(s, static_cast<int>(a.size()));
    EXPECT_EQ(h, static_cast<int>(b.size()));
  }
}

TEST(ExtractEditsTest, SingleSubstitution) {
  const std::vector<Edit> edits = ExtractEdits(S("He go home"), S("He goes home"));
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].start, 1);
  EXPECT_EQ(edits[0].end, 2);
  EXPECT_EQ(edits[0].replacement, std::vector<std::string>{"goes"});
  EXPECT_EQ(edits[0].tag.operation, Operation::kReplacement);
}

TEST(ExtractEditsTest, IdentityHasNoEdits) {
  EXPECT_TRUE(ExtractEdits(S("a b c"), S("a b c")).empty());
  EXPECT_TRUE(ExtractEdits(S(""), S("")).empty());
}

TEST(ExtractEditsTest, AdjacentInsertsMerge) {
  const std::vector<Edit> edits = ExtractEdits(S("I cat"), S("I have a cat"));
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].start, 1);
  EXPECT_EQ(edits[0].end, 1);
  EXPECT_EQ(edits[0].replacement, (std::vector<std::string>{"have", "a"}));
  EXPECT_EQ(edits[0].tag.operation, Operation::kMissing);
}

TEST(ExtractEditsTest, InverseLawOnRandomPairs) {
  for (const auto& [src, hyp] : RandomPairs(500, 17)) {
    const std::vector<Edit> edits = ExtractEdits(src, hyp);
    EXPECT_TRUE(IsCanonicalEditSet(edits));
    EXPECT_EQ(ApplyEdits(src, edits), hyp) << src.Join() << " -> " << hyp.Join();
  }
}

TEST(ClassifyTest, SpecExamples) {
  EXPECT_EQ(TagOf("He go home", "He goes home"), "R:VERB:SVA");
  EXPECT_EQ(TagOf("I saw cat", "I saw the cat"), "M:DET");
  EXPECT_EQ(TagOf("I recieve it", "I receive it"), "R:SPELL");
}

TEST(ClassifyTest, RuleOrder) {
  EXPECT_EQ(TagOf("Hello world", "Hello world ."), "M:PUNCT");
  EXPECT_EQ(TagOf("He , went", "He went"), "U:PUNCT");
  EXPECT_EQ(TagOf("interested on music", "interested in music"), "R:PREP");
  EXPECT_EQ(TagOf("cats or dogs", "cats and dogs"), "R:CONJ");
  EXPECT_EQ(TagOf("i agree", "I agree"), "R:ORTH");
  EXPECT_EQ(TagOf("two apple", "two apples"), "R:NOUN:NUM");
  EXPECT_EQ(TagOf("she walk", "she walks"), "R:VERB:SVA");
  EXPECT_EQ(TagOf("they is", "they are"), "R:VERB:SVA");
  EXPECT_EQ(TagOf("I am walk", "I am walking"), "R:VERB:FORM");
  EXPECT_EQ(TagOf("great happy", "great happiness"), "R:MORPH");
  EXPECT_EQ(TagOf("a big house", "a large house"), "R:OTHER");
}

TEST(ClassifyTest, PosSideChannelOverridesHeuristics) {
  PosTags pos;
  pos.source = {"PRON", "VERB"};
  pos.hypothesis = {"PRON", "VERB"};
  const std::vector<Edit> edits = ExtractEdits(S("I walk"), S("I walked"), &pos);
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].tag.ToString(), "R:VERB:TENSE");

  pos.source = {"DET", "ADJ"};
  pos.hypothesis = {"DET", "ADJ"};
  EXPECT_EQ(ExtractEdits(S("a big"), S("a large"), &pos)[0].tag.ToString(), "R:ADJ");
}

TEST(ClassifyTest, NeverNoopAndAlwaysKnownCategory) {
  const std::vector<std::string>& known = KnownCategories();
  const std::set<std::string> known_set(known.begin(), known.end());
  for (const auto& [src, hyp] : RandomPairs(500, 23)) {
    for (const Edit& e : ExtractEdits(src, hyp)) {
      EXPECT_NE(e.tag.operation, Operation::kNoop);
      EXPECT_NE(e.tag.operation, Operation::kUnknown);
      EXPECT_EQ(known_set.count(e.tag.category), 1u) << e.tag.ToString();
      EXPECT_EQ(Classify(e, src, hyp), e.tag);
    }
  }
}

TEST(ClassifyTest, Table2CategoriesAreEmittable) {
  const std::vector<std::string>& known = KnownCategories();
  for (const char* cat : {"ADJ", "ADV", "DET", "PREP", "PUNCT", "CONJ", "MORPH", "NOUN",
                          "NOUN:NUM", "SPELL", "VERB", "VERB:FORM", "VERB:SVA",
                          "VERB:TENSE", "ORTH", "OTHER"}) {
    EXPECT_NE(std::find(known.begin(), known.end(), cat), known.end()) << cat;
  }
}

TEST(LexiconTest, BuiltinListsAreVersionedAndNonEmpty) {
  const Lexicon& lex = BuiltinLexicon();
  EXPECT_EQ(lex.version, "1");
  EXPECT_FALSE(lex.determiners.empty());
  EXPECT_FALSE(lex.prepositions.empty());
  EXPECT_FALSE(lex.conjunctions.empty());
  EXPECT_FALSE(lex.punctuation.empty());
  EXPECT_NE(std::find(lex.determiners.begin(), lex.determiners.end(), "the"),
            lex.determiners.end());
}

TEST(CharacterLevenshteinTest, Basics) {
  EXPECT_EQ(CharacterLevenshtein("", ""), 0);
  EXPECT_EQ(CharacterLevenshtein("abc", ""), 3);
  EXPECT_EQ(CharacterLevenshtein("recieve", "receive"), 2);
  EXPECT_EQ(CharacterLevenshtein("kitten", "sitting"), 3);
}

}  // namespace
}  // namespace gec
