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

#ifndef GEC_TESTS_SUPPORT_FIXTURES_H_
#define GEC_TESTS_SUPPORT_FIXTURES_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gec/corpus.h"
#include "gec/judge.h"
#include "gec/stats.h"
#include "oracles.h"

namespace gec::testing {

std::string FixturePath(const std::string& relative);
std::string ReadFixture(const std::string& relative);

// A fresh, empty directory under the system temp dir.
std::string MakeTempDir(const std::string& tag);

std::vector<std::set<oracle::RawEdit>> ToRaw(
    const std::vector<std::vector<Edit>>& edits);

// Hypothesis edits for synthetic20.hyp.txt, extracted by the library.
std::vector<std::vector<Edit>> SyntheticHypEdits(const Corpus& corpus,
                                                 const std::string& hyp_file);

// Per-sentence {tp, fp, fn} where system a finds one more TP than b on
// every sentence.
struct PairedContributions {
  std::vector<Contribution> a;
  std::vector<Contribution> b;
};
PairedContributions OneExtraTpFixture(std::size_t sentences);

// Scripted judges plus human verdicts that reproduce a chosen outcome
// distribution over `total` divergent sentences.
struct ReplayPlan {
  std::size_t total = 1730;
  std::size_t consensus_model = 534;
  std::size_t consensus_equal = 237;
  std::size_t consensus_gold = 342;
  std::size_t human_model = 82;
  std::size_t human_equal = 423;
  std::size_t human_gold = 112;
  // Escalated cases whose two annotators disagree before discussion.
  std::size_t human_disagreements = 7;
  // Escalations caused by a transport failure or an unparseable answer.
  std::size_t transport_failures = 5;
  std::size_t unparseable = 5;
};

struct ReplayFixture {
  std::vector<Sentence> sources;
  std::vector<Sentence> golds;
  std::vector<Sentence> models;
  // Intended final verdict per case id.
  std::map<std::string, Verdict> intended;
  // Per case id: judge_a answer, judge_b answer (as raw completions).
  std::map<std::string, std::pair<std::string, std::string>> answers;
  // Per escalated case id: verdicts of annotators "ann1" and "ann2", plus
  // the discussion outcome when they differ.
  std::map<std::string, std::pair<Verdict, Verdict>> human;
  std::map<std::string, Verdict> resolution;
};

ReplayFixture BuildReplayFixture(const ReplayPlan& plan = {},
                                 std::uint64_t seed = 42);

// Scripted clients answering from `fixture.answers`.
ScriptedJudgeClient ReplayJudge(const ReplayFixture& fixture, bool second);

// Runs the LLM stage, both human passes and the discussions in memory.
std::vector<JudgeCase> ReplayInMemory(const ReplayFixture& fixture,
                                      std::uint64_t seed = 42);

}  // namespace gec::testing

#endif  // GEC_TESTS_SUPPORT_FIXTURES_H_
