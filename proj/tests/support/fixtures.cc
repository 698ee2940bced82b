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

#include "fixtures.h"

#include <atomic>
#include <filesystem>
#include <stdexcept>

#include <fmt/format.h>
#include <unistd.h>

#include "gec/edit_extraction.h"
#include "gec/errors.h"

#ifndef GEC_FIXTURE_DIR
#error "GEC_FIXTURE_DIR must be defined"
#endif

namespace gec::testing {

std::string FixturePath(const std::string& relative) {
  return std::string(GEC_FIXTURE_DIR) + "/" + relative;
}

std::string ReadFixture(const std::string& relative) {
  return ReadFile(FixturePath(relative));
}

std::string MakeTempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   fmt::format("gec-test-{}-{}-{}", tag, ::getpid(), counter++);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::vector<std::set<oracle::RawEdit>> ToRaw(
    const std::vector<std::vector<Edit>>& edits) {
  std::vector<std::set<oracle::RawEdit>> out;
  for (const auto& sentence : edits) {
    std::set<oracle::RawEdit> s;
    for (const Edit& e : sentence) {
      std::string repl;
      for (const std::string& t : e.replacement) {
        if (!repl.empty()) repl += ' ';
        repl += t;
      }
      s.insert({e.start, e.end, repl});
    }
    out.push_back(s);
  }
  return out;
}

std::vector<std::vector<Edit>> SyntheticHypEdits(const Corpus& corpus,
                                                 const std::string& hyp_file) {
  const std::vector<Sentence> hyps = ParseSentenceLines(ReadFixture(hyp_file));
  if (hyps.size() != corpus.size()) throw std::runtime_error("fixture mismatch");
  std::vector<std::vector<Edit>> out;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    out.push_back(ExtractEdits(corpus.sentences[i].source, hyps[i]));
  }
  return out;
}

PairedContributions OneExtraTpFixture(std::size_t sentences) {
  PairedContributions p;
  for (std::size_t i = 0; i < sentences; ++i) {
    const double base = static_cast<double>(i % 3);
    const double fp = static_cast<double>(i % 2);
    p.a.push_back({base + 1, fp, 1});
    p.b.push_back({base, fp, 2});
  }
  return p;
}

namespace {

Verdict Other(Verdict v) {
  switch (v) {
    case Verdict::kGoldPreferred:
      return Verdict::kModelPreferred;
    case Verdict::kModelPreferred:
      return Verdict::kEquallyValid;
    case Verdict::kEquallyValid:
      return Verdict::kGoldPreferred;
  }
  return Verdict::kEquallyValid;
}

std::string Answer(Verdict v, PanelOrder order, std::size_t style) {
  const OptionChoice c = OptionFromVerdict(v, order);
  const std::string token = c == OptionChoice::kOptionA   ? "A"
                            : c == OptionChoice::kOptionB ? "B"
                                                          : "TIE";
  switch (style % 3) {
    case 0:
      return token;
    case 1:
      return token + ".";
    default:
      return " " + token + "\nThe chosen option reads more naturally.";
  }
}

}  // namespace

ReplayFixture BuildReplayFixture(const ReplayPlan& plan, std::uint64_t seed) {
  const std::size_t consensus =
      plan.consensus_model + plan.consensus_equal + plan.consensus_gold;
  const std::size_t escalated = plan.human_model + plan.human_equal + plan.human_gold;
  if (consensus + escalated != plan.total) {
    throw std::invalid_argument("replay plan does not add up");
  }
  ReplayFixture f;
  for (std::size_t i = 0; i < plan.total; ++i) {
    const std::string tag = fmt::format("w{}", i);
    f.sources.push_back(Sentence::FromText("sentence " + tag + " contain a error ."));
    f.golds.push_back(Sentence::FromText("sentence " + tag + " contains an error ."));
    f.models.push_back(Sentence::FromText("sentence " + tag + " contains one error ."));
  }
  const std::vector<JudgeCase> cases = BuildCases(f.sources, f.golds, f.models, seed);
  if (cases.size() != plan.total) throw std::logic_error("unexpected case count");

  const std::size_t disagreement_stride =
      plan.human_disagreements == 0 ? 0 : escalated / plan.human_disagreements;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const JudgeCase& c = cases[i];
    Verdict intended;
    if (i < plan.consensus_model) {
      intended = Verdict::kModelPreferred;
    } else if (i < plan.consensus_model + plan.consensus_equal) {
      intended = Verdict::kEquallyValid;
    } else if (i < consensus) {
      intended = Verdict::kGoldPreferred;
    } else {
      const std::size_t j = i - consensus;
      intended = j < plan.human_model                    ? Verdict::kModelPreferred
                 : j < plan.human_model + plan.human_equal ? Verdict::kEquallyValid
                                                           : Verdict::kGoldPreferred;
    }
    f.intended[c.id] = intended;
    if (i < consensus) {
      f.answers[c.id] = {Answer(intended, c.panel_order, i),
                         Answer(intended, c.panel_order, i + 1)};
      continue;
    }
    const std::size_t j = i - consensus;
    std::string second = Answer(Other(intended), c.panel_order, i + 1);
    if (j < plan.transport_failures) {
      second = "!error";
    } else if (j < plan.transport_failures + plan.unparseable) {
      second = "Both options look acceptable to me.";
    }
    f.answers[c.id] = {Answer(intended, c.panel_order, i), second};
    const bool disagree = disagreement_stride != 0 &&
                          j % disagreement_stride == 0 &&
                          j / disagreement_stride < plan.human_disagreements;
    if (disagree) {
      f.human[c.id] = {intended, Other(intended)};
      f.resolution[c.id] = intended;
    } else {
      f.human[c.id] = {intended, intended};
    }
  }
  return f;
}

ScriptedJudgeClient ReplayJudge(const ReplayFixture& fixture, bool second) {
  const auto* answers = &fixture.answers;
  return ScriptedJudgeClient(second ? "judge_b" : "judge_a",
                             [answers, second](const JudgeRequest& r) -> std::string {
                               const auto& pair = answers->at(r.case_id);
                               const std::string& a = second ? pair.second : pair.first;
                               if (a == "!error") throw ProviderError("connection reset");
                               return a;
                             });
}

std::vector<JudgeCase> ReplayInMemory(const ReplayFixture& fixture, std::uint64_t seed) {
  std::vector<JudgeCase> cases =
      BuildCases(fixture.sources, fixture.golds, fixture.models, seed);
  ScriptedJudgeClient a = ReplayJudge(fixture, false);
  ScriptedJudgeClient b = ReplayJudge(fixture, true);
  RunLlmStage(cases, a, b);
  for (JudgeCase& c : cases) {
    if (c.status != CaseStatus::kPendingHuman) continue;
    const auto& [first, second] = fixture.human.at(c.id);
    RecordHumanVerdict(c, "ann1", first);
    RecordHumanVerdict(c, "ann2", second);
    if (c.status == CaseStatus::kPendingDiscussion) {
      RecordResolution(c, fixture.resolution.at(c.id));
    }
  }
  return cases;
}

}  // namespace gec::testing
