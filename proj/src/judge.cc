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

#include "gec/judge.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>

#include <json.hpp>

#include "gec/digest.h"
#include "gec/parallel.h"
#include "lexicon_data.h"

namespace gec {
namespace {

using json = nlohmann::json;

constexpr std::string_view kTransportFailure = "!error";

double Percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0
                    : 100.0 * static_cast<double>(part) /
                          static_cast<double>(whole);
}

std::string ReplaceAll(std::string text, std::string_view from,
                       std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

std::optional<AgreementStats> PairedKappa(
    std::span<const JudgeCase> cases,
    const std::map<std::string, Verdict> JudgeCase::*field) {
  std::vector<std::string> first;
  std::vector<std::string> second;
  for (const JudgeCase& c : cases) {
    const auto& verdicts = c.*field;
    if (verdicts.size() != 2) continue;
    first.emplace_back(VerdictName(verdicts.begin()->second));
    second.emplace_back(VerdictName(std::next(verdicts.begin())->second));
  }
  if (first.empty()) return std::nullopt;
  return CohenKappa(first, second);
}

OutcomeSummary Tally(std::span<const JudgeCase> cases) {
  OutcomeSummary s;
  s.total_cases = cases.size();
  for (const JudgeCase& c : cases) {
    switch (c.status) {
      case CaseStatus::kPendingLlm:
        ++s.pending_llm;
        break;
      case CaseStatus::kConsensusFinal:
        ++s.consensus_count;
        break;
      case CaseStatus::kPendingHuman:
        ++s.escalated_count;
        ++s.pending_human;
        break;
      case CaseStatus::kPendingDiscussion:
        ++s.escalated_count;
        ++s.pending_discussion;
        break;
      case CaseStatus::kResolved:
        ++s.escalated_count;
        ++s.resolved_escalations;
        break;
    }
    if (c.final_verdict.has_value()) {
      switch (*c.final_verdict) {
        case Verdict::kGoldPreferred:
          ++s.gold_preferred;
          break;
        case Verdict::kModelPreferred:
          ++s.model_preferred;
          break;
        case Verdict::kEquallyValid:
          ++s.equally_valid;
          break;
      }
    }
  }
  const std::size_t finalized =
      s.gold_preferred + s.model_preferred + s.equally_valid;
  s.consensus_rate = Percent(s.consensus_count, s.total_cases) / 100.0;
  s.escalation_rate = Percent(s.escalated_count, s.total_cases) / 100.0;
  s.escalation_progress =
      Percent(s.resolved_escalations, s.escalated_count) / 100.0;
  s.gold_preferred_pct = Percent(s.gold_preferred, finalized);
  s.model_preferred_pct = Percent(s.model_preferred, finalized);
  s.equally_valid_pct = Percent(s.equally_valid, finalized);
  s.valid_or_preferred_pct =
      Percent(s.model_preferred + s.equally_valid, finalized);
  s.judge_kappa = PairedKappa(cases, &JudgeCase::llm_verdicts);
  s.human_kappa = PairedKappa(cases, &JudgeCase::human_verdicts);
  s.workload_reduction = s.consensus_rate;
  return s;
}

LlmOutcome JudgeOne(const JudgeCase& c, JudgeClient& judge_a,
                    JudgeClient& judge_b, const LlmStageOptions& options) {
  LlmOutcome outcome;
  const std::string prompt = RenderPrompt(options.prompt_template, c);
  for (JudgeClient* judge : {&judge_a, &judge_b}) {
    const std::string judge_id = judge->id();
    std::string last_error;
    for (int attempt = 0; attempt <= options.retries; ++attempt) {
      try {
        std::string completion = judge->Complete({c.id, prompt, attempt});
        outcome.raw[judge_id] = completion;
        if (std::optional<OptionChoice> choice = ParseJudgeAnswer(completion)) {
          outcome.verdicts[judge_id] = VerdictFromOption(*choice, c.panel_order);
          last_error.clear();
          break;
        }
        last_error = judge_id + ": unparseable answer";
      } catch (const std::exception& e) {
        last_error = judge_id + ": " + e.what();
      }
    }
    if (!last_error.empty()) {
      if (!outcome.error.empty()) outcome.error += "; ";
      outcome.error += last_error;
    }
  }
  return outcome;
}

}  // namespace

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kGoldPreferred:
      return "GoldPreferred";
    case Verdict::kModelPreferred:
      return "ModelPreferred";
    case Verdict::kEquallyValid:
      return "EquallyValid";
  }
  return "EquallyValid";
}

std::optional<Verdict> ParseVerdictName(std::string_view name) {
  if (name == "GoldPreferred") return Verdict::kGoldPreferred;
  if (name == "ModelPreferred") return Verdict::kModelPreferred;
  if (name == "EquallyValid") return Verdict::kEquallyValid;
  return std::nullopt;
}

std::string_view PanelOrderName(PanelOrder p) {
  return p == PanelOrder::kGoldFirst ? "gold_first" : "model_first";
}

std::optional<PanelOrder> ParsePanelOrderName(std::string_view name) {
  if (name == "gold_first") return PanelOrder::kGoldFirst;
  if (name == "model_first") return PanelOrder::kModelFirst;
  return std::nullopt;
}

std::string_view OptionToken(OptionChoice c) {
  switch (c) {
    case OptionChoice::kOptionA:
      return "OPTION_A";
    case OptionChoice::kOptionB:
      return "OPTION_B";
    case OptionChoice::kTie:
      return "TIE";
  }
  return "TIE";
}

std::optional<OptionChoice> ParseOptionToken(std::string_view token) {
  if (token == "OPTION_A") return OptionChoice::kOptionA;
  if (token == "OPTION_B") return OptionChoice::kOptionB;
  if (token == "TIE") return OptionChoice::kTie;
  return std::nullopt;
}

Verdict VerdictFromOption(OptionChoice choice, PanelOrder order) {
  if (choice == OptionChoice::kTie) return Verdict::kEquallyValid;
  const bool picked_first = choice == OptionChoice::kOptionA;
  const bool gold_first = order == PanelOrder::kGoldFirst;
  return picked_first == gold_first ? Verdict::kGoldPreferred
                                    : Verdict::kModelPreferred;
}

OptionChoice OptionFromVerdict(Verdict verdict, PanelOrder order) {
  if (verdict == Verdict::kEquallyValid) return OptionChoice::kTie;
  const bool gold = verdict == Verdict::kGoldPreferred;
  const bool gold_first = order == PanelOrder::kGoldFirst;
  return gold == gold_first ? OptionChoice::kOptionA : OptionChoice::kOptionB;
}

std::string_view CaseStatusName(CaseStatus s) {
  switch (s) {
    case CaseStatus::kPendingLlm:
      return "PendingLLM";
    case CaseStatus::kConsensusFinal:
      return "ConsensusFinal";
    case CaseStatus::kPendingHuman:
      return "PendingHuman";
    case CaseStatus::kPendingDiscussion:
      return "PendingDiscussion";
    case CaseStatus::kResolved:
      return "Resolved";
  }
  return "PendingLLM";
}

std::optional<CaseStatus> ParseCaseStatusName(std::string_view name) {
  for (CaseStatus s : {CaseStatus::kPendingLlm, CaseStatus::kConsensusFinal,
                       CaseStatus::kPendingHuman, CaseStatus::kPendingDiscussion,
                       CaseStatus::kResolved}) {
    if (CaseStatusName(s) == name) return s;
  }
  return std::nullopt;
}

std::string CaseContentHash(const Sentence& source, const Sentence& gold,
                            const Sentence& model) {
  std::string key = source.Join();
  key += '\x1f';
  key += gold.Join();
  key += '\x1f';
  key += model.Join();
  return Sha256Hex(key).substr(0, 16);
}

std::vector<JudgeCase> BuildCases(std::span<const Sentence> sources,
                                  std::span<const Sentence> golds,
                                  std::span<const Sentence> models,
                                  std::uint64_t seed) {
  if (sources.size() != golds.size() || sources.size() != models.size()) {
    throw ContractViolation("sources, golds and hypotheses differ in length");
  }
  std::vector<JudgeCase> cases;
  std::map<std::string, int> occurrences;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (golds[i].Join() == models[i].Join()) continue;
    JudgeCase c;
    c.index = i;
    c.source = sources[i];
    c.gold = golds[i];
    c.model = models[i];
    c.id = CaseContentHash(c.source, c.gold, c.model);
    const int seen = ++occurrences[c.id];
    if (seen > 1) c.id += "-" + std::to_string(seen);
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(StableHash64(c.id)),
                      static_cast<std::uint32_t>(StableHash64(c.id) >> 32)};
    std::mt19937_64 rng(seq);
    c.panel_order = (rng() & 1u) ? PanelOrder::kModelFirst
                                 : PanelOrder::kGoldFirst;
    cases.push_back(std::move(c));
  }
  return cases;
}

ScriptedJudgeClient ScriptedJudgeClient::FromJson(std::string id,
                                                  std::string_view text) {
  json script;
  try {
    script = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad judge script: ") + e.what());
  }
  if (!script.is_object()) throw ConfigError("judge script must be an object");
  std::string fallback = script.value("default", std::string("TIE"));
  std::map<std::string, std::vector<std::string>> per_case;
  if (script.contains("responses")) {
    for (const auto& [case_id, value] : script["responses"].items()) {
      if (value.is_string()) {
        per_case[case_id] = {value.get<std::string>()};
      } else if (value.is_array() && !value.empty()) {
        per_case[case_id] = value.get<std::vector<std::string>>();
      } else {
        throw ConfigError("bad scripted response for case " + case_id);
      }
    }
  }
  return ScriptedJudgeClient(
      std::move(id),
      [fallback, per_case](const JudgeRequest& request) -> std::string {
        auto it = per_case.find(request.case_id);
        if (it == per_case.end()) return fallback;
        const auto& answers = it->second;
        const std::size_t k = std::min<std::size_t>(
            static_cast<std::size_t>(request.attempt), answers.size() - 1);
        return answers[k];
      });
}

std::string ScriptedJudgeClient::Complete(const JudgeRequest& request) {
  std::string answer = responder_(request);
  if (answer == kTransportFailure) {
    throw ProviderError("scripted transport failure for case " + request.case_id);
  }
  return answer;
}

std::string_view DefaultPromptTemplate() { return lexicon_data::kJudgePrompt; }

std::string RenderPrompt(std::string_view tmpl, const JudgeCase& c) {
  std::string out(tmpl);
  out = ReplaceAll(std::move(out), "{source}", c.source.Join());
  out = ReplaceAll(std::move(out), "{option_a}", c.option_a().Join());
  out = ReplaceAll(std::move(out), "{option_b}", c.option_b().Join());
  return out;
}

std::optional<OptionChoice> ParseJudgeAnswer(std::string_view completion) {
  std::size_t i = 0;
  while (i < completion.size() &&
         std::isspace(static_cast<unsigned char>(completion[i]))) {
    ++i;
  }
  std::size_t j = i;
  while (j < completion.size() &&
         !std::isspace(static_cast<unsigned char>(completion[j]))) {
    ++j;
  }
  std::string token;
  for (char ch : completion.substr(i, j - i)) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::ispunct(u)) continue;
    token += static_cast<char>(std::toupper(u));
  }
  if (token == "A") return OptionChoice::kOptionA;
  if (token == "B") return OptionChoice::kOptionB;
  if (token == "TIE") return OptionChoice::kTie;
  return std::nullopt;
}

void ApplyLlmOutcome(JudgeCase& c, const LlmOutcome& outcome) {
  if (c.status != CaseStatus::kPendingLlm) {
    throw JudgeError(JudgeErrorCode::kWrongState,
                     "case " + c.id + " is not awaiting LLM verdicts");
  }
  c.llm_verdicts = outcome.verdicts;
  c.llm_raw = outcome.raw;
  c.llm_error = outcome.error;
  const bool consensus =
      c.llm_verdicts.size() == 2 &&
      c.llm_verdicts.begin()->second == std::next(c.llm_verdicts.begin())->second;
  if (consensus) {
    c.status = CaseStatus::kConsensusFinal;
    c.final_verdict = c.llm_verdicts.begin()->second;
  } else {
    c.status = CaseStatus::kPendingHuman;
  }
}

std::vector<LlmOutcome> RunLlmStage(std::vector<JudgeCase>& cases,
                                    JudgeClient& judge_a, JudgeClient& judge_b,
                                    const LlmStageOptions& options) {
  if (judge_a.id() == judge_b.id()) {
    throw ConfigError("the two judges need distinct ids");
  }
  for (const JudgeCase& c : cases) {
    if (c.status != CaseStatus::kPendingLlm) {
      throw JudgeError(JudgeErrorCode::kWrongState,
                       "case " + c.id + " is not awaiting LLM verdicts");
    }
  }
  std::vector<LlmOutcome> outcomes(cases.size());
  ParallelFor(cases.size(), options.max_inflight, [&](std::size_t i) {
    outcomes[i] = JudgeOne(cases[i], judge_a, judge_b, options);
  });
  for (std::size_t i = 0; i < cases.size(); ++i) {
    ApplyLlmOutcome(cases[i], outcomes[i]);
  }
  return outcomes;
}

void RecordHumanVerdict(JudgeCase& c, const std::string& annotator_id,
                        Verdict verdict) {
  if (c.status == CaseStatus::kResolved) {
    throw JudgeError(JudgeErrorCode::kAlreadyResolved,
                     "case " + c.id + " is already resolved");
  }
  if (c.status != CaseStatus::kPendingHuman &&
      c.status != CaseStatus::kPendingDiscussion) {
    throw JudgeError(JudgeErrorCode::kWrongState,
                     "case " + c.id + " is " +
                         std::string(CaseStatusName(c.status)) +
                         ", not awaiting human judgment");
  }
  if (c.human_verdicts.count(annotator_id) > 0) {
    throw JudgeError(JudgeErrorCode::kDuplicateJudgment,
                     annotator_id + " already judged case " + c.id);
  }
  if (c.human_verdicts.size() >= kHumanAnnotatorsPerCase) {
    throw JudgeError(JudgeErrorCode::kTooManyAnnotators,
                     "case " + c.id + " already has two human verdicts");
  }
  c.human_verdicts.emplace(annotator_id, verdict);
  if (c.human_verdicts.size() < kHumanAnnotatorsPerCase) return;
  const Verdict first = c.human_verdicts.begin()->second;
  const Verdict second = std::next(c.human_verdicts.begin())->second;
  if (first == second) {
    c.status = CaseStatus::kResolved;
    c.final_verdict = first;
  } else {
    c.status = CaseStatus::kPendingDiscussion;
  }
}

void RecordResolution(JudgeCase& c, Verdict verdict) {
  if (c.status == CaseStatus::kResolved) {
    throw JudgeError(JudgeErrorCode::kAlreadyResolved,
                     "case " + c.id + " is already resolved");
  }
  if (c.status != CaseStatus::kPendingDiscussion) {
    throw JudgeError(JudgeErrorCode::kWrongState,
                     "case " + c.id + " is " +
                         std::string(CaseStatusName(c.status)) +
                         ", not awaiting discussion");
  }
  c.status = CaseStatus::kResolved;
  c.final_verdict = verdict;
}

OutcomeSummary Summarize(std::span<const JudgeCase> cases) {
  std::vector<std::string> pending;
  for (const JudgeCase& c : cases) {
    if (c.status != CaseStatus::kConsensusFinal &&
        c.status != CaseStatus::kResolved) {
      pending.push_back(c.id);
    }
  }
  if (!pending.empty()) {
    throw JudgeError(JudgeErrorCode::kIncomplete,
                     std::to_string(pending.size()) + " cases are unfinished",
                     std::move(pending));
  }
  return Tally(cases);
}

OutcomeSummary SummarizeLive(std::span<const JudgeCase> cases) {
  return Tally(cases);
}

}  // namespace gec
