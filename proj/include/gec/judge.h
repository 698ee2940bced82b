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

// Two-judge adjudication of model corrections that differ from the gold
// correction. Both LLM judges see the pair blinded as "Option A" / "Option B".
// Agreement finalizes a case; disagreement (or an unusable answer) escalates
// it to two human annotators, whose own disagreement is settled by a recorded
// discussion outcome.
//
// Case lifecycle:
//
//   PendingLLM --agree--> ConsensusFinal
//        |
//        +--disagree/unparseable/transport error--> PendingHuman
//                                                      |
//            second human verdict equal --> Resolved <-+
//            second human verdict differs --> PendingDiscussion --> Resolved

#ifndef GEC_JUDGE_H_
#define GEC_JUDGE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gec/corpus.h"
#include "gec/errors.h"
#include "gec/stats.h"

namespace gec {

enum class Verdict { kGoldPreferred, kModelPreferred, kEquallyValid };
std::string_view VerdictName(Verdict v);
std::optional<Verdict> ParseVerdictName(std::string_view name);

enum class PanelOrder { kGoldFirst, kModelFirst };
std::string_view PanelOrderName(PanelOrder p);
std::optional<PanelOrder> ParsePanelOrderName(std::string_view name);

// What a blinded rater picked.
enum class OptionChoice { kOptionA, kOptionB, kTie };
// API tokens: OPTION_A, OPTION_B, TIE.
std::string_view OptionToken(OptionChoice c);
std::optional<OptionChoice> ParseOptionToken(std::string_view token);

Verdict VerdictFromOption(OptionChoice choice, PanelOrder order);
OptionChoice OptionFromVerdict(Verdict verdict, PanelOrder order);

enum class CaseStatus {
  kPendingLlm,
  kConsensusFinal,
  kPendingHuman,
  kPendingDiscussion,
  kResolved
};
std::string_view CaseStatusName(CaseStatus s);
std::optional<CaseStatus> ParseCaseStatusName(std::string_view name);

struct JudgeCase {
  std::string id;
  std::size_t index = 0;  // sentence index in the evaluated corpus
  Sentence source;
  Sentence gold;
  Sentence model;
  PanelOrder panel_order = PanelOrder::kGoldFirst;

  // Audit-only. Judge ids, raw completions and errors are never served to
  // human annotators.
  std::map<std::string, Verdict> llm_verdicts;
  std::map<std::string, std::string> llm_raw;
  std::string llm_error;

  // Keyed by annotator id; retained after discussion.
  std::map<std::string, Verdict> human_verdicts;
  CaseStatus status = CaseStatus::kPendingLlm;
  std::optional<Verdict> final_verdict;

  const Sentence& option_a() const {
    return panel_order == PanelOrder::kGoldFirst ? gold : model;
  }
  const Sentence& option_b() const {
    return panel_order == PanelOrder::kGoldFirst ? model : gold;
  }
};

enum class JudgeErrorCode {
  kUnknownCase,
  kDuplicateJudgment,
  kAlreadyResolved,
  kWrongState,
  kTooManyAnnotators,
  kIncomplete,
};

class JudgeError : public Error {
 public:
  JudgeError(JudgeErrorCode code, const std::string& message,
             std::vector<std::string> pending_ids = {})
      : Error(message), code_(code), pending_ids_(std::move(pending_ids)) {}

  JudgeErrorCode code() const { return code_; }
  // Populated for kIncomplete.
  const std::vector<std::string>& pending_ids() const { return pending_ids_; }

 private:
  JudgeErrorCode code_;
  std::vector<std::string> pending_ids_;
};

// First 16 hex digits of SHA-256 over (source, gold, model).
std::string CaseContentHash(const Sentence& source, const Sentence& gold,
                            const Sentence& model);

// One case per index where gold and model differ. Ids are content hashes;
// a repeated triple gets "-2", "-3", ... appended in corpus order. The panel
// order is a coin flip seeded by (seed, id).
std::vector<JudgeCase> BuildCases(std::span<const Sentence> sources,
                                  std::span<const Sentence> golds,
                                  std::span<const Sentence> models,
                                  std::uint64_t seed = 42);

// ------------------------------------------------------------ LLM stage

struct JudgeRequest {
  std::string case_id;
  std::string prompt;
  int attempt = 0;
};

// A text-completion endpoint acting as a judge. Must be callable from
// several threads at once.
class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual std::string id() const = 0;
  // Throws ProviderError on transport failure.
  virtual std::string Complete(const JudgeRequest& request) = 0;
};

// Deterministic judge driven by a script. Responses may be looked up per
// case id, with a list entry per attempt (the last one repeats). The
// response "!error" simulates a transport failure.
class ScriptedJudgeClient : public JudgeClient {
 public:
  using Responder = std::function<std::string(const JudgeRequest&)>;

  ScriptedJudgeClient(std::string id, Responder responder)
      : id_(std::move(id)), responder_(std::move(responder)) {}

  // {"default": "TIE", "responses": {"<case id>": "A" | ["junk", "B"]}}
  static ScriptedJudgeClient FromJson(std::string id, std::string_view json);

  std::string id() const override { return id_; }
  std::string Complete(const JudgeRequest& request) override;

 private:
  std::string id_;
  Responder responder_;
};

// The bundled prompt template, with {source} {option_a} {option_b}.
std::string_view DefaultPromptTemplate();
std::string RenderPrompt(std::string_view tmpl, const JudgeCase& c);

// Accepts "A", "B" or "TIE" (any case) as the first whitespace-delimited
// token once punctuation is stripped from it.
std::optional<OptionChoice> ParseJudgeAnswer(std::string_view completion);

struct LlmOutcome {
  // Parsed verdict per judge id; absent when unusable after all retries.
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, std::string> raw;
  std::string error;
};

// ConsensusFinal when two judges returned the same verdict, PendingHuman
// otherwise. Throws JudgeError(kWrongState) unless the case is PendingLLM.
void ApplyLlmOutcome(JudgeCase& c, const LlmOutcome& outcome);

struct LlmStageOptions {
  int retries = 2;
  int max_inflight = 8;
  std::string_view prompt_template = DefaultPromptTemplate();
};

// Queries both judges for every case and applies the outcomes. Returns the
// per-case outcomes in case order.
std::vector<LlmOutcome> RunLlmStage(std::vector<JudgeCase>& cases,
                                    JudgeClient& judge_a, JudgeClient& judge_b,
                                    const LlmStageOptions& options = {});

// ---------------------------------------------------------- human stage

inline constexpr std::size_t kHumanAnnotatorsPerCase = 2;

void RecordHumanVerdict(JudgeCase& c, const std::string& annotator_id,
                        Verdict verdict);
void RecordResolution(JudgeCase& c, Verdict verdict);

// --------------------------------------------------------------- summary

struct OutcomeSummary {
  std::size_t total_cases = 0;
  std::size_t consensus_count = 0;
  std::size_t escalated_count = 0;
  std::size_t resolved_escalations = 0;
  std::size_t pending_llm = 0;
  std::size_t pending_human = 0;
  std::size_t pending_discussion = 0;

  double consensus_rate = 0;
  double escalation_rate = 0;
  // Fraction of escalated cases already resolved.
  double escalation_progress = 0;

  std::size_t gold_preferred = 0;
  std::size_t model_preferred = 0;
  std::size_t equally_valid = 0;
  // Percentages over finalized cases.
  double gold_preferred_pct = 0;
  double model_preferred_pct = 0;
  double equally_valid_pct = 0;
  double valid_or_preferred_pct = 0;

  std::optional<AgreementStats> judge_kappa;
  std::optional<AgreementStats> human_kappa;
  double workload_reduction = 0;
};

// Throws JudgeError(kIncomplete) listing unfinished case ids.
OutcomeSummary Summarize(std::span<const JudgeCase> cases);
// Same figures, tolerating unfinished cases.
OutcomeSummary SummarizeLive(std::span<const JudgeCase> cases);

}  // namespace gec

#endif  // GEC_JUDGE_H_
