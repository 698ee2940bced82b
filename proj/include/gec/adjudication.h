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

// Persistence and HTTP facade for the human stage of the judge pipeline.
//
// The store is a JSONL file of CaseEvent records, one per line:
//
//   {"kind":"HumanVerdict","payload":{...},"seq":7,"ts":"2026-01-01T00:00:00Z"}
//
// Case state is always obtained by folding the full event sequence, so a
// restarted service answers every read exactly as before.

#ifndef GEC_ADJUDICATION_H_
#define GEC_ADJUDICATION_H_

#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gec/judge.h"

namespace gec {

enum class EventKind { kCaseCreated, kLlmVerdicts, kHumanVerdict, kResolution };
std::string_view EventKindName(EventKind kind);
std::optional<EventKind> ParseEventKindName(std::string_view name);

struct CaseEvent {
  long seq = 0;
  std::string timestamp;  // UTC, ISO 8601
  EventKind kind = EventKind::kCaseCreated;
  nlohmann::json payload;
};

nlohmann::json EventToJson(const CaseEvent& event);
// Throws ParseError (line_no) on a malformed record.
CaseEvent EventFromJson(const nlohmann::json& j, std::size_t line_no);

nlohmann::json CaseCreatedPayload(const JudgeCase& c);
nlohmann::json LlmVerdictsPayload(const std::string& case_id,
                                  const LlmOutcome& outcome);
nlohmann::json HumanVerdictPayload(const std::string& case_id,
                                   const std::string& annotator_id,
                                   Verdict verdict);
nlohmann::json ResolutionPayload(const std::string& case_id, Verdict verdict,
                                 const std::string& annotator_id);

using CaseMap = std::map<std::string, JudgeCase>;

// Applies one event. Throws ContractViolation if the event does not fit the
// current state (which only happens for a corrupted or hand-edited log).
void ApplyEvent(CaseMap& cases, const CaseEvent& event);
// Checks that sequence numbers are dense from 1.
CaseMap FoldEvents(std::span<const CaseEvent> events);

// Append-only event file. Every Append is flushed and fsync'ed before it
// returns. A trailing partial line left by a crash is truncated on open.
class EventLog {
 public:
  using Clock = std::function<std::string()>;

  // Creates the file if missing. Throws IoError / ParseError.
  static std::unique_ptr<EventLog> Open(const std::string& path,
                                        Clock clock = nullptr);
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  const std::vector<CaseEvent>& events() const { return events_; }
  const std::string& path() const { return path_; }

  const CaseEvent& Append(EventKind kind, nlohmann::json payload);

 private:
  EventLog(std::string path, std::FILE* file, std::vector<CaseEvent> events,
           Clock clock);

  std::string path_;
  std::FILE* file_;
  std::vector<CaseEvent> events_;
  Clock clock_;
};

std::string UtcTimestamp();

// Writes CaseCreated for every case followed by the LLM outcomes.
void RecordLlmStage(EventLog& log, std::span<const JudgeCase> pending_cases,
                    std::span<const LlmOutcome> outcomes);

nlohmann::json SummaryToJson(const OutcomeSummary& summary);

struct ServiceConfig {
  std::map<std::string, std::string> annotators;  // id -> display name
  std::string token_env;
  // Show the earlier human verdicts (as option tokens) on PendingDiscussion
  // cases. They stay hidden while a case is PendingHuman either way.
  bool reveal_in_discussion = true;
};

// Sections [service] (token_env, reveal_in_discussion) and [annotators]
// (id = "Display Name"). '#' starts a comment. Throws ConfigError.
ServiceConfig ParseServiceConfig(std::string_view text);

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON; empty for 204
};

// Request handlers independent of the HTTP library. Reads take a shared
// lock on the in-memory state; writes are serialized and reach the event
// log before the state changes.
class AdjudicationService {
 public:
  AdjudicationService(EventLog& log, ServiceConfig config);

  ServiceResponse NextCase(const std::string& annotator_id) const;
  ServiceResponse PostJudgment(const std::string& case_id,
                               const std::string& body);
  ServiceResponse PostResolution(const std::string& case_id,
                                 const std::string& body);
  ServiceResponse Stats() const;
  // Empty filter lists every case.
  ServiceResponse ListCases(const std::string& status_filter) const;

  const ServiceConfig& config() const { return config_; }
  CaseMap Snapshot() const;

 private:
  nlohmann::json CasePayload(const JudgeCase& c) const;

  EventLog& log_;
  ServiceConfig config_;
  mutable std::shared_mutex mu_;
  CaseMap cases_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string ui_dir;
  std::string token;  // empty disables the bearer check
};

// httplib front end for an AdjudicationService.
class AdjudicationServer {
 public:
  AdjudicationServer(AdjudicationService& service, ServerOptions options);
  ~AdjudicationServer();

  // Returns the bound port. Throws IoError.
  int Bind();
  // Blocks until Stop().
  void Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gec

#endif  // GEC_ADJUDICATION_H_
