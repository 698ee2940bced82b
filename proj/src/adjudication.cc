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

#include "gec/adjudication.h"

#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <httplib.h>

#include "gec/corpus.h"

namespace gec {
namespace {

using json = nlohmann::json;

constexpr std::string_view kPlaceholderPage =
    "<!doctype html><html><head><title>gec-eval adjudication</title></head>"
    "<body><p>No UI assets are installed. The API is served under /api/.</p>"
    "</body></html>";

std::string RequireString(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ContractViolation(std::string("event payload lacks string '") + key +
                            "'");
  }
  return it->get<std::string>();
}

Verdict RequireVerdict(const json& j, const char* key) {
  std::optional<Verdict> v = ParseVerdictName(RequireString(j, key));
  if (!v) throw ContractViolation(std::string("bad verdict in '") + key + "'");
  return *v;
}

JudgeCase& FindCase(CaseMap& cases, const std::string& id, long seq) {
  auto it = cases.find(id);
  if (it == cases.end()) {
    throw ContractViolation("event " + std::to_string(seq) +
                            " refers to unknown case " + id);
  }
  return it->second;
}

json Stringify(const std::map<std::string, Verdict>& verdicts) {
  json out = json::object();
  for (const auto& [who, v] : verdicts) out[who] = std::string(VerdictName(v));
  return out;
}

json Kappa(const std::optional<AgreementStats>& k) {
  if (!k) return nullptr;
  return {{"kappa", k->kappa},
          {"observed_agreement", k->observed_agreement},
          {"expected_agreement", k->expected_agreement},
          {"n", k->n}};
}

ServiceResponse Reply(int status, const json& body) {
  return {status, body.dump()};
}

ServiceResponse ErrorReply(int status, const std::string& code,
                           const std::string& message) {
  return Reply(status, {{"error", code}, {"message", message}});
}

int StatusFor(JudgeErrorCode code) {
  return code == JudgeErrorCode::kUnknownCase ? 404 : 409;
}

std::string CodeName(JudgeErrorCode code) {
  switch (code) {
    case JudgeErrorCode::kUnknownCase:
      return "unknown_case";
    case JudgeErrorCode::kDuplicateJudgment:
      return "duplicate_judgment";
    case JudgeErrorCode::kAlreadyResolved:
      return "already_resolved";
    case JudgeErrorCode::kWrongState:
      return "wrong_state";
    case JudgeErrorCode::kTooManyAnnotators:
      return "too_many_annotators";
    case JudgeErrorCode::kIncomplete:
      return "incomplete";
  }
  return "error";
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::string Unquote(const std::string& value, std::size_t line_no) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    return value.substr(1, value.size() - 2);
  }
  if (!value.empty() && value.front() == '"') {
    throw ConfigError(fmt::format("config line {}: unterminated string", line_no));
  }
  return value;
}

}  // namespace

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kCaseCreated:
      return "CaseCreated";
    case EventKind::kLlmVerdicts:
      return "LlmVerdicts";
    case EventKind::kHumanVerdict:
      return "HumanVerdict";
    case EventKind::kResolution:
      return "Resolution";
  }
  return "CaseCreated";
}

std::optional<EventKind> ParseEventKindName(std::string_view name) {
  for (EventKind k : {EventKind::kCaseCreated, EventKind::kLlmVerdicts,
                      EventKind::kHumanVerdict, EventKind::kResolution}) {
    if (EventKindName(k) == name) return k;
  }
  return std::nullopt;
}

json EventToJson(const CaseEvent& event) {
  return {{"seq", event.seq},
          {"ts", event.timestamp},
          {"kind", std::string(EventKindName(event.kind))},
          {"payload", event.payload}};
}

CaseEvent EventFromJson(const json& j, std::size_t line_no) {
  if (!j.is_object()) throw ParseError(line_no, "event is not an object");
  CaseEvent e;
  try {
    e.seq = j.at("seq").get<long>();
    e.timestamp = j.at("ts").get<std::string>();
    std::optional<EventKind> kind =
        ParseEventKindName(j.at("kind").get<std::string>());
    if (!kind) throw ParseError(line_no, "unknown event kind");
    e.kind = *kind;
    e.payload = j.at("payload");
  } catch (const json::exception& ex) {
    throw ParseError(line_no, std::string("bad event: ") + ex.what());
  }
  if (!e.payload.is_object()) throw ParseError(line_no, "payload is not an object");
  return e;
}

json CaseCreatedPayload(const JudgeCase& c) {
  return {{"case_id", c.id},
          {"index", c.index},
          {"source", c.source.Join()},
          {"gold", c.gold.Join()},
          {"model", c.model.Join()},
          {"panel_order", std::string(PanelOrderName(c.panel_order))}};
}

json LlmVerdictsPayload(const std::string& case_id, const LlmOutcome& outcome) {
  return {{"case_id", case_id},
          {"verdicts", Stringify(outcome.verdicts)},
          {"raw", outcome.raw},
          {"error", outcome.error}};
}

json HumanVerdictPayload(const std::string& case_id,
                         const std::string& annotator_id, Verdict verdict) {
  return {{"case_id", case_id},
          {"annotator_id", annotator_id},
          {"verdict", std::string(VerdictName(verdict))}};
}

json ResolutionPayload(const std::string& case_id, Verdict verdict,
                       const std::string& annotator_id) {
  return {{"case_id", case_id},
          {"verdict", std::string(VerdictName(verdict))},
          {"annotator_id", annotator_id}};
}

void ApplyEvent(CaseMap& cases, const CaseEvent& event) {
  const json& p = event.payload;
  const std::string id = RequireString(p, "case_id");
  try {
    switch (event.kind) {
      case EventKind::kCaseCreated: {
        JudgeCase c;
        c.id = id;
        c.index = p.value("index", std::size_t{0});
        c.source = Sentence::FromText(RequireString(p, "source"));
        c.gold = Sentence::FromText(RequireString(p, "gold"));
        c.model = Sentence::FromText(RequireString(p, "model"));
        std::optional<PanelOrder> order =
            ParsePanelOrderName(RequireString(p, "panel_order"));
        if (!order) throw ContractViolation("bad panel_order");
        c.panel_order = *order;
        if (!cases.emplace(id, std::move(c)).second) {
          throw ContractViolation("case " + id + " created twice");
        }
        break;
      }
      case EventKind::kLlmVerdicts: {
        LlmOutcome outcome;
        for (const auto& [judge, v] : p.at("verdicts").items()) {
          std::optional<Verdict> verdict = ParseVerdictName(v.get<std::string>());
          if (!verdict) throw ContractViolation("bad LLM verdict");
          outcome.verdicts[judge] = *verdict;
        }
        outcome.raw = p.value("raw", std::map<std::string, std::string>{});
        outcome.error = p.value("error", std::string());
        ApplyLlmOutcome(FindCase(cases, id, event.seq), outcome);
        break;
      }
      case EventKind::kHumanVerdict:
        RecordHumanVerdict(FindCase(cases, id, event.seq),
                           RequireString(p, "annotator_id"),
                           RequireVerdict(p, "verdict"));
        break;
      case EventKind::kResolution:
        RecordResolution(FindCase(cases, id, event.seq),
                         RequireVerdict(p, "verdict"));
        break;
    }
  } catch (const JudgeError& e) {
    throw ContractViolation("event " + std::to_string(event.seq) + ": " +
                            e.what());
  } catch (const json::exception& e) {
    throw ContractViolation("event " + std::to_string(event.seq) + ": " +
                            e.what());
  }
}

CaseMap FoldEvents(std::span<const CaseEvent> events) {
  CaseMap cases;
  long expected = 1;
  for (const CaseEvent& e : events) {
    if (e.seq != expected) {
      throw ContractViolation(fmt::format(
          "event sequence broken: expected {}, found {}", expected, e.seq));
    }
    ApplyEvent(cases, e);
    ++expected;
  }
  return cases;
}

std::string UtcTimestamp() {
  const auto now = std::chrono::floor<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}Z", now);
}

std::unique_ptr<EventLog> EventLog::Open(const std::string& path, Clock clock) {
  std::vector<CaseEvent> events;
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    std::string text = ReadFile(path);
    const std::size_t last_nl = text.rfind('\n');
    const std::size_t keep = last_nl == std::string::npos ? 0 : last_nl + 1;
    if (keep != text.size()) {
      // A crash between write and fsync can leave half a record behind.
      std::filesystem::resize_file(path, keep, ec);
      if (ec) throw IoError("cannot truncate " + path + ": " + ec.message());
      text.resize(keep);
    }
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
      const std::size_t eol = text.find('\n', pos);
      const std::string_view line(text.data() + pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw ParseError(line_no, std::string("bad JSON: ") + e.what());
      }
      events.push_back(EventFromJson(j, line_no));
    }
  }
  std::FILE* file = std::fopen(path.c_str(), "ab");
  if (file == nullptr) {
    throw IoError("cannot open " + path + ": " + std::strerror(errno));
  }
  return std::unique_ptr<EventLog>(
      new EventLog(path, file, std::move(events),
                   clock ? std::move(clock) : Clock(UtcTimestamp)));
}

EventLog::EventLog(std::string path, std::FILE* file,
                   std::vector<CaseEvent> events, Clock clock)
    : path_(std::move(path)),
      file_(file),
      events_(std::move(events)),
      clock_(std::move(clock)) {}

EventLog::~EventLog() {
  if (file_ != nullptr) std::fclose(file_);
}

const CaseEvent& EventLog::Append(EventKind kind, json payload) {
  CaseEvent e;
  e.seq = static_cast<long>(events_.size()) + 1;
  e.timestamp = clock_();
  e.kind = kind;
  e.payload = std::move(payload);
  const std::string line = EventToJson(e).dump() + "\n";
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() ||
      std::fflush(file_) != 0 || ::fsync(::fileno(file_)) != 0) {
    throw IoError("cannot append to " + path_ + ": " + std::strerror(errno));
  }
  events_.push_back(std::move(e));
  return events_.back();
}

void RecordLlmStage(EventLog& log, std::span<const JudgeCase> pending_cases,
                    std::span<const LlmOutcome> outcomes) {
  if (pending_cases.size() != outcomes.size()) {
    throw ContractViolation("cases and outcomes differ in length");
  }
  for (const JudgeCase& c : pending_cases) {
    log.Append(EventKind::kCaseCreated, CaseCreatedPayload(c));
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    log.Append(EventKind::kLlmVerdicts,
               LlmVerdictsPayload(pending_cases[i].id, outcomes[i]));
  }
}

json SummaryToJson(const OutcomeSummary& s) {
  return {
      {"total_cases", s.total_cases},
      {"consensus_count", s.consensus_count},
      {"escalated_count", s.escalated_count},
      {"resolved_escalations", s.resolved_escalations},
      {"pending_llm", s.pending_llm},
      {"pending_human", s.pending_human},
      {"pending_discussion", s.pending_discussion},
      {"consensus_rate", s.consensus_rate},
      {"escalation_rate", s.escalation_rate},
      {"escalation_progress", s.escalation_progress},
      {"workload_reduction", s.workload_reduction},
      {"final_counts",
       {{"GoldPreferred", s.gold_preferred},
        {"ModelPreferred", s.model_preferred},
        {"EquallyValid", s.equally_valid}}},
      {"final_distribution_pct",
       {{"GoldPreferred", s.gold_preferred_pct},
        {"ModelPreferred", s.model_preferred_pct},
        {"EquallyValid", s.equally_valid_pct}}},
      {"valid_or_preferred_pct", s.valid_or_preferred_pct},
      {"judge_kappa", Kappa(s.judge_kappa)},
      {"human_kappa", Kappa(s.human_kappa)},
  };
}

ServiceConfig ParseServiceConfig(std::string_view text) {
  ServiceConfig config;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos &&
                                          line.find('"') > hash) {
      line.resize(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(fmt::format("config line {}: bad section header", line_no));
      }
      section = Trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "service" && section != "annotators") {
        throw ConfigError(fmt::format("config line {}: unknown section [{}]",
                                      line_no, section));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("config line {}: expected key = value", line_no));
    }
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value =
        Unquote(Trim(std::string_view(line).substr(eq + 1)), line_no);
    if (key.empty()) {
      throw ConfigError(fmt::format("config line {}: empty key", line_no));
    }
    if (section == "annotators") {
      if (!config.annotators.emplace(key, value).second) {
        throw ConfigError(fmt::format("config line {}: annotator '{}' repeated",
                                      line_no, key));
      }
    } else if (section == "service") {
      if (key == "token_env") {
        config.token_env = value;
      } else if (key == "reveal_in_discussion") {
        if (value != "true" && value != "false") {
          throw ConfigError(fmt::format(
              "config line {}: reveal_in_discussion must be true or false",
              line_no));
        }
        config.reveal_in_discussion = value == "true";
      } else {
        throw ConfigError(fmt::format("config line {}: unknown key '{}'",
                                      line_no, key));
      }
    } else {
      throw ConfigError(fmt::format("config line {}: key outside a section",
                                    line_no));
    }
  }
  if (config.annotators.empty()) {
    throw ConfigError("config registers no annotators");
  }
  return config;
}

AdjudicationService::AdjudicationService(EventLog& log, ServiceConfig config)
    : log_(log), config_(std::move(config)), cases_(FoldEvents(log.events())) {}

CaseMap AdjudicationService::Snapshot() const {
  std::shared_lock lock(mu_);
  return cases_;
}

json AdjudicationService::CasePayload(const JudgeCase& c) const {
  json out = {{"case_id", c.id},
              {"source", c.source.Join()},
              {"option_a", c.option_a().Join()},
              {"option_b", c.option_b().Join()},
              {"status", std::string(CaseStatusName(c.status))}};
  if (c.status == CaseStatus::kPendingDiscussion && config_.reveal_in_discussion) {
    json prior = json::array();
    for (const auto& [who, v] : c.human_verdicts) {
      prior.push_back({{"annotator_id", who},
                       {"verdict",
                        std::string(OptionToken(OptionFromVerdict(v, c.panel_order)))}});
    }
    out["prior_verdicts"] = std::move(prior);
  }
  return out;
}

ServiceResponse AdjudicationService::NextCase(
    const std::string& annotator_id) const {
  if (config_.annotators.count(annotator_id) == 0) {
    return ErrorReply(403, "unknown_annotator",
                      "annotator '" + annotator_id + "' is not registered");
  }
  std::shared_lock lock(mu_);
  for (const auto& [id, c] : cases_) {
    const bool wants_verdict = c.status == CaseStatus::kPendingHuman &&
                               c.human_verdicts.count(annotator_id) == 0;
    if (wants_verdict || c.status == CaseStatus::kPendingDiscussion) {
      return Reply(200, CasePayload(c));
    }
  }
  return {204, ""};
}

ServiceResponse AdjudicationService::PostJudgment(const std::string& case_id,
                                                  const std::string& body) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception&) {
    return ErrorReply(400, "bad_request", "body is not JSON");
  }
  if (!request.is_object() || !request.contains("annotator_id") ||
      !request["annotator_id"].is_string() || !request.contains("verdict") ||
      !request["verdict"].is_string()) {
    return ErrorReply(400, "bad_request",
                      "body needs string fields annotator_id and verdict");
  }
  const std::string annotator = request["annotator_id"].get<std::string>();
  std::optional<OptionChoice> choice =
      ParseOptionToken(request["verdict"].get<std::string>());
  if (!choice) {
    return ErrorReply(400, "bad_verdict",
                      "verdict must be OPTION_A, OPTION_B or TIE");
  }
  if (config_.annotators.count(annotator) == 0) {
    return ErrorReply(403, "unknown_annotator",
                      "annotator '" + annotator + "' is not registered");
  }
  std::unique_lock lock(mu_);
  auto it = cases_.find(case_id);
  if (it == cases_.end()) {
    return ErrorReply(404, "unknown_case", "no case " + case_id);
  }
  JudgeCase updated = it->second;
  const Verdict verdict = VerdictFromOption(*choice, updated.panel_order);
  try {
    RecordHumanVerdict(updated, annotator, verdict);
  } catch (const JudgeError& e) {
    return ErrorReply(StatusFor(e.code()), CodeName(e.code()), e.what());
  }
  log_.Append(EventKind::kHumanVerdict,
              HumanVerdictPayload(case_id, annotator, verdict));
  it->second = std::move(updated);
  return Reply(200, {{"case_id", case_id},
                     {"status", std::string(CaseStatusName(it->second.status))}});
}

ServiceResponse AdjudicationService::PostResolution(const std::string& case_id,
                                                    const std::string& body) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception&) {
    return ErrorReply(400, "bad_request", "body is not JSON");
  }
  if (!request.is_object() || !request.contains("verdict") ||
      !request["verdict"].is_string()) {
    return ErrorReply(400, "bad_request", "body needs string field verdict");
  }
  std::optional<OptionChoice> choice =
      ParseOptionToken(request["verdict"].get<std::string>());
  if (!choice) {
    return ErrorReply(400, "bad_verdict",
                      "verdict must be OPTION_A, OPTION_B or TIE");
  }
  std::string annotator;
  if (request.contains("annotator_id")) {
    if (!request["annotator_id"].is_string()) {
      return ErrorReply(400, "bad_request", "annotator_id must be a string");
    }
    annotator = request["annotator_id"].get<std::string>();
    if (config_.annotators.count(annotator) == 0) {
      return ErrorReply(403, "unknown_annotator",
                        "annotator '" + annotator + "' is not registered");
    }
  }
  std::unique_lock lock(mu_);
  auto it = cases_.find(case_id);
  if (it == cases_.end()) {
    return ErrorReply(404, "unknown_case", "no case " + case_id);
  }
  JudgeCase updated = it->second;
  const Verdict verdict = VerdictFromOption(*choice, updated.panel_order);
  try {
    RecordResolution(updated, verdict);
  } catch (const JudgeError& e) {
    return ErrorReply(StatusFor(e.code()), CodeName(e.code()), e.what());
  }
  log_.Append(EventKind::kResolution,
              ResolutionPayload(case_id, verdict, annotator));
  it->second = std::move(updated);
  return Reply(200, {{"case_id", case_id},
                     {"status", std::string(CaseStatusName(it->second.status))}});
}

ServiceResponse AdjudicationService::Stats() const {
  std::vector<JudgeCase> cases;
  {
    std::shared_lock lock(mu_);
    cases.reserve(cases_.size());
    for (const auto& [id, c] : cases_) cases.push_back(c);
  }
  return Reply(200, SummaryToJson(SummarizeLive(cases)));
}

ServiceResponse AdjudicationService::ListCases(
    const std::string& status_filter) const {
  std::optional<CaseStatus> filter;
  if (!status_filter.empty()) {
    filter = ParseCaseStatusName(status_filter);
    if (!filter) {
      return ErrorReply(400, "bad_status", "unknown status '" + status_filter + "'");
    }
  }
  json list = json::array();
  std::shared_lock lock(mu_);
  for (const auto& [id, c] : cases_) {
    if (filter && c.status != *filter) continue;
    list.push_back({{"case_id", id},
                    {"status", std::string(CaseStatusName(c.status))},
                    {"human_verdict_count", c.human_verdicts.size()}});
  }
  return Reply(200, {{"cases", std::move(list)}});
}

struct AdjudicationServer::Impl {
  AdjudicationService& service;
  ServerOptions options;
  httplib::Server server;
  int port = 0;

  Impl(AdjudicationService& s, ServerOptions o)
      : service(s), options(std::move(o)) {}

  static void Send(httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    if (!r.body.empty()) res.set_content(r.body, "application/json");
  }

  bool Authorized(const httplib::Request& req, httplib::Response& res) const {
    if (options.token.empty()) return true;
    if (req.get_header_value("Authorization") == "Bearer " + options.token) {
      return true;
    }
    Send(res, ErrorReply(401, "unauthorized", "missing or wrong bearer token"));
    return false;
  }

  void Routes() {
    server.Get("/api/queue/next", [this](const httplib::Request& req,
                                         httplib::Response& res) {
      if (!Authorized(req, res)) return;
      Send(res, service.NextCase(req.get_param_value("annotator_id")));
    });
    server.Post(R"(/api/cases/([^/]+)/judgment)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  if (!Authorized(req, res)) return;
                  Send(res, service.PostJudgment(req.matches[1], req.body));
                });
    server.Post(R"(/api/cases/([^/]+)/resolution)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  if (!Authorized(req, res)) return;
                  Send(res, service.PostResolution(req.matches[1], req.body));
                });
    server.Get("/api/stats", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      if (!Authorized(req, res)) return;
      Send(res, service.Stats());
    });
    server.Get("/api/cases", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      if (!Authorized(req, res)) return;
      Send(res, service.ListCases(req.get_param_value("status")));
    });
    bool mounted = false;
    if (!options.ui_dir.empty()) {
      mounted = server.set_mount_point("/", options.ui_dir);
      if (!mounted) throw IoError("cannot serve UI from " + options.ui_dir);
    }
    if (!mounted) {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(std::string(kPlaceholderPage), "text/html");
      });
    }
  }
};

AdjudicationServer::AdjudicationServer(AdjudicationService& service,
                                       ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  impl_->Routes();
}

AdjudicationServer::~AdjudicationServer() { Stop(); }

int AdjudicationServer::Bind() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (impl_->server.bind_to_port(impl_->options.host,
                                        impl_->options.port)) {
    impl_->port = impl_->options.port;
  } else {
    impl_->port = -1;
  }
  if (impl_->port <= 0) {
    throw IoError(fmt::format("cannot bind {}:{}", impl_->options.host,
                              impl_->options.port));
  }
  return impl_->port;
}

void AdjudicationServer::Listen() { impl_->server.listen_after_bind(); }

void AdjudicationServer::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace gec
