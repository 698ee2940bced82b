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

#include <filesystem>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "gec/adjudication.h"
#include "gec/errors.h"
#include "gec/text_util.h"
#include "support/fixtures.h"

namespace gec {
namespace {

using nlohmann::json;
using testing::BuildReplayFixture;
using testing::MakeTempDir;

std::string FixedClock() { return "2026-01-01T00:00:00Z"; }

ServiceConfig TwoAnnotators() {
  ServiceConfig config;
  config.annotators = {{"ann1", "First Annotator"}, {"ann2", "Second Annotator"}};
  return config;
}

// Store with `n` cases that both judges disagree on, so all escalate.
std::unique_ptr<EventLog> EscalatedStore(const std::string& path, std::size_t n) {
  std::vector<Sentence> src, gold, model;
  for (std::size_t i = 0; i < n; ++i) {
    src.push_back(Sentence::FromText(fmt::format("case {} have error .", i)));
    gold.push_back(Sentence::FromText(fmt::format("case {} has an error .", i)));
    model.push_back(Sentence::FromText(fmt::format("case {} has error .", i)));
  }
  std::vector<JudgeCase> cases = BuildCases(src, gold, model);
  ScriptedJudgeClient a("judge_a", [](const JudgeRequest&) { return "A"; });
  ScriptedJudgeClient b("judge_b", [](const JudgeRequest&) { return "B"; });
  std::vector<JudgeCase> pending = cases;
  const auto outcomes = RunLlmStage(cases, a, b);
  auto log = EventLog::Open(path, FixedClock);
  RecordLlmStage(*log, pending, outcomes);
  return log;
}

std::string Judgment(const std::string& annotator, const std::string& token) {
  return json{{"annotator_id", annotator}, {"verdict", token}}.dump();
}

std::string NextId(const AdjudicationService& s, const std::string& annotator) {
  const ServiceResponse r = s.NextCase(annotator);
  if (r.status != 200) return "";
  return json::parse(r.body)["case_id"].get<std::string>();
}

void CollectKeys(const json& j, std::set<std::string>& keys,
                 std::vector<std::string>& strings) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      keys.insert(k);
      CollectKeys(v, keys, strings);
    }
  } else if (j.is_array()) {
    for (const json& v : j) CollectKeys(v, keys, strings);
  } else if (j.is_string()) {
    strings.push_back(j.get<std::string>());
  }
}

// Case-level payloads must not say which option is the gold reference, nor
// which judge said what.
void ExpectBlinded(const std::string& body) {
  if (body.empty()) return;
  std::set<std::string> keys;
  std::vector<std::string> strings;
  CollectKeys(json::parse(body), keys, strings);
  for (const std::string& k : keys) {
    for (const char* banned : {"gold", "model", "judge", "llm", "panel", "final"}) {
      EXPECT_EQ(ToLower(k).find(banned), std::string::npos) << k << " in " << body;
    }
  }
  for (const std::string& s : strings) {
    for (const char* banned : {"GoldPreferred", "ModelPreferred", "EquallyValid",
                               "GoldFirst", "ModelFirst", "judge_a", "judge_b"}) {
      EXPECT_EQ(s.find(banned), std::string::npos) << s << " in " << body;
    }
  }
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = MakeTempDir("service");
    path_ = dir_ + "/events.jsonl";
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string dir_;
  std::string path_;
};

TEST_F(ServiceTest, NextCaseReturnsLowestIdThen204) {
  auto log = EscalatedStore(path_, 3);
  AdjudicationService service(*log, TwoAnnotators());
  const CaseMap snapshot = service.Snapshot();
  ASSERT_EQ(snapshot.size(), 3u);
  std::vector<std::string> ids;
  for (const auto& [id, c] : snapshot) ids.push_back(id);

  for (const std::string& expected : ids) {
    const ServiceResponse r = service.NextCase("ann1");
    ASSERT_EQ(r.status, 200);
    const json payload = json::parse(r.body);
    EXPECT_EQ(payload["case_id"], expected);
    EXPECT_EQ(service.PostJudgment(expected, Judgment("ann1", "OPTION_A")).status, 200);
  }
  const ServiceResponse done = service.NextCase("ann1");
  EXPECT_EQ(done.status, 204);
  EXPECT_TRUE(done.body.empty());
  EXPECT_EQ(NextId(service, "ann2"), ids[0]);
}

TEST_F(ServiceTest, UnknownAnnotatorIs403) {
  auto log = EscalatedStore(path_, 1);
  AdjudicationService service(*log, TwoAnnotators());
  EXPECT_EQ(service.NextCase("mallory").status, 403);
  const std::string id = NextId(service, "ann1");
  EXPECT_EQ(service.PostJudgment(id, Judgment("mallory", "TIE")).status, 403);
}

TEST_F(ServiceTest, PayloadFieldSetIsExact) {
  auto log = EscalatedStore(path_, 2);
  AdjudicationService service(*log, TwoAnnotators());
  const ServiceResponse r = service.NextCase("ann1");
  const json payload = json::parse(r.body);
  std::set<std::string> keys;
  for (const auto& [k, v] : payload.items()) keys.insert(k);
  EXPECT_EQ(keys, (std::set<std::string>{"case_id", "source", "option_a", "option_b",
                                         "status"}));
  EXPECT_EQ(payload["status"], "PendingHuman");
  const JudgeCase c = service.Snapshot().at(payload["case_id"]);
  EXPECT_EQ(payload["option_a"], c.option_a().Join());
  EXPECT_EQ(payload["option_b"], c.option_b().Join());
  EXPECT_EQ(payload["source"], c.source.Join());
}

TEST_F(ServiceTest, JudgmentFlowAndErrorCodes) {
  auto log = EscalatedStore(path_, 2);
  AdjudicationService service(*log, TwoAnnotators());
  const std::string id = NextId(service, "ann1");

  EXPECT_EQ(service.PostJudgment("0000000000000000", Judgment("ann1", "TIE")).status, 404);
  EXPECT_EQ(service.PostJudgment(id, Judgment("ann1", "OPTION_C")).status, 400);
  EXPECT_EQ(service.PostJudgment(id, "not json").status, 400);
  EXPECT_EQ(service.PostJudgment(id, R"({"verdict":"TIE"})").status, 400);

  ServiceResponse r = service.PostJudgment(id, Judgment("ann1", "OPTION_A"));
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["status"], "PendingHuman");
  EXPECT_EQ(service.PostJudgment(id, Judgment("ann1", "OPTION_A")).status, 409);

  r = service.PostJudgment(id, Judgment("ann2", "OPTION_A"));
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["status"], "Resolved");
  EXPECT_EQ(service.PostJudgment(id, Judgment("ann2", "TIE")).status, 409);

  const JudgeCase c = service.Snapshot().at(id);
  EXPECT_EQ(c.final_verdict, VerdictFromOption(OptionChoice::kOptionA, c.panel_order));
}

TEST_F(ServiceTest, DiscussionAndResolution) {
  ServiceConfig config = TwoAnnotators();
  auto log = EscalatedStore(path_, 1);
  AdjudicationService service(*log, config);
  const std::string id = NextId(service, "ann1");
  EXPECT_EQ(service.PostResolution(id, R"({"verdict":"TIE"})").status, 409);
  service.PostJudgment(id, Judgment("ann1", "OPTION_A"));
  service.PostJudgment(id, Judgment("ann2", "OPTION_B"));

  const ServiceResponse next = service.NextCase("ann1");
  ASSERT_EQ(next.status, 200);
  const json payload = json::parse(next.body);
  EXPECT_EQ(payload["status"], "PendingDiscussion");
  ASSERT_TRUE(payload.contains("prior_verdicts"));
  EXPECT_EQ(payload["prior_verdicts"].size(), 2u);
  ExpectBlinded(next.body);

  EXPECT_EQ(service.PostResolution(id, R"({"verdict":"MAYBE"})").status, 400);
  EXPECT_EQ(
      service.PostResolution(id, R"({"verdict":"TIE","annotator_id":"mallory"})").status,
      403);
  const ServiceResponse r =
      service.PostResolution(id, R"({"verdict":"TIE","annotator_id":"ann1"})");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["status"], "Resolved");
  EXPECT_EQ(service.PostResolution(id, R"({"verdict":"TIE"})").status, 409);

  const JudgeCase c = service.Snapshot().at(id);
  EXPECT_EQ(c.final_verdict, Verdict::kEquallyValid);
  EXPECT_EQ(c.human_verdicts.size(), 2u);
  EXPECT_EQ(service.NextCase("ann1").status, 204);
}

TEST_F(ServiceTest, DiscussionCanHidePriorVerdicts) {
  ServiceConfig config = TwoAnnotators();
  config.reveal_in_discussion = false;
  auto log = EscalatedStore(path_, 1);
  AdjudicationService service(*log, config);
  const std::string id = NextId(service, "ann1");
  service.PostJudgment(id, Judgment("ann1", "OPTION_A"));
  service.PostJudgment(id, Judgment("ann2", "TIE"));
  EXPECT_FALSE(json::parse(service.NextCase("ann2").body).contains("prior_verdicts"));
}

TEST_F(ServiceTest, NoCaseLevelPayloadRevealsIdentity) {
  auto log = EscalatedStore(path_, 6);
  AdjudicationService service(*log, TwoAnnotators());
  const char* tokens[] = {"OPTION_A", "OPTION_B", "TIE"};
  for (int round = 0; round < 6; ++round) {
    for (const char* who : {"ann1", "ann2"}) {
      const ServiceResponse next = service.NextCase(who);
      ExpectBlinded(next.body);
      if (next.status != 200) continue;
      const json p = json::parse(next.body);
      const std::string id = p["case_id"];
      if (p["status"] == "PendingDiscussion") {
        ExpectBlinded(service.PostResolution(id, R"({"verdict":"TIE"})").body);
      } else {
        const char* token = tokens[(round + (who[3] - '0')) % 3];
        ExpectBlinded(service.PostJudgment(id, Judgment(who, token)).body);
      }
    }
    ExpectBlinded(service.ListCases("").body);
  }
}

TEST_F(ServiceTest, ConcurrentDuplicatePostsAcceptExactlyOne) {
  auto log = EscalatedStore(path_, 20);
  AdjudicationService service(*log, TwoAnnotators());
  for (const auto& [id, c] : service.Snapshot()) {
    int statuses[2] = {0, 0};
    std::thread t1([&, id = id] {
      statuses[0] = service.PostJudgment(id, Judgment("ann1", "OPTION_A")).status;
    });
    std::thread t2([&, id = id] {
      statuses[1] = service.PostJudgment(id, Judgment("ann1", "OPTION_B")).status;
    });
    t1.join();
    t2.join();
    EXPECT_EQ(std::min(statuses[0], statuses[1]), 200);
    EXPECT_EQ(std::max(statuses[0], statuses[1]), 409);
    EXPECT_EQ(service.Snapshot().at(id).human_verdicts.size(), 1u);
  }
  // The log holds one verdict per case as well.
  std::size_t human_events = 0;
  for (const CaseEvent& e : log->events()) {
    human_events += e.kind == EventKind::kHumanVerdict;
  }
  EXPECT_EQ(human_events, 20u);
}

std::vector<std::string> ReadAll(const AdjudicationService& s) {
  std::vector<std::string> out;
  for (const char* who : {"ann1", "ann2", "nobody"}) {
    const ServiceResponse r = s.NextCase(who);
    out.push_back(fmt::format("{} {}", r.status, r.body));
  }
  out.push_back(s.Stats().body);
  for (const char* f : {"", "PendingLLM", "ConsensusFinal", "PendingHuman",
                        "PendingDiscussion", "Resolved"}) {
    out.push_back(s.ListCases(f).body);
  }
  return out;
}

TEST_F(ServiceTest, RestartReproducesEveryReadByteForByte) {
  std::vector<std::string> before;
  {
    auto log = EscalatedStore(path_, 5);
    AdjudicationService service(*log, TwoAnnotators());
    const std::string a = NextId(service, "ann1");
    service.PostJudgment(a, Judgment("ann1", "OPTION_A"));
    service.PostJudgment(a, Judgment("ann2", "OPTION_B"));
    const std::string b = NextId(service, "ann2");
    service.PostJudgment(b, Judgment("ann2", "TIE"));
    before = ReadAll(service);
  }
  auto log = EventLog::Open(path_, FixedClock);
  AdjudicationService restarted(*log, TwoAnnotators());
  EXPECT_EQ(ReadAll(restarted), before);
}

TEST_F(ServiceTest, TruncatedTrailingLineIsRepaired) {
  std::size_t events = 0;
  {
    auto log = EscalatedStore(path_, 3);
    events = log->events().size();
  }
  {
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << R"({"seq":99,"ts":"2026-01-01T00:00:00Z","kind":"Human)";
  }
  auto log = EventLog::Open(path_, FixedClock);
  EXPECT_EQ(log->events().size(), events);
  AdjudicationService service(*log, TwoAnnotators());
  const std::string id = NextId(service, "ann1");
  EXPECT_EQ(service.PostJudgment(id, Judgment("ann1", "TIE")).status, 200);
  auto reopened = EventLog::Open(path_);
  EXPECT_EQ(reopened->events().size(), events + 1);
  EXPECT_EQ(reopened->events().back().seq, static_cast<long>(events + 1));
}

TEST_F(ServiceTest, CorruptMiddleLineIsLocatedParseError) {
  { EscalatedStore(path_, 2); }
  std::ifstream in(path_);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  in.close();
  lines[1] = "{not json}";
  std::ofstream out(path_, std::ios::trunc);
  for (const std::string& l : lines) out << l << "\n";
  out.close();
  try {
    EventLog::Open(path_);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST_F(ServiceTest, FoldIsDeterministicAndChecksSequence) {
  auto log = EscalatedStore(path_, 4);
  const CaseMap a = FoldEvents(log->events());
  const CaseMap b = FoldEvents(log->events());
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [id, c] : a) {
    EXPECT_EQ(c.status, b.at(id).status);
    EXPECT_EQ(c.llm_verdicts, b.at(id).llm_verdicts);
  }
  std::vector<CaseEvent> gap = log->events();
  gap.erase(gap.begin() + 1);
  EXPECT_THROW(FoldEvents(gap), ContractViolation);
}

TEST_F(ServiceTest, EventJsonRoundTrip) {
  auto log = EscalatedStore(path_, 2);
  for (const CaseEvent& e : log->events()) {
    const CaseEvent back = EventFromJson(EventToJson(e), 1);
    EXPECT_EQ(back.seq, e.seq);
    EXPECT_EQ(back.kind, e.kind);
    EXPECT_EQ(back.timestamp, e.timestamp);
    EXPECT_EQ(back.payload, e.payload);
  }
  EXPECT_THROW(EventFromJson(json{{"seq", 1}}, 7), ParseError);
}

TEST_F(ServiceTest, StatsOnEmptyStoreAreZero) {
  auto log = EventLog::Open(path_, FixedClock);
  AdjudicationService service(*log, TwoAnnotators());
  const json stats = json::parse(service.Stats().body);
  EXPECT_EQ(stats["total_cases"], 0);
  EXPECT_EQ(stats["consensus_rate"], 0.0);
  EXPECT_TRUE(stats["judge_kappa"].is_null());
  EXPECT_EQ(service.ListCases("Bogus").status, 400);
}

TEST_F(ServiceTest, OutcomeFixtureThroughTheService) {
  const auto f = BuildReplayFixture();
  std::vector<JudgeCase> cases = BuildCases(f.sources, f.golds, f.models);
  const std::vector<JudgeCase> pending = cases;
  ScriptedJudgeClient a = testing::ReplayJudge(f, false);
  ScriptedJudgeClient b = testing::ReplayJudge(f, true);
  const auto outcomes = RunLlmStage(cases, a, b);
  auto log = EventLog::Open(path_, FixedClock);
  RecordLlmStage(*log, pending, outcomes);
  AdjudicationService service(*log, TwoAnnotators());

  json stats = json::parse(service.Stats().body);
  EXPECT_NEAR(stats["consensus_rate"].get<double>(), 0.6434, 1e-4);
  EXPECT_EQ(stats["escalation_progress"], 0.0);
  EXPECT_EQ(stats["pending_human"], 617);

  const CaseMap initial = service.Snapshot();
  const auto token = [&](const std::string& id, Verdict v) {
    return std::string(OptionToken(OptionFromVerdict(v, initial.at(id).panel_order)));
  };
  std::size_t handled = 0;
  bool checked_midway = false;
  while (true) {
    const ServiceResponse r1 = service.NextCase("ann1");
    if (r1.status == 204) break;
    const std::string id = json::parse(r1.body)["case_id"];
    if (json::parse(r1.body)["status"] == "PendingDiscussion") {
      const json body = {{"verdict", token(id, f.resolution.at(id))}};
      ASSERT_EQ(service.PostResolution(id, body.dump()).status, 200);
      continue;
    }
    const auto& [v1, v2] = f.human.at(id);
    ASSERT_EQ(service.PostJudgment(id, Judgment("ann1", token(id, v1))).status, 200);
    ASSERT_EQ(service.PostJudgment(id, Judgment("ann2", token(id, v2))).status, 200);
    if (++handled == 300 && !checked_midway) {
      stats = json::parse(service.Stats().body);
      const double progress = stats["escalation_progress"];
      EXPECT_GT(progress, 0.0);
      EXPECT_LT(progress, 1.0);
      EXPECT_NEAR(stats["consensus_rate"].get<double>(), 0.6434, 1e-4);
      checked_midway = true;
    }
  }
  EXPECT_TRUE(checked_midway);
  stats = json::parse(service.Stats().body);
  EXPECT_EQ(stats["escalation_progress"], 1.0);
  EXPECT_NEAR(stats["final_distribution_pct"]["ModelPreferred"].get<double>(), 35.61, 0.01);
  EXPECT_NEAR(stats["final_distribution_pct"]["GoldPreferred"].get<double>(), 26.24, 0.01);
  EXPECT_NEAR(stats["final_distribution_pct"]["EquallyValid"].get<double>(), 38.15, 0.01);
  EXPECT_NEAR(stats["valid_or_preferred_pct"].get<double>(), 73.76, 0.01);
  EXPECT_EQ(stats["human_kappa"]["n"], 617);

  // Folding the stored log gives the same answer as the live service.
  auto reopened = EventLog::Open(path_);
  std::vector<JudgeCase> folded;
  for (auto& [id, c] : FoldEvents(reopened->events())) folded.push_back(c);
  EXPECT_EQ(SummaryToJson(Summarize(folded)).dump(), service.Stats().body);
}

TEST(ServiceConfigTest, ParsesSectionsAndComments) {
  const ServiceConfig c = ParseServiceConfig(
      "# adjudication\n"
      "[service]\n"
      "token_env = \"GEC_SERVE_TOKEN\"\n"
      "reveal_in_discussion = false  # hide\n"
      "\n"
      "[annotators]\n"
      "ann1 = \"Ada L.\"\n"
      "ann2 = Bo\n");
  EXPECT_EQ(c.token_env, "GEC_SERVE_TOKEN");
  EXPECT_FALSE(c.reveal_in_discussion);
  EXPECT_EQ(c.annotators.at("ann1"), "Ada L.");
  EXPECT_EQ(c.annotators.at("ann2"), "Bo");
}

TEST(ServiceConfigTest, Errors) {
  EXPECT_THROW(ParseServiceConfig("[service]\n"), ConfigError);
  EXPECT_THROW(ParseServiceConfig("[annotators]\nann1\n"), ConfigError);
  EXPECT_THROW(ParseServiceConfig("[wat]\nx = 1\n[annotators]\na = b\n"), ConfigError);
  try {
    ParseServiceConfig("[annotators]\na = b\n[service]\nreveal_in_discussion = maybe\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST_F(ServiceTest, HttpServerRoutesAndBearerCheck) {
  auto log = EscalatedStore(path_, 2);
  AdjudicationService service(*log, TwoAnnotators());
  ServerOptions options;
  options.port = 0;
  options.token = "s3cret";
  AdjudicationServer server(service, options);
  const int port = server.Bind();
  std::thread loop([&] { server.Listen(); });

  httplib::Client anon("127.0.0.1", port);
  auto r = anon.Get("/api/stats");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 401);

  httplib::Client client("127.0.0.1", port);
  client.set_bearer_token_auth("s3cret");
  r = client.Get("/api/stats");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body)["total_cases"], 2);

  r = client.Get("/api/queue/next?annotator_id=ann1");
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 200);
  const std::string id = json::parse(r->body)["case_id"];
  ExpectBlinded(r->body);

  r = client.Post("/api/cases/" + id + "/judgment", Judgment("ann1", "TIE"),
                  "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  r = client.Post("/api/cases/" + id + "/judgment", Judgment("ann1", "TIE"),
                  "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 409);
  EXPECT_EQ(json::parse(r->body)["error"], "duplicate_judgment");

  r = client.Get("/api/cases?status=PendingHuman");
  ASSERT_TRUE(r);
  EXPECT_EQ(json::parse(r->body)["cases"].size(), 2u);

  r = client.Get("/api/queue/next?annotator_id=zed");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 403);

  r = client.Get("/");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);

  server.Stop();
  loop.join();
}

}  // namespace
}  // namespace gec
