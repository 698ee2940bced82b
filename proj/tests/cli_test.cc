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

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "gec/digest.h"
#include "support/fixtures.h"

namespace gec {
namespace {

using nlohmann::json;
using testing::FixturePath;
using testing::MakeTempDir;

struct RunResult {
  int exit_code = -1;
  std::string out;  // stdout only
  std::string err;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with `args` (already shell-quoted where needed).
RunResult Cli(const std::string& args) {
  static int counter = 0;
  const std::string dir = MakeTempDir("cli_stderr");
  const std::string err_path = dir + "/err" + std::to_string(counter++);
  const std::string cmd = std::string(GEC_CLI_PATH) + " " + args + " 2>" + err_path;
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = Slurp(err_path);
  return r;
}

std::string F(const std::string& name) { return FixturePath(name); }

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::size_t Lines(const std::string& path) {
  const std::string text = Slurp(path);
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

TEST(CliTest, VersionAndMissingSubcommand) {
  const RunResult v = Cli("--version");
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
  EXPECT_EQ(Cli("").exit_code, 2);
  EXPECT_EQ(Cli("frobnicate").exit_code, 2);
}

TEST(CliTest, ScoreErrantPrintsTable) {
  const RunResult r = Cli("score --metric errant --hyp " + F("synthetic20.hyp.txt") +
                          " --ref " + F("synthetic20.m2"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("F0.5"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ALL"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.8772"), std::string::npos) << r.out;
}

TEST(CliTest, MissingRefIsUsageError) {
  const RunResult r =
      Cli("score --metric errant --hyp " + F("synthetic20.hyp.txt"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("--ref"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
}

TEST(CliTest, MissingFileIsUsageError) {
  EXPECT_EQ(Cli("score --metric errant --hyp /nonexistent/h.txt --ref " +
                F("synthetic20.m2"))
                .exit_code,
            2);
}

TEST(CliTest, MalformedM2IsDataError) {
  const RunResult r = Cli("score --metric errant --hyp " + F("synthetic20.hyp.txt") +
                          " --ref " + F("malformed/five_fields.m2"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("line"), std::string::npos) << r.err;
}

TEST(CliTest, GleuWithReferenceSets) {
  const RunResult r = Cli("score --metric gleu --src " + F("synthetic20.src.txt") +
                          " --hyp " + F("synthetic20.hyp.txt") + " --ref " +
                          F("synthetic20.m2"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("GLEU"), std::string::npos) << r.out;
}

TEST(CliTest, SigtestReportIsByteIdenticalAcrossRuns) {
  const std::string dir = MakeTempDir("cli_sigtest");
  std::string bytes[2];
  for (int run = 0; run < 2; ++run) {
    const std::string report = dir + "/r" + std::to_string(run) + ".json";
    const RunResult r =
        Cli("--report " + report + " sigtest --metric errant --hyp-a " +
            F("synthetic20.hyp.txt") + " --hyp-b " + F("synthetic20.hyp_b.txt") +
            " --ref " + F("synthetic20.m2") + " --iterations 2000 --seed 42");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    bytes[run] = Slurp(report);
    const json j = json::parse(bytes[run]);
    EXPECT_EQ(j.at("seed"), 42);
    EXPECT_EQ(j.at("iterations"), 2000);
    EXPECT_GE(j.at("p_value").get<double>(), 1.0 / 2001);

    const json manifest = json::parse(Slurp(report + ".manifest.json"));
    EXPECT_EQ(manifest.at("report_digest"), Sha256Hex(bytes[run]));
    EXPECT_EQ(manifest.at("seed"), 42);
    EXPECT_EQ(manifest.at("subcommand"), "sigtest");
    EXPECT_EQ(manifest.at("input_digests").size(), 3u);
  }
  EXPECT_EQ(bytes[0], bytes[1]);
}

TEST(CliTest, ExtractWritesM2) {
  const RunResult r = Cli("extract --src " + F("synthetic20.src.txt") + " --hyp " +
                          F("synthetic20.hyp.txt"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("S ", 0), 0u);
  EXPECT_NE(r.out.find("R:VERB:SVA"), std::string::npos);
}

TEST(CliTest, EnsembleSentenceAndEditLevel) {
  const std::string hyps = " --hyp " + F("synthetic20.hyp.txt") + " --hyp " +
                           F("synthetic20.hyp_b.txt") + " --hyp " +
                           F("synthetic20.hyp_c.txt");
  const RunResult a =
      Cli("ensemble --src " + F("synthetic20.src.txt") + hyps + " --fallback ngram");
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(Lines(F("synthetic20.src.txt")),
            static_cast<std::size_t>(std::count(a.out.begin(), a.out.end(), '\n')));
  const RunResult b = Cli("ensemble --src " + F("synthetic20.src.txt") + hyps +
                          " --edit-level");
  EXPECT_EQ(b.exit_code, 0) << b.err;
  EXPECT_EQ(Cli("ensemble --src " + F("synthetic20.src.txt") + hyps +
                " --fallback perplexity")
                .exit_code,
            2);
}

TEST(CliTest, AnalyzeAndCorrelate) {
  const RunResult a = Cli("analyze --hyp " + F("synthetic20.hyp.txt") + " --ref " +
                          F("synthetic20.m2"));
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out.rfind("tag\tcorrection_rate", 0), 0u);

  const RunResult c = Cli("correlate " + F("profiles/rates_gpt4o.tsv") + " " +
                          F("profiles/rates_llama.tsv"));
  ASSERT_EQ(c.exit_code, 0) << c.err;
  EXPECT_NE(c.out.find("0.974989"), std::string::npos) << c.out;
  EXPECT_NE(c.out.find("n\t19"), std::string::npos) << c.out;
}

TEST(CliTest, JudgeRunWithMockScriptResumes) {
  const std::string dir = MakeTempDir("cli_judge");
  const std::string script = dir + "/mock.json";
  WriteFile(script, R"({"judge_a":{"default":"A"},"judge_b":{"default":"B"}})");
  const std::string store = dir + "/events.jsonl";
  const std::string args = "judge run --src " + F("synthetic20.src.txt") + " --gold " +
                           F("synthetic20.hyp.txt") + " --hyp " +
                           F("synthetic20.hyp_b.txt") + " --mock-script " + script +
                           " --out " + store;
  const RunResult first = Cli("--report " + dir + "/report.json " + args);
  ASSERT_EQ(first.exit_code, 0) << first.err;
  const std::size_t events = Lines(store);
  EXPECT_GT(events, 0u);
  const json report = json::parse(Slurp(dir + "/report.json"));
  // Opposite letters never agree, so every case waits for humans.
  EXPECT_EQ(report.at("consensus_count"), 0);
  EXPECT_GT(report.at("pending_human").get<int>(), 0);

  const RunResult again = Cli(args);
  ASSERT_EQ(again.exit_code, 0) << again.err;
  EXPECT_EQ(Lines(store), events);
  EXPECT_NE(again.out.find("new cases judged   0"), std::string::npos) << again.out;
}

TEST(CliTest, JudgeRunWithoutJudgesIsUsageError) {
  EXPECT_EQ(Cli("judge run --src " + F("synthetic20.src.txt") + " --gold " +
                F("synthetic20.hyp.txt") + " --hyp " + F("synthetic20.hyp_b.txt"))
                .exit_code,
            2);
}

}  // namespace
}  // namespace gec
