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

// gec-eval: command-line front end.
//
//   gec-eval score     --ref corpus.m2 --hyp out.txt --metric errant
//   gec-eval extract   --src src.txt --hyp out.txt > out.m2
//   gec-eval ensemble  --src src.txt --hyp a.txt --hyp b.txt --hyp c.txt
//   gec-eval analyze   --ref corpus.m2 --hyp out.txt > profile.tsv
//   gec-eval correlate a.tsv b.tsv --field correction
//   gec-eval sigtest   --ref corpus.m2 --hyp-a a.txt --hyp-b b.txt
//   gec-eval judge run   --src s.txt --gold g.txt --hyp h.txt --out ev.jsonl
//   gec-eval judge serve --store ev.jsonl --config annotators.conf
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <signal.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "gec/adjudication.h"
#include "gec/analysis.h"
#include "gec/corpus.h"
#include "gec/digest.h"
#include "gec/edit_extraction.h"
#include "gec/ensemble.h"
#include "gec/judge.h"
#include "gec/manifest.h"
#include "gec/metrics.h"
#include "gec/parallel.h"
#include "gec/providers.h"
#include "gec/stats.h"

#ifndef GEC_VERSION
#define GEC_VERSION "0.0.0"
#endif

namespace gec {
namespace {

using json = nlohmann::json;

constexpr double kAlpha = 0.05;

// Flag combinations CLI11 cannot express; reported like parse errors (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string report_path;
};

// What a subcommand hands back to main.
struct Output {
  std::string table;  // human-readable, to stdout
  json report;        // machine-readable, to --report
  std::vector<std::string> inputs;
};

// ------------------------------------------------------------------ input

std::vector<Sentence> ReadSentences(const std::string& path) {
  return ParseSentenceLines(ReadFile(path));
}

// Sources come from the M2 file; a --src file, if also given, must agree.
std::vector<Sentence> SourcesOf(const Corpus& refs, const std::string& src_path) {
  std::vector<Sentence> sources;
  sources.reserve(refs.size());
  for (const AnnotatedSentence& s : refs.sentences) sources.push_back(s.source);
  if (!src_path.empty()) {
    std::vector<Sentence> given = ReadSentences(src_path);
    if (given.size() != sources.size()) {
      throw ContractViolation(fmt::format(
          "--src has {} lines but the reference has {} sentences", given.size(),
          sources.size()));
    }
    for (std::size_t i = 0; i < given.size(); ++i) {
      if (given[i] != sources[i]) {
        throw ContractViolation(fmt::format(
            "--src line {} differs from reference sentence {}", i + 1, i + 1));
      }
    }
  }
  return sources;
}

void RequireSameLength(std::size_t expected, std::size_t got,
                       const std::string& what) {
  if (expected != got) {
    throw ContractViolation(fmt::format("{} has {} lines, expected {}", what,
                                        got, expected));
  }
}

std::vector<std::vector<Edit>> ExtractAll(std::span<const Sentence> sources,
                                          std::span<const Sentence> hyps,
                                          int jobs) {
  RequireSameLength(sources.size(), hyps.size(), "hypothesis file");
  std::vector<std::vector<Edit>> out(sources.size());
  ParallelFor(sources.size(), jobs, [&](std::size_t i) {
    out[i] = ExtractEdits(sources[i], hyps[i]);
  });
  return out;
}

HttpOptions HttpFrom(const std::string& token_env, const std::string& model = {}) {
  HttpOptions o;
  o.token_env = token_env;
  o.model = model;
  return o;
}

// ----------------------------------------------------------------- score

json CountsJson(const Counts& c, double beta) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn},
          {"precision", Precision(c)}, {"recall", Recall(c)},
          {"f_beta", FBeta(c, beta)}};
}

std::string PrfTable(const ScoreReport& r) {
  std::string out = fmt::format("{:<14}{:>8}{:>8}{:>8}{:>9}{:>9}{:>9}\n",
                                "type", "TP", "FP", "FN", "P", "R",
                                fmt::format("F{}", r.beta));
  auto row = [&](const std::string& name, const Counts& c) {
    out += fmt::format("{:<14}{:>8g}{:>8g}{:>8g}{:>9.4f}{:>9.4f}{:>9.4f}\n",
                       name, c.tp, c.fp, c.fn, Precision(c), Recall(c),
                       FBeta(c, r.beta));
  };
  for (const auto& [tag, c] : r.per_type) row(tag.ToString(), c);
  row("ALL", r.totals);
  return out;
}

struct ScoreArgs {
  std::string src;
  std::string hyp;
  std::string ref;
  std::vector<std::string> ref_txt;
  std::string metric = "errant";
  double beta = kDefaultBeta;
  std::string weights;
  std::string ppl_endpoint;
  std::string ppl_token_env = "GEC_PPL_TOKEN";
  int gleu_order = kDefaultGleuOrder;
};

Output RunScore(const ScoreArgs& a, const Common& common) {
  Output out;
  out.inputs.push_back(a.hyp);
  if (!a.src.empty()) out.inputs.push_back(a.src);
  if (!a.ref.empty()) out.inputs.push_back(a.ref);
  for (const std::string& r : a.ref_txt) out.inputs.push_back(r);
  if (!a.weights.empty()) out.inputs.push_back(a.weights);
  if (!a.ref.empty() && !a.ref_txt.empty()) {
    throw UsageError("--ref and --ref-txt are mutually exclusive");
  }
  const std::vector<Sentence> hyps = ReadSentences(a.hyp);

  if (a.metric == "errant" || a.metric == "pt-errant") {
    if (a.ref.empty()) throw UsageError(a.metric + " needs --ref");
    const Corpus refs = ParseM2(ReadFile(a.ref));
    const std::vector<Sentence> sources = SourcesOf(refs, a.src);
    const auto hyp_edits = ExtractAll(sources, hyps, common.jobs);
    ScoreReport r;
    if (a.metric == "errant") {
      if (!a.weights.empty()) throw UsageError("--weights applies to pt-errant");
      r = ScoreErrant(hyp_edits, refs, a.beta, common.jobs);
    } else {
      TableWeights weights;
      if (!a.weights.empty()) weights = TableWeights::Parse(ReadFile(a.weights));
      r = ScorePtErrant(hyp_edits, refs, weights, a.beta, common.jobs);
    }
    out.table = PrfTable(r);
    json per_type = json::object();
    for (const auto& [tag, c] : r.per_type) {
      per_type[tag.ToString()] = CountsJson(c, r.beta);
    }
    out.report = {{"metric", a.metric},
                  {"beta", r.beta},
                  {"sentences", refs.size()},
                  {"corpus", CountsJson(r.totals, r.beta)},
                  {"per_type", per_type},
                  {"selected_annotator", r.selected_annotator}};
    return out;
  }

  if (a.metric == "gleu") {
    std::vector<Sentence> sources;
    std::vector<std::vector<Sentence>> ref_sets;
    if (!a.ref.empty()) {
      const Corpus refs = ParseM2(ReadFile(a.ref));
      sources = SourcesOf(refs, a.src);
      ref_sets = ReferenceSetsFromCorpus(refs);
    } else {
      if (a.ref_txt.empty()) throw UsageError("gleu needs --ref or --ref-txt");
      if (a.src.empty()) throw UsageError("--ref-txt needs --src");
      sources = ReadSentences(a.src);
      for (const std::string& path : a.ref_txt) {
        ref_sets.push_back(ReadSentences(path));
        RequireSameLength(sources.size(), ref_sets.back().size(), path);
      }
    }
    RequireSameLength(sources.size(), hyps.size(), "hypothesis file");
    const GleuReport g = ScoreGleu(sources, hyps, ref_sets, a.gleu_order);
    out.table = fmt::format("GLEU (n={}, {} reference set(s)): {:.4f}\n",
                            g.n_max, ref_sets.size(), g.corpus_score);
    json per_ref = json::array();
    for (const GleuReferenceScore& s : g.per_reference) {
      per_ref.push_back({{"score", s.score},
                         {"brevity_penalty", s.brevity_penalty},
                         {"precisions", s.precisions}});
    }
    out.report = {{"metric", "gleu"},
                  {"n_max", g.n_max},
                  {"corpus_score", g.corpus_score},
                  {"brevity_penalty", g.brevity_penalty},
                  {"per_reference", per_ref},
                  {"per_sentence", g.per_sentence}};
    return out;
  }

  if (a.metric == "scribendi") {
    if (a.ppl_endpoint.empty()) throw UsageError("scribendi needs --ppl-endpoint");
    std::vector<Sentence> sources;
    if (!a.ref.empty()) {
      sources = SourcesOf(ParseM2(ReadFile(a.ref)), a.src);
    } else {
      if (a.src.empty()) throw UsageError("scribendi needs --src");
      sources = ReadSentences(a.src);
    }
    HttpPerplexityProvider ppl(a.ppl_endpoint, HttpFrom(a.ppl_token_env));
    const ScribendiReport s = ScoreScribendi(sources, hyps, ppl);
    out.table = fmt::format("Scribendi score: {:g} over {} sentences\n", s.score,
                            s.per_sentence.size());
    out.report = {{"metric", "scribendi"},
                  {"score", s.score},
                  {"per_sentence", s.per_sentence}};
    return out;
  }
  throw UsageError("unknown metric '" + a.metric + "'");
}

// --------------------------------------------------------------- extract

Output RunExtract(const std::string& src, const std::string& hyp,
                  const Common& common) {
  Output out;
  out.inputs = {src, hyp};
  const std::vector<Sentence> sources = ReadSentences(src);
  const std::vector<Sentence> hyps = ReadSentences(hyp);
  const auto edits = ExtractAll(sources, hyps, common.jobs);
  Corpus corpus;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    AnnotatedSentence s;
    s.source = sources[i];
    s.edits_by_annotator[0] = edits[i];
    corpus.sentences.push_back(std::move(s));
  }
  out.table = WriteM2(corpus);
  out.report = {{"sentences", sources.size()}, {"m2", out.table}};
  return out;
}

// -------------------------------------------------------------- ensemble

struct EnsembleArgs {
  std::string src;
  std::vector<std::string> hyps;
  std::string fallback = "best";
  std::string priority;
  int ngram_n = 3;
  int vote_threshold = 0;
  bool edit_level = false;
  std::string ppl_endpoint;
  std::string ppl_token_env = "GEC_PPL_TOKEN";
  std::string judge_endpoint;
  std::string judge_token_env = "GEC_META_JUDGE_TOKEN";
};

std::vector<std::size_t> ParsePriority(const std::string& text) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw UsageError("bad --priority entry '" + item + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

Output RunEnsemble(const EnsembleArgs& a, const Common& common) {
  Output out;
  out.inputs.push_back(a.src);
  for (const std::string& h : a.hyps) out.inputs.push_back(h);
  const std::vector<Sentence> sources = ReadSentences(a.src);
  std::vector<std::vector<Sentence>> systems;
  for (const std::string& h : a.hyps) {
    systems.push_back(ReadSentences(h));
    RequireSameLength(sources.size(), systems.back().size(), h);
  }
  std::vector<Sentence> combined;
  if (a.edit_level) {
    const int k = static_cast<int>(systems.size());
    const int threshold = a.vote_threshold > 0 ? a.vote_threshold : (k + 1) / 2;
    combined.resize(sources.size());
    ParallelFor(sources.size(), common.jobs, [&](std::size_t i) {
      std::vector<std::vector<Edit>> sets;
      for (const auto& sys : systems) sets.push_back(ExtractEdits(sources[i], sys[i]));
      combined[i] = ApplyEdits(sources[i], EditMajority(sets, threshold));
    });
  } else {
    EnsembleConfig config;
    config.fallback = ParseFallback(a.fallback);
    config.priority = ParsePriority(a.priority);
    config.ngram_n = a.ngram_n;
    config.vote_threshold = a.vote_threshold;
    std::unique_ptr<PerplexityProvider> ppl;
    std::unique_ptr<MetaJudgeClient> judge;
    if (config.fallback == Fallback::kPerplexity && a.ppl_endpoint.empty()) {
      throw UsageError("--fallback perplexity needs --ppl-endpoint");
    }
    if (!a.ppl_endpoint.empty()) {
      ppl = std::make_unique<HttpPerplexityProvider>(a.ppl_endpoint,
                                                     HttpFrom(a.ppl_token_env));
    }
    if (!a.judge_endpoint.empty()) {
      judge = std::make_unique<HttpMetaJudge>(a.judge_endpoint,
                                              HttpFrom(a.judge_token_env));
    } else if (config.fallback == Fallback::kMetaModel) {
      judge = std::make_unique<SeededMetaJudge>(common.seed);
    }
    combined = EnsembleCorpus(sources, systems, config, ppl.get(), judge.get(),
                              common.jobs);
  }
  out.table = WriteSentenceLines(combined);
  out.report = {{"fallback", a.edit_level ? "edit-level" : a.fallback},
                {"systems", a.hyps.size()},
                {"output", out.table}};
  return out;
}

// ------------------------------------------------------ analyze/correlate

Output RunAnalyze(const std::string& src, const std::string& hyp,
                  const std::string& ref, std::optional<int> annotator,
                  const Common& common) {
  Output out;
  out.inputs = {hyp, ref};
  if (!src.empty()) out.inputs.push_back(src);
  const Corpus refs = ParseM2(ReadFile(ref));
  const std::vector<Sentence> sources = SourcesOf(refs, src);
  const auto hyp_edits = ExtractAll(sources, ReadSentences(hyp), common.jobs);
  ProfileOptions options;
  options.fixed_annotator = annotator;
  const TypeProfile profile = ProfileSystem(hyp_edits, refs, options);
  out.table = WriteProfileTsv(profile);
  json rows = json::object();
  for (const auto& [tag, row] : profile.rows) {
    rows[tag.ToString()] = {{"correction_rate", row.correction_rate.has_value()
                                                    ? json(*row.correction_rate)
                                                    : json(nullptr)},
                            {"false_insertion_rate",
                             row.false_insertion_rate.has_value()
                                 ? json(*row.false_insertion_rate)
                                 : json(nullptr)},
                            {"gold_count", *row.gold_count},
                            {"sys_count", *row.sys_count},
                            {"low_support", row.low_support()}};
  }
  out.report = {{"rows", rows}, {"low_support_threshold", kLowSupportThreshold}};
  return out;
}

Output RunCorrelate(const std::string& a, const std::string& b,
                    const std::string& field) {
  Output out;
  out.inputs = {a, b};
  const CorrelationResult r =
      CorrelateProfiles(ParseProfileTsv(ReadFile(a)), ParseProfileTsv(ReadFile(b)),
                        ParseRateField(field));
  out.table = fmt::format("rho\t{:.6f}\np\t{:.6g}\nn\t{}\np_method\t{}\n", r.rho,
                          r.p_value, r.n, r.p_method);
  out.report = {{"field", field}, {"rho", r.rho}, {"p_value", r.p_value},
                {"n", r.n},       {"p_method", r.p_method}};
  return out;
}

// --------------------------------------------------------------- sigtest

struct SigtestArgs {
  std::string src;
  std::string hyp_a;
  std::string hyp_b;
  std::string ref;
  std::string metric = "errant";
  double beta = kDefaultBeta;
  long iterations = 10000;
};

Output RunSigtest(const SigtestArgs& a, const Common& common) {
  Output out;
  out.inputs = {a.hyp_a, a.hyp_b, a.ref};
  if (!a.src.empty()) out.inputs.push_back(a.src);
  const Corpus refs = ParseM2(ReadFile(a.ref));
  const std::vector<Sentence> sources = SourcesOf(refs, a.src);
  const std::vector<Sentence> hyp_a = ReadSentences(a.hyp_a);
  const std::vector<Sentence> hyp_b = ReadSentences(a.hyp_b);
  std::vector<Contribution> ca;
  std::vector<Contribution> cb;
  MetricReducer reduce;
  if (a.metric == "errant") {
    auto contributions = [&](const std::vector<Sentence>& hyps) {
      const ScoreReport r =
          ScoreErrant(ExtractAll(sources, hyps, common.jobs), refs, a.beta, common.jobs);
      std::vector<Contribution> rows;
      for (const Counts& c : r.per_sentence) rows.push_back({c.tp, c.fp, c.fn});
      return rows;
    };
    ca = contributions(hyp_a);
    cb = contributions(hyp_b);
    const double beta = a.beta;
    reduce = [beta](std::span<const double> s) {
      return FBeta(Counts{s[0], s[1], s[2]}, beta);
    };
  } else if (a.metric == "gleu") {
    const auto ref_sets = ReferenceSetsFromCorpus(refs);
    RequireSameLength(sources.size(), hyp_a.size(), a.hyp_a);
    RequireSameLength(sources.size(), hyp_b.size(), a.hyp_b);
    const int n_max = kDefaultGleuOrder;
    // One block of sufficient statistics per reference set, concatenated.
    auto contributions = [&](const std::vector<Sentence>& hyps) {
      std::vector<Contribution> rows(sources.size());
      for (std::size_t i = 0; i < sources.size(); ++i) {
        for (const auto& set : ref_sets) {
          std::vector<double> s = GleuSentenceStats(sources[i], hyps[i], set[i], n_max);
          rows[i].insert(rows[i].end(), s.begin(), s.end());
        }
      }
      return rows;
    };
    ca = contributions(hyp_a);
    cb = contributions(hyp_b);
    const std::size_t block = 2 + 2 * static_cast<std::size_t>(n_max);
    const std::size_t sets = ref_sets.size();
    reduce = [block, sets, n_max](std::span<const double> s) {
      if (sets == 0) return 0.0;
      double total = 0;
      for (std::size_t k = 0; k < sets; ++k) {
        total += GleuFromStats(s.subspan(k * block, block), n_max);
      }
      return total / static_cast<double>(sets);
    };
  } else {
    throw UsageError("sigtest supports --metric errant|gleu");
  }
  const SignificanceResult r =
      PermutationTest(ca, cb, reduce, a.iterations, common.seed, common.jobs);
  const bool significant = r.p_value < kAlpha;
  out.table = fmt::format(
      "# paired permutation test, sentence-level pairing, {} iterations, "
      "seed {}, rng {}\n"
      "metric\t{}\ndelta\t{:.6f}\np\t{:.6g}\nverdict\t{}\n",
      r.iterations, r.seed, r.rng, a.metric, r.observed_delta, r.p_value,
      significant ? "significant (alpha=0.05)" : "not significant (alpha=0.05)");
  out.report = {{"metric", a.metric},
                {"pairing", "sentence"},
                {"observed_delta", r.observed_delta},
                {"p_value", r.p_value},
                {"iterations", r.iterations},
                {"seed", r.seed},
                {"rng", r.rng},
                {"alpha", kAlpha},
                {"significant", significant},
                {"degenerate", r.degenerate}};
  return out;
}

// ----------------------------------------------------------------- judge

struct JudgeRunArgs {
  std::string src;
  std::string gold;
  std::string hyp;
  std::string judge_a;
  std::string judge_b;
  std::string judge_a_token_env = "GEC_JUDGE_A_TOKEN";
  std::string judge_b_token_env = "GEC_JUDGE_B_TOKEN";
  std::string judge_a_model;
  std::string judge_b_model;
  std::string mock_script;
  std::string out;
  int max_inflight = 8;
  int retries = 2;
};

std::string SummaryTable(const OutcomeSummary& s) {
  std::string out;
  out += fmt::format("cases              {}\n", s.total_cases);
  out += fmt::format("consensus          {} ({:.2f}%)\n", s.consensus_count,
                     100 * s.consensus_rate);
  out += fmt::format("escalated          {} ({:.2f}%)\n", s.escalated_count,
                     100 * s.escalation_rate);
  out += fmt::format("pending            llm {} / human {} / discussion {}\n",
                     s.pending_llm, s.pending_human, s.pending_discussion);
  out += fmt::format("model preferred    {} ({:.2f}%)\n", s.model_preferred,
                     s.model_preferred_pct);
  out += fmt::format("gold preferred     {} ({:.2f}%)\n", s.gold_preferred,
                     s.gold_preferred_pct);
  out += fmt::format("equally valid      {} ({:.2f}%)\n", s.equally_valid,
                     s.equally_valid_pct);
  out += fmt::format("valid or preferred {:.2f}%\n", s.valid_or_preferred_pct);
  if (s.judge_kappa) out += fmt::format("judge kappa        {:.4f}\n", s.judge_kappa->kappa);
  if (s.human_kappa) out += fmt::format("human kappa        {:.4f}\n", s.human_kappa->kappa);
  return out;
}

Output RunJudge(const JudgeRunArgs& a, const Common& common) {
  Output out;
  out.inputs = {a.src, a.gold, a.hyp};
  std::unique_ptr<JudgeClient> judge_a;
  std::unique_ptr<JudgeClient> judge_b;
  if (!a.mock_script.empty()) {
    if (!a.judge_a.empty() || !a.judge_b.empty()) {
      throw UsageError("--mock-script replaces --judge-a/--judge-b");
    }
    out.inputs.push_back(a.mock_script);
    const json script = [&] {
      try {
        return json::parse(ReadFile(a.mock_script));
      } catch (const json::exception& e) {
        throw ConfigError(std::string("bad mock script: ") + e.what());
      }
    }();
    for (const char* key : {"judge_a", "judge_b"}) {
      if (!script.contains(key)) throw ConfigError(std::string("mock script lacks ") + key);
    }
    judge_a = std::make_unique<ScriptedJudgeClient>(
        ScriptedJudgeClient::FromJson("judge_a", script["judge_a"].dump()));
    judge_b = std::make_unique<ScriptedJudgeClient>(
        ScriptedJudgeClient::FromJson("judge_b", script["judge_b"].dump()));
  } else {
    if (a.judge_a.empty() || a.judge_b.empty()) {
      throw UsageError("judge run needs --judge-a and --judge-b, or --mock-script");
    }
    judge_a = std::make_unique<HttpChatJudgeClient>(
        "judge_a", a.judge_a, HttpFrom(a.judge_a_token_env, a.judge_a_model));
    judge_b = std::make_unique<HttpChatJudgeClient>(
        "judge_b", a.judge_b, HttpFrom(a.judge_b_token_env, a.judge_b_model));
  }

  const std::vector<Sentence> sources = ReadSentences(a.src);
  const std::vector<Sentence> golds = ReadSentences(a.gold);
  const std::vector<Sentence> hyps = ReadSentences(a.hyp);
  std::vector<JudgeCase> cases = BuildCases(sources, golds, hyps, common.seed);

  // Cases already in the store are left alone, so an interrupted run resumes.
  auto log = EventLog::Open(a.out);
  const CaseMap existing = FoldEvents(log->events());
  std::vector<JudgeCase> fresh;
  for (JudgeCase& c : cases) {
    if (existing.count(c.id) == 0) fresh.push_back(std::move(c));
  }
  LlmStageOptions options;
  options.retries = a.retries;
  options.max_inflight = a.max_inflight;
  std::vector<JudgeCase> pending = fresh;
  const std::vector<LlmOutcome> outcomes =
      RunLlmStage(fresh, *judge_a, *judge_b, options);
  RecordLlmStage(*log, pending, outcomes);

  CaseMap all = FoldEvents(log->events());
  std::vector<JudgeCase> flat;
  for (auto& [id, c] : all) flat.push_back(std::move(c));
  const OutcomeSummary summary = SummarizeLive(flat);
  out.table = fmt::format("new cases judged   {}\n", pending.size()) +
              SummaryTable(summary);
  out.report = SummaryToJson(summary);
  return out;
}

std::atomic<bool> g_stop_requested{false};

Output RunServe(const std::string& store, const std::string& config_path,
                const std::string& host, int port, const std::string& ui_dir) {
  ServiceConfig config = ParseServiceConfig(ReadFile(config_path));
  ServerOptions options;
  options.host = host;
  options.port = port;
  options.ui_dir = ui_dir;
  if (!config.token_env.empty()) {
    const char* token = std::getenv(config.token_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw ConfigError("environment variable " + config.token_env + " is not set");
    }
    options.token = token;
  }
  auto log = EventLog::Open(store);
  AdjudicationService service(*log, config);
  AdjudicationServer server(service, options);

  // Handle SIGINT/SIGTERM on a dedicated thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  const int bound = server.Bind();
  std::cerr << fmt::format("serving {} on http://{}:{}/\n", store, host, bound);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    g_stop_requested = true;
    server.Stop();
  });
  server.Listen();
  if (!g_stop_requested) {
    pthread_kill(waiter.native_handle(), SIGTERM);
  }
  waiter.join();
  return {};
}

// ------------------------------------------------------------------ main

void RecordOptions(const CLI::App& sub, RunManifest& manifest) {
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name();
    if (name == "--help" || name == "-h") continue;
    manifest.options[name] = opt->results();
  }
}

int Main(int argc, char** argv) {
  CLI::App app{"Grammatical error correction evaluation toolkit", "gec-eval"};
  app.set_version_flag("--version", GEC_VERSION);
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Seed for all randomness")
      ->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads for per-sentence work")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--report", common.report_path,
                 "Write a JSON report here (and FILE.manifest.json)");

  ScoreArgs score;
  CLI::App* score_cmd = app.add_subcommand("score", "Score a hypothesis file");
  score_cmd->fallthrough();
  score_cmd->add_option("--src", score.src, "Source sentences")->check(CLI::ExistingFile);
  score_cmd->add_option("--hyp", score.hyp, "Hypothesis sentences")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--ref", score.ref, "Reference M2 file")->check(CLI::ExistingFile);
  score_cmd->add_option("--ref-txt", score.ref_txt, "Plain-text reference(s)")
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--metric", score.metric)
      ->check(CLI::IsMember({"errant", "gleu", "pt-errant", "scribendi"}))
      ->capture_default_str();
  score_cmd->add_option("--beta", score.beta)->capture_default_str();
  score_cmd->add_option("--weights", score.weights, "PT-ERRANT weight table")
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--gleu-order", score.gleu_order)->capture_default_str();
  score_cmd->add_option("--ppl-endpoint", score.ppl_endpoint);
  score_cmd->add_option("--ppl-token-env", score.ppl_token_env)->capture_default_str();

  std::string ex_src, ex_hyp;
  CLI::App* extract_cmd = app.add_subcommand("extract", "Source + hypothesis to M2");
  extract_cmd->fallthrough();
  extract_cmd->add_option("--src", ex_src)->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--hyp", ex_hyp)->required()->check(CLI::ExistingFile);

  EnsembleArgs ens;
  CLI::App* ensemble_cmd = app.add_subcommand("ensemble", "Combine system outputs");
  ensemble_cmd->fallthrough();
  ensemble_cmd->add_option("--src", ens.src)->required()->check(CLI::ExistingFile);
  ensemble_cmd->add_option("--hyp", ens.hyps)
      ->required()
      ->expected(2, 1 << 16)
      ->check(CLI::ExistingFile);
  ensemble_cmd->add_option("--fallback", ens.fallback)
      ->check(CLI::IsMember({"best", "meta", "perplexity", "ngram"}))
      ->capture_default_str();
  ensemble_cmd->add_option("--priority", ens.priority, "Comma-separated system ids");
  ensemble_cmd->add_option("--ngram-n", ens.ngram_n)->capture_default_str();
  ensemble_cmd->add_option("--vote-threshold", ens.vote_threshold);
  ensemble_cmd->add_flag("--edit-level", ens.edit_level, "Vote on edits instead");
  ensemble_cmd->add_option("--ppl-endpoint", ens.ppl_endpoint);
  ensemble_cmd->add_option("--ppl-token-env", ens.ppl_token_env)->capture_default_str();
  ensemble_cmd->add_option("--judge-endpoint", ens.judge_endpoint);
  ensemble_cmd->add_option("--judge-token-env", ens.judge_token_env)
      ->capture_default_str();

  std::string an_src, an_hyp, an_ref;
  std::optional<int> an_annotator;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Per-type rates");
  analyze_cmd->fallthrough();
  analyze_cmd->add_option("--src", an_src)->check(CLI::ExistingFile);
  analyze_cmd->add_option("--hyp", an_hyp)->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--ref", an_ref)->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--annotator", an_annotator,
                          "Use this annotator instead of the best match");

  std::string co_a, co_b, co_field = "correction";
  CLI::App* correlate_cmd = app.add_subcommand("correlate", "Spearman between two profiles");
  correlate_cmd->fallthrough();
  correlate_cmd->add_option("table_a", co_a)->required()->check(CLI::ExistingFile);
  correlate_cmd->add_option("table_b", co_b)->required()->check(CLI::ExistingFile);
  correlate_cmd->add_option("--field", co_field)
      ->check(CLI::IsMember({"correction", "false_insertion"}))
      ->capture_default_str();

  SigtestArgs sig;
  CLI::App* sigtest_cmd = app.add_subcommand("sigtest", "Paired permutation test");
  sigtest_cmd->fallthrough();
  sigtest_cmd->add_option("--src", sig.src)->check(CLI::ExistingFile);
  sigtest_cmd->add_option("--hyp-a", sig.hyp_a)->required()->check(CLI::ExistingFile);
  sigtest_cmd->add_option("--hyp-b", sig.hyp_b)->required()->check(CLI::ExistingFile);
  sigtest_cmd->add_option("--ref", sig.ref)->required()->check(CLI::ExistingFile);
  sigtest_cmd->add_option("--metric", sig.metric)
      ->check(CLI::IsMember({"errant", "gleu"}))
      ->capture_default_str();
  sigtest_cmd->add_option("--beta", sig.beta)->capture_default_str();
  sigtest_cmd->add_option("--iterations", sig.iterations)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  CLI::App* judge_cmd = app.add_subcommand("judge", "LLM-as-a-judge pipeline");
  judge_cmd->require_subcommand(1);
  judge_cmd->fallthrough();
  JudgeRunArgs jr;
  CLI::App* run_cmd = judge_cmd->add_subcommand("run", "Run the LLM stage");
  run_cmd->fallthrough();
  run_cmd->add_option("--src", jr.src)->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--gold", jr.gold)->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--hyp", jr.hyp)->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--judge-a", jr.judge_a, "Chat-completion URL");
  run_cmd->add_option("--judge-b", jr.judge_b, "Chat-completion URL");
  run_cmd->add_option("--judge-a-token-env", jr.judge_a_token_env)->capture_default_str();
  run_cmd->add_option("--judge-b-token-env", jr.judge_b_token_env)->capture_default_str();
  run_cmd->add_option("--judge-a-model", jr.judge_a_model);
  run_cmd->add_option("--judge-b-model", jr.judge_b_model);
  run_cmd->add_option("--mock-script", jr.mock_script)->check(CLI::ExistingFile);
  run_cmd->add_option("--out", jr.out, "Event store")->required();
  run_cmd->add_option("--max-inflight", jr.max_inflight)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--retries", jr.retries)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  std::string sv_store, sv_config, sv_host = "127.0.0.1", sv_ui;
  int sv_port = 8080;
  CLI::App* serve_cmd = judge_cmd->add_subcommand("serve", "Serve the human stage");
  serve_cmd->add_option("--store", sv_store)->required();
  serve_cmd->add_option("--config", sv_config)->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--host", sv_host)->capture_default_str();
  serve_cmd->add_option("--port", sv_port)->capture_default_str();
  serve_cmd->add_option("--ui-dir", sv_ui)->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* used = nullptr;
  try {
    Output out;
    if (*score_cmd) {
      used = score_cmd;
      out = RunScore(score, common);
    } else if (*extract_cmd) {
      used = extract_cmd;
      out = RunExtract(ex_src, ex_hyp, common);
    } else if (*ensemble_cmd) {
      used = ensemble_cmd;
      out = RunEnsemble(ens, common);
    } else if (*analyze_cmd) {
      used = analyze_cmd;
      out = RunAnalyze(an_src, an_hyp, an_ref, an_annotator, common);
    } else if (*correlate_cmd) {
      used = correlate_cmd;
      out = RunCorrelate(co_a, co_b, co_field);
    } else if (*sigtest_cmd) {
      used = sigtest_cmd;
      out = RunSigtest(sig, common);
    } else if (*run_cmd) {
      used = run_cmd;
      out = RunJudge(jr, common);
    } else if (*serve_cmd) {
      used = serve_cmd;
      RunServe(sv_store, sv_config, sv_host, sv_port, sv_ui);
      return 0;
    }
    std::cout << out.table << std::flush;
    if (!common.report_path.empty() && used != nullptr) {
      RunManifest manifest;
      manifest.subcommand = used == run_cmd ? "judge run" : used->get_name();
      RecordOptions(*used, manifest);
      RecordOptions(app, manifest);
      for (const std::string& path : out.inputs) {
        manifest.input_digests[path] = Sha256Hex(ReadFile(path));
      }
      manifest.seed = common.seed;
      manifest.version = GEC_VERSION;
      manifest.timestamp = UtcTimestamp();
      WriteReport(common.report_path, out.report.dump(2) + "\n", manifest);
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    if (used != nullptr) std::cerr << used->help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "gec-eval: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "gec-eval: unexpected failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace
}  // namespace gec

int main(int argc, char** argv) { return gec::Main(argc, argv); }
