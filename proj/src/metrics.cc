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

#include "gec/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "gec/parallel.h"
#include "gec/text_util.h"

namespace gec {
namespace {

const std::vector<Edit>& EmptyEdits() {
  static const std::vector<Edit> kEmpty;
  return kEmpty;
}

double CheckedWeight(const EditWeightProvider& weights, const Edit& edit,
                     const Sentence& source, std::size_t index) {
  const double w = weights.Weight(edit, source, index);
  if (!(w > 0.0 && w <= 2.0)) {
    throw ContractViolation("edit weight " + std::to_string(w) +
                            " outside (0, 2] in sentence " +
                            std::to_string(index));
  }
  return w;
}

SentenceMatch MatchAgainst(std::span<const Edit> hyp,
                           const std::vector<Edit>& ref, int annotator,
                           const Sentence& source, std::size_t index,
                           const EditWeightProvider& weights) {
  SentenceMatch m;
  m.annotator = annotator;
  m.reference = &ref;
  m.hyp_matched.assign(hyp.size(), false);
  m.ref_matched.assign(ref.size(), false);
  for (std::size_t h = 0; h < hyp.size(); ++h) {
    for (std::size_t r = 0; r < ref.size(); ++r) {
      if (hyp[h].SameCorrection(ref[r])) {
        m.hyp_matched[h] = true;
        m.ref_matched[r] = true;
      }
    }
  }
  for (std::size_t h = 0; h < hyp.size(); ++h) {
    const double w = CheckedWeight(weights, hyp[h], source, index);
    (m.hyp_matched[h] ? m.counts.tp : m.counts.fp) += w;
  }
  for (std::size_t r = 0; r < ref.size(); ++r) {
    if (!m.ref_matched[r]) {
      m.counts.fn += CheckedWeight(weights, ref[r], source, index);
    }
  }
  return m;
}

ScoreReport Reduce(std::span<const std::vector<Edit>> hyp_edits,
                   const Corpus& refs, const EditWeightProvider& weights,
                   double beta, int jobs) {
  if (hyp_edits.size() != refs.size()) {
    throw ContractViolation("hypothesis has " +
                            std::to_string(hyp_edits.size()) +
                            " sentences but the reference corpus has " +
                            std::to_string(refs.size()));
  }
  const std::size_t n = refs.size();
  std::vector<std::vector<Edit>> deduped(n);
  std::vector<SentenceMatch> matches(n);
  ParallelFor(n, jobs, [&](std::size_t i) {
    deduped[i] = DedupeEdits(hyp_edits[i]);
    matches[i] = SelectReference(deduped[i], refs.sentences[i], i, beta,
                                 weights);
  });

  ScoreReport report;
  report.beta = beta;
  report.per_sentence.reserve(n);
  report.selected_annotator.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SentenceMatch& m = matches[i];
    const Sentence& source = refs.sentences[i].source;
    report.totals += m.counts;
    report.per_sentence.push_back(m.counts);
    report.selected_annotator.push_back(m.annotator);
    for (std::size_t h = 0; h < deduped[i].size(); ++h) {
      if (!m.hyp_matched[h]) {
        report.per_type[deduped[i][h].tag].fp +=
            weights.Weight(deduped[i][h], source, i);
      }
    }
    for (std::size_t r = 0; r < m.reference->size(); ++r) {
      const Edit& e = (*m.reference)[r];
      Counts& c = report.per_type[e.tag];
      (m.ref_matched[r] ? c.tp : c.fn) += weights.Weight(e, source, i);
    }
  }
  report.precision = Precision(report.totals);
  report.recall = Recall(report.totals);
  report.f_beta = FBeta(report.totals, beta);
  return report;
}

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts CountNgrams(const Sentence& s, int n) {
  NgramCounts out;
  const auto& t = s.tokens();
  if (static_cast<int>(t.size()) < n) return out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    ++out[std::vector<std::string>(t.begin() + i, t.begin() + i + n)];
  }
  return out;
}

int OverlapCount(const NgramCounts& a, const NgramCounts& b) {
  int total = 0;
  for (const auto& [gram, count] : a) {
    auto it = b.find(gram);
    if (it != b.end()) total += std::min(count, it->second);
  }
  return total;
}

}  // namespace

double Precision(const Counts& c) {
  const double denom = c.tp + c.fp;
  return denom == 0 ? 1.0 : c.tp / denom;
}

double Recall(const Counts& c) {
  const double denom = c.tp + c.fn;
  return denom == 0 ? 1.0 : c.tp / denom;
}

double FBeta(const Counts& c, double beta) {
  const double p = Precision(c);
  const double r = Recall(c);
  const double b2 = beta * beta;
  const double denom = b2 * p + r;
  return denom == 0 ? 0.0 : (1 + b2) * p * r / denom;
}

TableWeights TableWeights::Parse(std::string_view text) {
  TableWeights table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos
                                              ? std::string_view::npos
                                              : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5) {
      throw ParseError(line_no, "expected 5 tab-separated weight fields");
    }
    std::size_t index = 0;
    Edit e;
    auto parse_num = [&](std::string_view f, auto& out) {
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(line_no, "bad number '" + std::string(f) + "'");
      }
    };
    parse_num(fields[0], index);
    parse_num(fields[1], e.start);
    parse_num(fields[2], e.end);
    if (fields[3] != "-NONE-") e.replacement = Sentence::FromText(fields[3]).tokens();
    double w = 0;
    parse_num(fields[4], w);
    if (!(w > 0.0 && w <= 2.0)) {
      throw ParseError(line_no, "weight outside (0, 2]");
    }
    table.Set(index, e, w);
  }
  return table;
}

void TableWeights::Set(std::size_t sentence_index, const Edit& edit,
                       double weight) {
  weights_[{sentence_index, edit.start, edit.end,
            JoinTokens(edit.replacement)}] = weight;
}

double TableWeights::Weight(const Edit& edit, const Sentence&,
                            std::size_t sentence_index) const {
  auto it = weights_.find(
      {sentence_index, edit.start, edit.end, JoinTokens(edit.replacement)});
  return it == weights_.end() ? fallback_ : it->second;
}

std::vector<Edit> DedupeEdits(std::span<const Edit> edits) {
  std::vector<Edit> out;
  for (const Edit& e : edits) {
    if (e.IsNoop()) continue;
    bool seen = std::any_of(out.begin(), out.end(), [&](const Edit& o) {
      return o.SameCorrection(e);
    });
    if (!seen) out.push_back(e);
  }
  return out;
}

SentenceMatch SelectReference(std::span<const Edit> hyp,
                              const AnnotatedSentence& sentence,
                              std::size_t sentence_index, double beta,
                              const EditWeightProvider& weights,
                              std::optional<int> fixed_annotator) {
  if (fixed_annotator.has_value()) {
    auto it = sentence.edits_by_annotator.find(*fixed_annotator);
    const std::vector<Edit>& ref =
        it == sentence.edits_by_annotator.end() ? EmptyEdits() : it->second;
    return MatchAgainst(hyp, ref, *fixed_annotator, sentence.source,
                        sentence_index, weights);
  }
  if (sentence.edits_by_annotator.empty()) {
    return MatchAgainst(hyp, EmptyEdits(), -1, sentence.source, sentence_index,
                        weights);
  }
  std::optional<SentenceMatch> best;
  double best_f = 0;
  for (const auto& [annotator, ref] : sentence.edits_by_annotator) {
    SentenceMatch m = MatchAgainst(hyp, ref, annotator, sentence.source,
                                   sentence_index, weights);
    const double f = FBeta(m.counts, beta);
    if (!best || f > best_f || (f == best_f && m.counts.tp > best->counts.tp)) {
      best_f = f;
      best = std::move(m);
    }
  }
  return std::move(*best);
}

ScoreReport ScoreErrant(std::span<const std::vector<Edit>> hyp_edits,
                        const Corpus& refs, double beta, int jobs) {
  static const UniformWeights kUnit;
  return Reduce(hyp_edits, refs, kUnit, beta, jobs);
}

ScoreReport ScorePtErrant(std::span<const std::vector<Edit>> hyp_edits,
                          const Corpus& refs,
                          const EditWeightProvider& weights, double beta,
                          int jobs) {
  return Reduce(hyp_edits, refs, weights, beta, jobs);
}

std::vector<double> GleuSentenceStats(const Sentence& source,
                                      const Sentence& hypothesis,
                                      const Sentence& reference, int n_max) {
  std::vector<double> stats;
  stats.reserve(2 + 2 * n_max);
  const int hlen = static_cast<int>(hypothesis.size());
  stats.push_back(hlen);
  stats.push_back(static_cast<double>(reference.size()));
  for (int n = 1; n <= n_max; ++n) {
    NgramCounts h = CountNgrams(hypothesis, n);
    NgramCounts r = CountNgrams(reference, n);
    NgramCounts s_not_in_ref = CountNgrams(source, n);
    for (auto it = s_not_in_ref.begin(); it != s_not_in_ref.end();) {
      it = r.count(it->first) ? s_not_in_ref.erase(it) : std::next(it);
    }
    const int numerator = OverlapCount(h, r) - OverlapCount(h, s_not_in_ref);
    stats.push_back(std::max(numerator, 0));
    stats.push_back(std::max(hlen + 1 - n, 0));
  }
  return stats;
}

double GleuFromStats(std::span<const double> stats, int n_max, bool smooth) {
  if (stats.size() != static_cast<std::size_t>(2 + 2 * n_max)) {
    throw ContractViolation("GLEU statistics have the wrong arity");
  }
  const double c = stats[0];
  const double r = stats[1];
  if (c == 0) return 0.0;
  double log_precision = 0;
  for (int n = 1; n <= n_max; ++n) {
    double num = stats[2 * n];
    double den = stats[2 * n + 1];
    if (smooth && n >= 2) {
      num += 1;
      den += 1;
    }
    if (num == 0 || den == 0) return 0.0;
    log_precision += std::log(num / den);
  }
  return std::exp(std::min(0.0, 1.0 - r / c) + log_precision / n_max);
}

GleuReport ScoreGleu(std::span<const Sentence> sources,
                     std::span<const Sentence> hypotheses,
                     std::span<const std::vector<Sentence>> references,
                     int n_max) {
  if (hypotheses.empty()) {
    throw ContractViolation("GLEU needs a non-empty hypothesis corpus");
  }
  if (references.empty()) {
    throw ContractViolation("GLEU needs at least one reference set");
  }
  if (sources.size() != hypotheses.size()) {
    throw ContractViolation("source and hypothesis lengths differ");
  }
  for (const auto& set : references) {
    if (set.size() != hypotheses.size()) {
      throw ContractViolation("reference set length differs from hypothesis");
    }
  }
  if (n_max < 1) throw ContractViolation("GLEU order must be positive");

  GleuReport report;
  report.n_max = n_max;
  const std::size_t n = hypotheses.size();
  report.per_sentence.assign(n, 0.0);
  double score_sum = 0;
  double bp_sum = 0;
  for (const auto& set : references) {
    std::vector<double> total(2 + 2 * n_max, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> s =
          GleuSentenceStats(sources[i], hypotheses[i], set[i], n_max);
      for (std::size_t k = 0; k < s.size(); ++k) total[k] += s[k];
      report.per_sentence[i] += GleuFromStats(s, n_max, /*smooth=*/true);
    }
    GleuReferenceScore ref_score;
    ref_score.score = GleuFromStats(total, n_max);
    ref_score.brevity_penalty =
        total[0] == 0 ? 0.0 : std::exp(std::min(0.0, 1.0 - total[1] / total[0]));
    for (int k = 1; k <= n_max; ++k) {
      ref_score.precisions.push_back(
          total[2 * k + 1] == 0 ? 0.0 : total[2 * k] / total[2 * k + 1]);
    }
    score_sum += ref_score.score;
    bp_sum += ref_score.brevity_penalty;
    report.per_reference.push_back(std::move(ref_score));
  }
  const double sets = static_cast<double>(references.size());
  report.corpus_score = score_sum / sets;
  report.brevity_penalty = bp_sum / sets;
  for (double& s : report.per_sentence) s /= sets;
  return report;
}

std::vector<std::vector<Sentence>> ReferenceSetsFromCorpus(const Corpus& refs) {
  std::set<int> ids;
  for (const auto& s : refs.sentences) {
    for (const auto& [id, _] : s.edits_by_annotator) ids.insert(id);
  }
  if (ids.empty()) ids.insert(0);
  std::vector<std::vector<Sentence>> sets;
  for (int id : ids) {
    std::vector<Sentence> set;
    set.reserve(refs.size());
    for (const auto& s : refs.sentences) {
      if (s.edits_by_annotator.empty()) {
        set.push_back(s.source);
        continue;
      }
      auto it = s.edits_by_annotator.find(id);
      if (it == s.edits_by_annotator.end()) it = s.edits_by_annotator.begin();
      set.push_back(ApplyEdits(s.source, it->second));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

int TokenLevenshtein(const std::vector<std::string>& a,
                     const std::vector<std::string>& b) {
  std::vector<int> prev(b.size() + 1);
  std::vector<int> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double LevenshteinTokenRatio(const Sentence& a, const Sentence& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(TokenLevenshtein(a.tokens(), b.tokens())) /
                   static_cast<double>(longest);
}

double TokenSortRatio(const Sentence& a, const Sentence& b) {
  std::vector<std::string> sa = a.tokens();
  std::vector<std::string> sb = b.tokens();
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return LevenshteinTokenRatio(Sentence(std::move(sa)), Sentence(std::move(sb)));
}

int ScribendiSentence(const Sentence& source, const Sentence& hypothesis,
                      PerplexityProvider& ppl, const ScribendiConfig& config) {
  if (source == hypothesis) return 0;
  if (ppl.Perplexity(hypothesis) >= ppl.Perplexity(source)) return -1;
  const double ratio = std::max(LevenshteinTokenRatio(source, hypothesis),
                                TokenSortRatio(source, hypothesis));
  return ratio >= config.ratio_threshold ? 1 : -1;
}

ScribendiReport ScoreScribendi(std::span<const Sentence> sources,
                               std::span<const Sentence> hypotheses,
                               PerplexityProvider& ppl,
                               const ScribendiConfig& config) {
  if (sources.size() != hypotheses.size()) {
    throw ContractViolation("source and hypothesis lengths differ");
  }
  ScribendiReport report;
  report.per_sentence.reserve(sources.size());
  long sum = 0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    int s = 0;
    try {
      s = ScribendiSentence(sources[i], hypotheses[i], ppl, config);
    } catch (const std::exception& e) {
      throw ProviderError("perplexity provider failed on sentence " +
                          std::to_string(i) + ": " + e.what());
    }
    report.per_sentence.push_back(s);
    sum += s;
  }
  report.score = sources.empty()
                     ? 0.0
                     : static_cast<double>(sum) /
                           static_cast<double>(sources.size());
  return report;
}

}  // namespace gec
