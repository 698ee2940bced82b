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

// Corpus scorers: span-matching F-beta (unit or weighted edits), GLEU, and
// the reference-free Scribendi score.

#ifndef GEC_METRICS_H_
#define GEC_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gec/corpus.h"

namespace gec {

inline constexpr double kDefaultBeta = 0.5;

struct Counts {
  double tp = 0;
  double fp = 0;
  double fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

// 0/0 is 1 for precision and recall, 0 for F.
double Precision(const Counts& c);
double Recall(const Counts& c);
double FBeta(const Counts& c, double beta);

struct ScoreReport {
  Counts totals;
  double precision = 1;
  double recall = 1;
  double f_beta = 0;
  double beta = kDefaultBeta;
  // TP and FN keyed by the reference tag, FP by the hypothesis tag.
  std::map<ErrorTag, Counts> per_type;
  std::vector<Counts> per_sentence;
  // Selected annotator per sentence; -1 when the sentence has no annotators.
  std::vector<int> selected_annotator;
};

// Per-edit weight for weighted scoring, in (0, 2].
class EditWeightProvider {
 public:
  virtual ~EditWeightProvider() = default;
  virtual double Weight(const Edit& edit, const Sentence& source,
                        std::size_t sentence_index) const = 0;
};

class UniformWeights : public EditWeightProvider {
 public:
  double Weight(const Edit&, const Sentence&, std::size_t) const override {
    return 1.0;
  }
};

// Weights looked up by (sentence, start, end, replacement); missing entries
// weigh `fallback`. File format: one tab-separated record per line,
//   sentence_index <TAB> start <TAB> end <TAB> replacement <TAB> weight
// with "-NONE-" for an empty replacement and '#' starting a comment line.
class TableWeights : public EditWeightProvider {
 public:
  explicit TableWeights(double fallback = 1.0) : fallback_(fallback) {}
  static TableWeights Parse(std::string_view text);

  void Set(std::size_t sentence_index, const Edit& edit, double weight);
  double Weight(const Edit& edit, const Sentence& source,
                std::size_t sentence_index) const override;

 private:
  using Key = std::tuple<std::size_t, int, int, std::string>;
  double fallback_;
  std::map<Key, double> weights_;
};

// Reference chosen for one sentence and which edits matched.
struct SentenceMatch {
  int annotator = -1;
  const std::vector<Edit>* reference = nullptr;
  Counts counts;
  std::vector<bool> hyp_matched;
  std::vector<bool> ref_matched;
};

// Duplicate hypothesis corrections are collapsed before matching.
std::vector<Edit> DedupeEdits(std::span<const Edit> edits);

// Matches `hyp` against every annotator of `sentence` and keeps the one with
// the best sentence-local F-beta (ties: more TP, then lower id). With
// `fixed_annotator`, that annotator is used (empty reference when absent).
SentenceMatch SelectReference(std::span<const Edit> hyp,
                              const AnnotatedSentence& sentence,
                              std::size_t sentence_index, double beta,
                              const EditWeightProvider& weights,
                              std::optional<int> fixed_annotator = {});

ScoreReport ScoreErrant(std::span<const std::vector<Edit>> hyp_edits,
                        const Corpus& refs, double beta = kDefaultBeta,
                        int jobs = 1);

ScoreReport ScorePtErrant(std::span<const std::vector<Edit>> hyp_edits,
                          const Corpus& refs,
                          const EditWeightProvider& weights,
                          double beta = kDefaultBeta, int jobs = 1);

// ---------------------------------------------------------------- GLEU

inline constexpr int kDefaultGleuOrder = 4;

// Sufficient statistics of one sentence against one reference:
// {hyp_len, ref_len, num_1, den_1, ..., num_n, den_n}.
std::vector<double> GleuSentenceStats(const Sentence& source,
                                      const Sentence& hypothesis,
                                      const Sentence& reference, int n_max);

// Score from summed statistics. Any zero precision gives 0. With `smooth`,
// orders >= 2 use add-one smoothing.
double GleuFromStats(std::span<const double> stats, int n_max,
                     bool smooth = false);

struct GleuReferenceScore {
  double score = 0;
  double brevity_penalty = 1;
  std::vector<double> precisions;
};

struct GleuReport {
  double corpus_score = 0;
  std::vector<double> per_sentence;
  int n_max = kDefaultGleuOrder;
  // Mean over reference sets.
  double brevity_penalty = 1;
  std::vector<GleuReferenceScore> per_reference;
};

// `references[k][i]` is reference set k's correction of sentence i.
GleuReport ScoreGleu(std::span<const Sentence> sources,
                     std::span<const Sentence> hypotheses,
                     std::span<const std::vector<Sentence>> references,
                     int n_max = kDefaultGleuOrder);

// One corrected-reference set per annotator id present in the corpus. A
// sentence lacking annotator k falls back to its lowest-id annotator, and to
// the source when it has none.
std::vector<std::vector<Sentence>> ReferenceSetsFromCorpus(const Corpus& refs);

// ----------------------------------------------------------- Scribendi

class PerplexityProvider {
 public:
  virtual ~PerplexityProvider() = default;
  // Positive; throws ProviderError on failure.
  virtual double Perplexity(const Sentence& sentence) = 0;
};

struct ScribendiConfig {
  double ratio_threshold = 0.8;
};

struct ScribendiReport {
  double score = 0;
  std::vector<int> per_sentence;
};

// 1 - token edit distance / longer length; 1 when both are empty.
double LevenshteinTokenRatio(const Sentence& a, const Sentence& b);
// Same ratio after sorting each side's tokens.
double TokenSortRatio(const Sentence& a, const Sentence& b);
int TokenLevenshtein(const std::vector<std::string>& a,
                     const std::vector<std::string>& b);

int ScribendiSentence(const Sentence& source, const Sentence& hypothesis,
                      PerplexityProvider& ppl,
                      const ScribendiConfig& config = {});

// Errors from the provider are rethrown as ProviderError naming the
// sentence index.
ScribendiReport ScoreScribendi(std::span<const Sentence> sources,
                               std::span<const Sentence> hypotheses,
                               PerplexityProvider& ppl,
                               const ScribendiConfig& config = {});

}  // namespace gec

#endif  // GEC_METRICS_H_
