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

// System combination. Whole-sentence majority voting picks a candidate when
// enough systems agree; otherwise a fallback strategy chooses among the
// candidates. An edit-level voter is provided as a separate baseline.

#ifndef GEC_ENSEMBLE_H_
#define GEC_ENSEMBLE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gec/corpus.h"
#include "gec/metrics.h"

namespace gec {

enum class Fallback { kBestModel, kMetaModel, kPerplexity, kNGram };

// "best", "meta", "perplexity", "ngram". Throws ConfigError.
Fallback ParseFallback(std::string_view name);
std::string_view FallbackName(Fallback fallback);

struct EnsembleConfig {
  Fallback fallback = Fallback::kBestModel;
  // Permutation of system indices, most trusted first. Empty means input
  // order.
  std::vector<std::size_t> priority;
  int ngram_n = 3;
  // 0 means ceil(K / 2).
  int vote_threshold = 0;
};

// Picks one of several candidate corrections.
class MetaJudgeClient {
 public:
  virtual ~MetaJudgeClient() = default;
  virtual std::size_t Choose(const Sentence& source,
                             std::span<const Sentence> candidates) = 0;
};

// Uniform random choice from a generator seeded by (seed, call content), so
// the answer for a given input is fixed regardless of call order.
class SeededMetaJudge : public MetaJudgeClient {
 public:
  explicit SeededMetaJudge(std::uint64_t seed) : seed_(seed) {}
  std::size_t Choose(const Sentence& source,
                     std::span<const Sentence> candidates) override;

 private:
  std::uint64_t seed_;
};

struct EnsembleDecision {
  Sentence chosen;
  std::size_t system = 0;  // index of a system that produced `chosen`
  bool majority = false;
  int votes = 0;
};

// Throws ConfigError when the fallback needs a provider that is null, and
// ContractViolation for fewer than two candidates or a bad priority list.
EnsembleDecision EnsembleSentence(const Sentence& source,
                                  std::span<const Sentence> candidates,
                                  const EnsembleConfig& config,
                                  PerplexityProvider* ppl = nullptr,
                                  MetaJudgeClient* judge = nullptr);

// Combines a whole corpus. `systems[k][i]` is system k's output for sentence
// i.
std::vector<Sentence> EnsembleCorpus(
    std::span<const Sentence> sources,
    std::span<const std::vector<Sentence>> systems,
    const EnsembleConfig& config, PerplexityProvider* ppl = nullptr,
    MetaJudgeClient* judge = nullptr, int jobs = 1);

// |G(a) ∩ G(b)| / |G(a) ∪ G(b)| over word n-gram sets. A sentence shorter
// than n contributes its whole token sequence as its only n-gram.
double JaccardNgram(const Sentence& a, const Sentence& b, int n);

// Keeps each (start, end, replacement) proposed by at least `threshold`
// systems. Kept edits that overlap each other are all dropped. `edit_sets`
// are in priority order; a kept edit takes its tag from the first proposer.
std::vector<Edit> EditMajority(std::span<const std::vector<Edit>> edit_sets,
                               int threshold);

}  // namespace gec

#endif  // GEC_ENSEMBLE_H_
