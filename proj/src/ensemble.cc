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

#include "gec/ensemble.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gec/digest.h"
#include "gec/parallel.h"

namespace gec {
namespace {

std::vector<std::size_t> ResolvePriority(const EnsembleConfig& config,
                                         std::size_t k) {
  if (config.priority.empty()) {
    std::vector<std::size_t> identity(k);
    for (std::size_t i = 0; i < k; ++i) identity[i] = i;
    return identity;
  }
  std::vector<std::size_t> sorted = config.priority;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted.size() != k || sorted[i] != i) {
      throw ContractViolation(
          "priority must be a permutation of the participating systems");
    }
  }
  return config.priority;
}

using Ngram = std::vector<std::string>;

std::set<Ngram> NgramSet(const Sentence& s, int n) {
  const auto& t = s.tokens();
  if (static_cast<int>(t.size()) < n) return {t};
  std::set<Ngram> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    out.emplace(t.begin() + i, t.begin() + i + n);
  }
  return out;
}

}  // namespace

Fallback ParseFallback(std::string_view name) {
  if (name == "best") return Fallback::kBestModel;
  if (name == "meta") return Fallback::kMetaModel;
  if (name == "perplexity") return Fallback::kPerplexity;
  if (name == "ngram") return Fallback::kNGram;
  throw ConfigError("unknown fallback '" + std::string(name) + "'");
}

std::string_view FallbackName(Fallback fallback) {
  switch (fallback) {
    case Fallback::kBestModel:
      return "best";
    case Fallback::kMetaModel:
      return "meta";
    case Fallback::kPerplexity:
      return "perplexity";
    case Fallback::kNGram:
      return "ngram";
  }
  return "best";
}

std::size_t SeededMetaJudge::Choose(const Sentence& source,
                                    std::span<const Sentence> candidates) {
  if (candidates.empty()) throw ContractViolation("no candidates to choose from");
  std::string key = source.Join();
  for (const Sentence& c : candidates) {
    key += '\n';
    key += c.Join();
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed_),
                    static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(StableHash64(key))};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return pick(rng);
}

EnsembleDecision EnsembleSentence(const Sentence& source,
                                  std::span<const Sentence> candidates,
                                  const EnsembleConfig& config,
                                  PerplexityProvider* ppl,
                                  MetaJudgeClient* judge) {
  const std::size_t k = candidates.size();
  if (k < 2) throw ContractViolation("ensembling needs at least two systems");
  if (config.ngram_n < 1) throw ContractViolation("ngram_n must be >= 1");
  if (config.fallback == Fallback::kPerplexity && ppl == nullptr) {
    throw ConfigError("perplexity fallback requires a perplexity provider");
  }
  if (config.fallback == Fallback::kMetaModel && judge == nullptr) {
    throw ConfigError("meta-model fallback requires a judge client");
  }
  const std::vector<std::size_t> priority = ResolvePriority(config, k);
  std::vector<std::size_t> rank(k);
  for (std::size_t r = 0; r < k; ++r) rank[priority[r]] = r;
  const int threshold = config.vote_threshold > 0
                            ? config.vote_threshold
                            : static_cast<int>((k + 1) / 2);

  // Stage 1: identical outputs vote together.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t s = 0; s < k; ++s) groups[candidates[s].Join()].push_back(s);
  const std::vector<std::size_t>* winner = nullptr;
  std::size_t winner_rank = k;
  for (const auto& [_, members] : groups) {
    if (static_cast<int>(members.size()) < threshold) continue;
    std::size_t best_rank = k;
    for (std::size_t m : members) best_rank = std::min(best_rank, rank[m]);
    if (winner == nullptr || members.size() > winner->size() ||
        (members.size() == winner->size() && best_rank < winner_rank)) {
      winner = &members;
      winner_rank = best_rank;
    }
  }
  if (winner != nullptr) {
    const std::size_t system = priority[winner_rank];
    return {candidates[system], system, true,
            static_cast<int>(winner->size())};
  }

  // Stage 2: no consensus.
  auto better = [&](double score, std::size_t s, double best_score,
                    std::size_t best, bool maximize) {
    if (score != best_score) return maximize ? score > best_score
                                             : score < best_score;
    return rank[s] < rank[best];
  };
  std::size_t chosen = priority[0];
  switch (config.fallback) {
    case Fallback::kBestModel:
      break;
    case Fallback::kMetaModel: {
      chosen = judge->Choose(source, candidates);
      if (chosen >= k) {
        throw ProviderError("meta judge returned index " +
                            std::to_string(chosen) + " for " +
                            std::to_string(k) + " candidates");
      }
      break;
    }
    case Fallback::kPerplexity: {
      double best_score = ppl->Perplexity(candidates[chosen]);
      for (std::size_t s = 0; s < k; ++s) {
        if (s == chosen) continue;
        const double p = ppl->Perplexity(candidates[s]);
        if (better(p, s, best_score, chosen, /*maximize=*/false)) {
          chosen = s;
          best_score = p;
        }
      }
      break;
    }
    case Fallback::kNGram: {
      std::vector<double> mean(k, 0.0);
      for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
          if (s != t) {
            mean[s] += JaccardNgram(candidates[s], candidates[t], config.ngram_n);
          }
        }
        mean[s] /= static_cast<double>(k - 1);
      }
      for (std::size_t s = 0; s < k; ++s) {
        if (better(mean[s], s, mean[chosen], chosen, /*maximize=*/true)) {
          chosen = s;
        }
      }
      break;
    }
  }
  return {candidates[chosen], chosen, false, 1};
}

std::vector<Sentence> EnsembleCorpus(
    std::span<const Sentence> sources,
    std::span<const std::vector<Sentence>> systems,
    const EnsembleConfig& config, PerplexityProvider* ppl,
    MetaJudgeClient* judge, int jobs) {
  for (const auto& system : systems) {
    if (system.size() != sources.size()) {
      throw ContractViolation("system output length " +
                              std::to_string(system.size()) +
                              " differs from source length " +
                              std::to_string(sources.size()));
    }
  }
  std::vector<Sentence> out(sources.size());
  ParallelFor(sources.size(), jobs, [&](std::size_t i) {
    std::vector<Sentence> candidates;
    candidates.reserve(systems.size());
    for (const auto& system : systems) candidates.push_back(system[i]);
    out[i] = EnsembleSentence(sources[i], candidates, config, ppl, judge).chosen;
  });
  return out;
}

double JaccardNgram(const Sentence& a, const Sentence& b, int n) {
  if (n < 1) throw ContractViolation("n-gram order must be >= 1");
  const std::set<Ngram> ga = NgramSet(a, n);
  const std::set<Ngram> gb = NgramSet(b, n);
  std::size_t common = 0;
  for (const Ngram& g : ga) common += gb.count(g);
  const std::size_t unioned = ga.size() + gb.size() - common;
  return unioned == 0 ? 1.0
                      : static_cast<double>(common) /
                            static_cast<double>(unioned);
}

std::vector<Edit> EditMajority(std::span<const std::vector<Edit>> edit_sets,
                               int threshold) {
  if (threshold < 1) throw ContractViolation("vote threshold must be >= 1");
  struct Tally {
    Edit edit;
    int votes = 0;
  };
  std::vector<Tally> tallies;
  for (const auto& set : edit_sets) {
    for (const Edit& e : DedupeEdits(set)) {
      auto it = std::find_if(tallies.begin(), tallies.end(),
                             [&](const Tally& t) { return t.edit.SameCorrection(e); });
      if (it == tallies.end()) {
        tallies.push_back({e, 1});
      } else {
        ++it->votes;
      }
    }
  }
  std::vector<Edit> kept;
  for (Tally& t : tallies) {
    if (t.votes >= threshold) kept.push_back(std::move(t.edit));
  }
  std::sort(kept.begin(), kept.end(), EditOrder);
  std::vector<bool> conflict(kept.size(), false);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      if (EditsOverlap(kept[i], kept[j])) conflict[i] = conflict[j] = true;
    }
  }
  std::vector<Edit> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (!conflict[i]) out.push_back(std::move(kept[i]));
  }
  return out;
}

}  // namespace gec
