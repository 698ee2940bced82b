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

// Rank correlation, paired permutation testing and chance-corrected
// agreement.

#ifndef GEC_STATS_H_
#define GEC_STATS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gec {

struct CorrelationResult {
  double rho = 0;
  double p_value = 1;
  std::size_t n = 0;
  // "exact" (full permutation enumeration) or "t" (t approximation).
  std::string p_method;
};

// 1-based ranks; tied values share the average of their positions.
std::vector<double> AverageRanks(std::span<const double> values);

// Spearman's rho as the Pearson correlation of average ranks. Two-sided p is
// exact for n <= 8, t-approximated above. Throws InsufficientData for n < 3
// or a constant input.
CorrelationResult Spearman(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kSpearmanExactMaxN = 8;

// Identifies the generator used by PermutationTest.
inline constexpr const char* kPermutationRng =
    "mt19937_64/seed_seq(seed,iteration)";

struct SignificanceResult {
  double observed_delta = 0;
  double p_value = 1;
  long iterations = 0;
  std::uint64_t seed = 0;
  std::string rng = kPermutationRng;
  // Set when iterations == 0; p is then 1 by construction.
  bool degenerate = false;
};

// Per-sentence additive statistics, e.g. {tp, fp, fn} or GLEU counts.
using Contribution = std::vector<double>;
// Maps summed statistics to a corpus score.
using MetricReducer = std::function<double(std::span<const double>)>;

std::vector<double> SumContributions(std::span<const Contribution> rows);

// Paired sign-flip test. Each iteration swaps every sentence's (a, b) pair
// independently with probability 1/2, drawing from a generator seeded by
// (seed, iteration) so results do not depend on scheduling.
// p = (1 + #{|delta_perm| >= |delta_obs|}) / (1 + iterations).
SignificanceResult PermutationTest(std::span<const Contribution> a,
                                   std::span<const Contribution> b,
                                   const MetricReducer& reduce,
                                   long iterations = 10000,
                                   std::uint64_t seed = 42, int jobs = 1);

struct AgreementStats {
  double kappa = 0;
  double observed_agreement = 0;
  double expected_agreement = 0;
  std::size_t n = 0;
};

// Cohen's kappa. When both raters use one identical label throughout,
// expected agreement is 1 and kappa is defined as 1.
AgreementStats CohenKappa(std::span<const std::string> a,
                          std::span<const std::string> b);

}  // namespace gec

#endif  // GEC_STATS_H_
