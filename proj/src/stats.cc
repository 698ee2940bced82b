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

#include "gec/stats.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "gec/errors.h"
#include "gec/parallel.h"

namespace gec {
namespace {

constexpr double kTieTolerance = 1e-12;

double PearsonOfRanks(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) {
    throw InsufficientData("rank correlation of a constant sequence");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double ExactSpearmanP(const std::vector<double>& rx,
                      const std::vector<double>& ry, double rho) {
  std::vector<std::size_t> perm(ry.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> shuffled(ry.size());
  long hits = 0;
  long total = 0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = ry[perm[i]];
    if (std::abs(PearsonOfRanks(rx, shuffled)) >= std::abs(rho) - kTieTolerance) {
      ++hits;
    }
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

double TApproximationP(double rho, std::size_t n) {
  if (std::abs(rho) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(df / (1 - rho * rho));
  boost::math::students_t dist(df);
  return std::min(1.0, 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

}  // namespace

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean(i+1 .. j+1).
    const double rank = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

CorrelationResult Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractViolation("spearman inputs differ in length");
  }
  if (x.size() < 3) {
    throw InsufficientData("spearman needs at least 3 pairs, got " +
                           std::to_string(x.size()));
  }
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  CorrelationResult result;
  result.n = x.size();
  result.rho = PearsonOfRanks(rx, ry);
  if (result.n <= kSpearmanExactMaxN) {
    result.p_value = ExactSpearmanP(rx, ry, result.rho);
    result.p_method = "exact";
  } else {
    result.p_value = TApproximationP(result.rho, result.n);
    result.p_method = "t";
  }
  return result;
}

std::vector<double> SumContributions(std::span<const Contribution> rows) {
  std::vector<double> total;
  for (const Contribution& row : rows) {
    if (total.empty()) total.assign(row.size(), 0.0);
    if (row.size() != total.size()) {
      throw ContractViolation("contributions differ in arity");
    }
    for (std::size_t k = 0; k < row.size(); ++k) total[k] += row[k];
  }
  return total;
}

SignificanceResult PermutationTest(std::span<const Contribution> a,
                                   std::span<const Contribution> b,
                                   const MetricReducer& reduce,
                                   long iterations, std::uint64_t seed,
                                   int jobs) {
  if (a.size() != b.size()) {
    throw ContractViolation("paired systems cover " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()) + " sentences");
  }
  if (iterations < 0) throw ContractViolation("iterations must be >= 0");
  SignificanceResult result;
  result.iterations = iterations;
  result.seed = seed;
  result.degenerate = iterations == 0;
  result.observed_delta = reduce(SumContributions(a)) - reduce(SumContributions(b));
  const double threshold = std::abs(result.observed_delta) - kTieTolerance;

  const std::size_t n = a.size();
  const std::size_t arity = n == 0 ? 0 : a[0].size();
  std::vector<char> hit(static_cast<std::size_t>(iterations), 0);
  ParallelFor(hit.size(), jobs, [&](std::size_t it) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(it),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(it) >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<double> sum_a(arity, 0.0);
    std::vector<double> sum_b(arity, 0.0);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng();
      const bool flip = (bits >> (i % 64)) & 1u;
      const Contribution& x = flip ? b[i] : a[i];
      const Contribution& y = flip ? a[i] : b[i];
      for (std::size_t k = 0; k < arity; ++k) {
        sum_a[k] += x[k];
        sum_b[k] += y[k];
      }
    }
    const double delta = reduce(sum_a) - reduce(sum_b);
    hit[it] = std::abs(delta) >= threshold ? 1 : 0;
  });
  const long hits = std::count(hit.begin(), hit.end(), 1);
  result.p_value = static_cast<double>(1 + hits) / static_cast<double>(1 + iterations);
  return result;
}

AgreementStats CohenKappa(std::span<const std::string> a,
                          std::span<const std::string> b) {
  if (a.size() != b.size()) {
    throw ContractViolation("rater label sequences differ in length");
  }
  if (a.empty()) throw ContractViolation("kappa needs at least one item");
  const std::size_t n = a.size();
  std::map<std::string, long> count_a;
  std::map<std::string, long> count_b;
  long agree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ++count_a[a[i]];
    ++count_b[b[i]];
    if (a[i] == b[i]) ++agree;
  }
  long expected_num = 0;
  for (const auto& [label, ca] : count_a) {
    auto it = count_b.find(label);
    if (it != count_b.end()) expected_num += ca * it->second;
  }
  const double nn = static_cast<double>(n);
  AgreementStats stats;
  stats.n = n;
  stats.observed_agreement = static_cast<double>(agree) / nn;
  stats.expected_agreement = static_cast<double>(expected_num) / (nn * nn);
  if (expected_num == static_cast<long>(n * n)) {
    stats.kappa = 1.0;
  } else {
    stats.kappa = (stats.observed_agreement - stats.expected_agreement) /
                  (1.0 - stats.expected_agreement);
  }
  return stats;
}

}  // namespace gec
