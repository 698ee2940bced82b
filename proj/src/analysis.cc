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

#include "gec/analysis.h"

#include <charconv>

#include <fmt/format.h>

namespace gec {
namespace {

constexpr std::string_view kHeader =
    "tag\tcorrection_rate\tfalse_insertion_rate\tgold_count\tsys_count";
constexpr std::string_view kAbsent = "NA";

struct Tally {
  long gold = 0;
  long matched = 0;
  long sys = 0;
  long sys_tp = 0;
};

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

template <typename T>
std::optional<T> ParseOptional(std::string_view field, std::size_t line_no) {
  if (field == kAbsent) return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line_no, "bad value '" + std::string(field) + "'");
  }
  return value;
}

template <typename T>
std::string FormatOptional(const std::optional<T>& v) {
  return v.has_value() ? fmt::format("{}", *v) : std::string(kAbsent);
}

}  // namespace

TypeProfile ProfileSystem(std::span<const std::vector<Edit>> hyp_edits,
                          const Corpus& refs, const ProfileOptions& options) {
  if (hyp_edits.size() != refs.size()) {
    throw ContractViolation("hypothesis has " +
                            std::to_string(hyp_edits.size()) +
                            " sentences but the reference corpus has " +
                            std::to_string(refs.size()));
  }
  static const UniformWeights kUnit;
  std::map<ErrorTag, Tally> tallies;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const std::vector<Edit> hyp = DedupeEdits(hyp_edits[i]);
    const SentenceMatch m = SelectReference(hyp, refs.sentences[i], i,
                                            options.beta, kUnit,
                                            options.fixed_annotator);
    for (std::size_t r = 0; r < m.reference->size(); ++r) {
      Tally& t = tallies[(*m.reference)[r].tag];
      ++t.gold;
      if (m.ref_matched[r]) ++t.matched;
    }
    for (std::size_t h = 0; h < hyp.size(); ++h) {
      Tally& t = tallies[hyp[h].tag];
      ++t.sys;
      if (m.hyp_matched[h]) ++t.sys_tp;
    }
  }
  TypeProfile profile;
  for (const auto& [tag, t] : tallies) {
    TypeRow row;
    row.gold_count = t.gold;
    row.sys_count = t.sys;
    if (t.gold > 0) {
      row.correction_rate = 100.0 * static_cast<double>(t.matched) /
                            static_cast<double>(t.gold);
    }
    if (t.sys > 0) {
      row.false_insertion_rate = 100.0 * static_cast<double>(t.sys - t.sys_tp) /
                                 static_cast<double>(t.sys);
    }
    profile.rows.emplace(tag, row);
  }
  return profile;
}

RateField ParseRateField(std::string_view name) {
  if (name == "correction") return RateField::kCorrection;
  if (name == "false_insertion" || name == "false-insertion") {
    return RateField::kFalseInsertion;
  }
  throw ConfigError("unknown rate field '" + std::string(name) + "'");
}

CorrelationResult CorrelateProfiles(const TypeProfile& a, const TypeProfile& b,
                                    RateField field) {
  auto get = [field](const TypeRow& row) {
    return field == RateField::kCorrection ? row.correction_rate
                                           : row.false_insertion_rate;
  };
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [tag, row_a] : a.rows) {
    auto it = b.rows.find(tag);
    if (it == b.rows.end()) continue;
    std::optional<double> x = get(row_a);
    std::optional<double> y = get(it->second);
    if (x && y) {
      xs.push_back(*x);
      ys.push_back(*y);
    }
  }
  if (xs.size() < 3) {
    throw InsufficientData("only " + std::to_string(xs.size()) +
                           " error types are rated in both profiles");
  }
  return Spearman(xs, ys);
}

std::string WriteProfileTsv(const TypeProfile& profile) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& [tag, row] : profile.rows) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\n", tag.ToString(),
                       FormatOptional(row.correction_rate),
                       FormatOptional(row.false_insertion_rate),
                       FormatOptional(row.gold_count),
                       FormatOptional(row.sys_count));
  }
  return out;
}

TypeProfile ParseProfileTsv(std::string_view text) {
  TypeProfile profile;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) throw ParseError(line_no, "missing profile header");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> f = SplitTabs(line);
    if (f.size() != 5) throw ParseError(line_no, "expected 5 columns");
    TypeRow row;
    row.correction_rate = ParseOptional<double>(f[1], line_no);
    row.false_insertion_rate = ParseOptional<double>(f[2], line_no);
    row.gold_count = ParseOptional<long>(f[3], line_no);
    row.sys_count = ParseOptional<long>(f[4], line_no);
    if (!profile.rows.emplace(ErrorTag::Parse(f[0]), row).second) {
      throw ParseError(line_no, "duplicate tag '" + std::string(f[0]) + "'");
    }
  }
  if (!header_seen) throw ParseError(1, "missing profile header");
  return profile;
}

}  // namespace gec
