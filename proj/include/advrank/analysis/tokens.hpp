// Copyright (C) 2026 The advrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ADVRANK_ANALYSIS_TOKENS_HPP
#define ADVRANK_ANALYSIS_TOKENS_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "advrank/attack/global.hpp"
#include "advrank/attack/local.hpp"
#include "advrank/eval/experiments.hpp"
#include "advrank/eval/records.hpp"

namespace advrank {

// Occurrences of each adversarial token (by string) per query. Rows are
// sorted by query id; columns by descending total, ties by token string.
struct TokenFrequencyMatrix {
  std::vector<std::string> query_ids;
  std::vector<std::string> tokens;
  std::vector<std::vector<std::size_t>> counts;  // [query][token]
  std::vector<std::size_t> totals;               // per column

  std::size_t total(const std::string& token) const;  // 0 if absent
  // The first min(i, columns) tokens of the descending list.
  std::vector<std::string> top(std::size_t i) const;
  // Header query_id,<tokens...>; one row per query, then a `_total` row.
  Table to_table() const;
};

// Counts the tokens of `results`, optionally only those of one direction.
TokenFrequencyMatrix build_frequency_matrix(const std::vector<AttackResult>& results,
                                            std::optional<Direction> direction = std::nullopt);

// token,frequency in descending order.
Table frequency_list(const TokenFrequencyMatrix& matrix);

// |set(trigger) ∩ top-i local tokens| / i with i = trigger length. An empty
// trigger gives 0.
double trigger_overlap(const TokenFrequencyMatrix& matrix,
                       const std::vector<std::string>& trigger_tokens);

struct MostFrequentResult {
  TokenSequence tokens;  // the i most frequent tokens, as ids
  std::vector<RankShiftRecord> records;
  // Rows for most_frequent and global:
  // method,i,mean,stddev,records,random_mean
  Table summary;
};

// Prepends the i most frequent tokens of `matrix` (string lookup in the
// corpus vocabulary; unknown strings are skipped) to the demotion documents
// the plan samples, and compares with `trigger` and the random baseline on
// the same documents. i = 0 yields zero shifts.
MostFrequentResult most_frequent_attack(const RankerModelF& model, const Corpus& corpus,
                                        const ExperimentPlan& plan,
                                        const TokenFrequencyMatrix& matrix,
                                        const TriggerResult& trigger, std::size_t i);

// Fraction of promotion tokens that occur in their query's token set.
// Results of other directions are ignored; no promotion tokens gives 0.
double query_token_fraction(const std::vector<AttackResult>& results, const Corpus& corpus);

// Expected share of query terms among uniformly drawn vocabulary tokens:
// mean distinct query-term count over the corpus queries / vocabulary size.
double query_token_chance_rate(const Corpus& corpus);

}  // namespace advrank

#endif  // ADVRANK_ANALYSIS_TOKENS_HPP
