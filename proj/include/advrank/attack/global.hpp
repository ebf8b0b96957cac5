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

#ifndef ADVRANK_ATTACK_GLOBAL_HPP
#define ADVRANK_ATTACK_GLOBAL_HPP

#include <string>
#include <vector>

#include "advrank/attack/local.hpp"
#include "advrank/attack/spec.hpp"

namespace advrank {

enum class DocSelector { kTopRanked, kBottomRanked };

std::string_view to_string(DocSelector s);
DocSelector parse_selector(std::string_view s);

struct QueryDocPair {
  std::string query_id;
  std::string doc_id;

  bool operator==(const QueryDocPair&) const = default;
};

struct GlobalOptions {
  std::size_t batch_size = 32;  // pairs whose gradients are averaged per step
  std::size_t eval_size = 64;   // fixed pairs on which candidates are scored
};

struct TriggerResult {
  Direction direction = Direction::kDemote;
  DocSelector selector = DocSelector::kTopRanked;
  TokenSequence tokens;
  std::vector<std::string> token_strings;
  // Means over the evaluation subset: unperturbed documents, the [MASK]
  // trigger the search starts from, and the final trigger.
  double mean_score_original = 0;
  double mean_score_before = 0;
  double mean_score_after = 0;
  std::size_t iterations = 0;
  std::vector<double> score_trace;  // mean score with the [MASK] trigger, then per acceptance
  std::vector<QueryDocPair> eval_pairs;
};

// Documents of the top (ranks 1..depth/2) or bottom (depth/2+1..depth)
// half of each query's ranking, in query then rank order.
std::vector<QueryDocPair> select_pairs(const RankerModelF& model, const Corpus& corpus,
                                       const std::vector<std::string>& query_ids,
                                       DocSelector selector);

// Dataset-wide trigger prepended to every document. Starts from i [MASK]
// tokens; each iteration averages the slot gradients over a seeded batch,
// shortlists per slot from the averaged gradient, and beam-searches
// assignments scored by the exact mean score over the fixed evaluation
// subset. Improvements below epsilon end the search. spec.mode must be add
// and spec.position start.
TriggerResult global_attack(const RankerModelF& model, const Corpus& corpus,
                            const std::vector<std::string>& query_ids, DocSelector selector,
                            const AttackSpec& spec, const GlobalOptions& options = {});

// The perturbation that prepends `tokens` to a document.
Perturbation prepend_perturbation(const EncodedPair& encoded, const TokenSequence& tokens);

}  // namespace advrank

#endif  // ADVRANK_ATTACK_GLOBAL_HPP
