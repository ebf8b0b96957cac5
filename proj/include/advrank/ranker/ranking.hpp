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

#ifndef ADVRANK_RANKER_RANKING_HPP
#define ADVRANK_RANKER_RANKING_HPP

#include <span>
#include <string>
#include <vector>

#include "advrank/corpus/corpus.hpp"
#include "advrank/ranker/model.hpp"

namespace advrank {

struct RankedDoc {
  std::string doc_id;
  double score = 0;
  std::size_t rank = 0;  // 1-based
};

// Descending score; equal scores ordered by ascending doc id.
std::vector<RankedDoc> rank_scores(std::span<const std::string> doc_ids,
                                   std::span<const double> scores);

// Scores every pool document against its query and ranks them.
std::vector<RankedDoc> rank_pool(const RankerModelF& model, const Corpus& corpus,
                                 const CandidatePool& pool);

// Raw scores of a pool in pool order.
std::vector<double> score_pool(const RankerModelF& model, const Corpus& corpus,
                               const CandidatePool& pool);

// Rank (1-based) that a document with `score` and id `doc_id` would get
// against the fixed scores of the other pool members (its own entry, if
// present in `doc_ids`, is ignored).
std::size_t rank_against(const std::string& doc_id, double score,
                         std::span<const std::string> doc_ids, std::span<const double> scores);

// NDCG@k with gains 2^g - 1 and log2(rank + 1) discounts. `ranked_grades`
// are the grades in ranked order; the ideal ordering is taken over all of
// them. Returns 0 when no grade is positive.
double ndcg_at_k(std::span<const int> ranked_grades, std::size_t k);

}  // namespace advrank

#endif  // ADVRANK_RANKER_RANKING_HPP
