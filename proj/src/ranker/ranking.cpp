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

#include "advrank/ranker/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "advrank/common/errors.hpp"
#include "advrank/ranker/encode.hpp"
#include "advrank/ranker/forward.hpp"

namespace advrank {

std::vector<RankedDoc> rank_scores(std::span<const std::string> doc_ids,
                                   std::span<const double> scores) {
  if (doc_ids.size() != scores.size()) {
    throw ValidationError("rank_scores: ids and scores differ in length");
  }
  std::vector<std::size_t> order(doc_ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return doc_ids[a] < doc_ids[b];
  });
  std::vector<RankedDoc> out;
  out.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    out.push_back({doc_ids[order[r]], scores[order[r]], r + 1});
  }
  return out;
}

std::vector<double> score_pool(const RankerModelF& model, const Corpus& corpus,
                               const CandidatePool& pool) {
  const Query& q = corpus.query(pool.query_id);
  std::vector<double> scores;
  scores.reserve(pool.size());
  for (const std::string& id : pool.doc_ids) {
    scores.push_back(score(model, encode(q, corpus.document(id), model.config)));
  }
  return scores;
}

std::vector<RankedDoc> rank_pool(const RankerModelF& model, const Corpus& corpus,
                                 const CandidatePool& pool) {
  const std::vector<double> scores = score_pool(model, corpus, pool);
  return rank_scores(pool.doc_ids, scores);
}

std::size_t rank_against(const std::string& doc_id, double score,
                         std::span<const std::string> doc_ids, std::span<const double> scores) {
  std::size_t rank = 1;
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    if (doc_ids[i] == doc_id) continue;
    if (scores[i] > score || (scores[i] == score && doc_ids[i] < doc_id)) ++rank;
  }
  return rank;
}

double ndcg_at_k(std::span<const int> ranked_grades, std::size_t k) {
  auto dcg = [k](std::span<const int> g) {
    double s = 0;
    for (std::size_t i = 0; i < std::min(k, g.size()); ++i) {
      s += (std::pow(2.0, g[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
    }
    return s;
  };
  std::vector<int> ideal(ranked_grades.begin(), ranked_grades.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal);
  return idcg > 0 ? dcg(ranked_grades) / idcg : 0.0;
}

}  // namespace advrank
