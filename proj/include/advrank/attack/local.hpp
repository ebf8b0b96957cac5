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

#ifndef ADVRANK_ATTACK_LOCAL_HPP
#define ADVRANK_ATTACK_LOCAL_HPP

#include <string>
#include <vector>

#include "advrank/attack/perturbation.hpp"
#include "advrank/attack/spec.hpp"
#include "advrank/corpus/corpus.hpp"
#include "advrank/ranker/model.hpp"

namespace advrank {

// A query's pool together with the unperturbed scores of its documents.
// Re-ranking a perturbed document compares it against these fixed scores.
struct PoolContext {
  const Query* query = nullptr;
  const CandidatePool* pool = nullptr;
  std::vector<double> scores;  // pool order

  double score_of(const std::string& doc_id) const;
  std::size_t rank_of(const std::string& doc_id) const;
  // Rank a document would take with `score` while the rest stay fixed.
  std::size_t rank_with(const std::string& doc_id, double score) const;
};

PoolContext make_pool_context(const RankerModelF& model, const Corpus& corpus,
                              const std::string& query_id);

struct AttackResult {
  std::string query_id;
  std::string doc_id;
  Direction direction = Direction::kDemote;
  Mode mode = Mode::kAdd;
  PositionStrategy position = PositionStrategy::kStart;
  Perturbation perturbation;
  std::vector<std::string> token_strings;
  double score_original = 0;  // unperturbed document
  double score_before = 0;    // start of the search ([MASK] slots in add mode)
  double score_after = 0;
  std::size_t rank_before = 0;  // rank of the unperturbed document
  std::size_t rank_after = 0;
  std::size_t iterations = 0;       // accepted iterations
  std::vector<double> score_trace;  // score_before, then each accepted score
};

// Scores `doc_id` perturbed by `perturbation` and re-ranks it in its pool.
// Fills every field except iterations/score_before/score_trace.
AttackResult evaluate_perturbation(const RankerModelF& model, const Corpus& corpus,
                                   const PoolContext& ctx, const std::string& doc_id,
                                   const Perturbation& perturbation, Mode mode,
                                   Direction direction, PositionStrategy position);

// Gradient-guided token search for one (query, document):
//   1. pick the perturbation slots for spec.position ([MASK] placeholders
//      in add mode, the original tokens in replace mode);
//   2. per iteration, take the input-embedding gradient at each slot,
//      shortlist shortlist_k tokens by the HotFlip linear estimate, and run
//      a beam search over the slots left to right in which every complete
//      assignment is scored by an exact forward pass;
//   3. accept the best assignment only if it improves the objective by at
//      least epsilon, otherwise stop;
//   4. re-rank the perturbed document against the unchanged pool scores.
AttackResult local_attack(const RankerModelF& model, const Corpus& corpus, const PoolContext& ctx,
                          const std::string& doc_id, const AttackSpec& spec);

AttackResult local_attack(const RankerModelF& model, const Corpus& corpus,
                          const std::string& query_id, const std::string& doc_id,
                          const AttackSpec& spec);

}  // namespace advrank

#endif  // ADVRANK_ATTACK_LOCAL_HPP
