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

#ifndef ADVRANK_RANKER_TRAIN_HPP
#define ADVRANK_RANKER_TRAIN_HPP

#include <string>
#include <vector>

#include "advrank/corpus/corpus.hpp"
#include "advrank/ranker/model.hpp"

namespace advrank {

struct EpochStats {
  std::size_t epoch = 0;
  double mean_loss = 0;
  double heldout_ndcg10 = 0;
};

struct TrainResult {
  RankerModelF model;
  std::vector<EpochStats> epochs;
  std::vector<std::string> train_queries;
  std::vector<std::string> heldout_queries;
};

// Seeded query split: the last heldout_fraction of a shuffled query order
// is held out (at least one query is kept for training).
void split_queries(const Corpus& corpus, const RankerConfig& cfg, std::vector<std::string>& train,
                   std::vector<std::string>& heldout);

// Pairwise hinge training, max(0, margin - s(q,d+) + s(q,d-)), with plain
// SGD on the mean gradient of batch_pairs consecutive pairs. Each epoch
// visits the training queries in a seeded order and draws pairs_per_query (d+, d-) pairs with grade(d+) > grade(d-).
TrainResult train(const Corpus& corpus, const RankerConfig& cfg);

// Mean NDCG@10 of the model over the given queries.
double mean_ndcg10(const RankerModelF& model, const Corpus& corpus,
                   const std::vector<std::string>& query_ids);

}  // namespace advrank

#endif  // ADVRANK_RANKER_TRAIN_HPP
