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

#include "advrank/ranker/train.hpp"

#include <algorithm>
#include <iostream>
#include <random>

#include "advrank/common/errors.hpp"
#include "advrank/ranker/encode.hpp"
#include "advrank/ranker/forward.hpp"
#include "advrank/ranker/ranking.hpp"

namespace advrank {

void split_queries(const Corpus& corpus, const RankerConfig& cfg, std::vector<std::string>& train,
                   std::vector<std::string>& heldout) {
  std::vector<std::string> ids;
  for (const CandidatePool& p : corpus.pools()) ids.push_back(p.query_id);
  std::mt19937_64 rng(cfg.seed ^ 0x5bd1e995ULL);
  std::shuffle(ids.begin(), ids.end(), rng);
  auto n_held = static_cast<std::size_t>(cfg.heldout_fraction * static_cast<double>(ids.size()));
  if (n_held >= ids.size()) n_held = ids.size() - 1;
  train.assign(ids.begin(), ids.end() - static_cast<std::ptrdiff_t>(n_held));
  heldout.assign(ids.end() - static_cast<std::ptrdiff_t>(n_held), ids.end());
  std::sort(train.begin(), train.end());
  std::sort(heldout.begin(), heldout.end());
}

double mean_ndcg10(const RankerModelF& model, const Corpus& corpus,
                   const std::vector<std::string>& query_ids) {
  if (query_ids.empty()) return 0.0;
  double total = 0;
  for (const std::string& qid : query_ids) {
    const CandidatePool& pool = corpus.pool(qid);
    std::vector<RankedDoc> ranked = rank_pool(model, corpus, pool);
    std::vector<int> grades;
    grades.reserve(ranked.size());
    for (const RankedDoc& r : ranked) grades.push_back(pool.grade_of(r.doc_id));
    total += ndcg_at_k(grades, 10);
  }
  return total / static_cast<double>(query_ids.size());
}

namespace {

// Hinge loss of one (positive, negative) pair; when positive, adds its
// parameter gradients into `grads`.
double accumulate_pair(const RankerModelF& model, const EncodedPair& pos, const EncodedPair& neg,
                       float margin, std::vector<MatrixF>& grads) {
  Tape<float> t(true);
  auto span_of = [](const EncodedPair& e) {
    return std::span<const TokenId>(e.ids.data(), e.length);
  };
  auto sp = forward(t, model, span_of(pos), 1, pos.length, true);
  auto sn = forward(t, model, span_of(neg), 1, neg.length, true);
  // diff = s(neg) - s(pos); loss = max(0, margin + diff)
  Var diff = ops::add(t, sn.scores, ops::scale(t, sp.scores, -1.0f));
  const float loss = margin + t.value(diff)(0, 0);
  if (loss <= 0) return 0.0;
  t.backward(diff, MatrixF::Ones(1, 1));
  for (auto& [id, g] : t.parameter_grads()) grads[static_cast<std::size_t>(id)] += g;
  return loss;
}

void sgd_step(RankerModelF& model, std::vector<MatrixF>& grads, std::size_t batch, float lr) {
  const float step = lr / static_cast<float>(batch);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    model.params[i] -= step * grads[i];
    grads[i].setZero();
  }
}

}  // namespace

TrainResult train(const Corpus& corpus, const RankerConfig& cfg) {
  cfg.validate();
  TrainResult result;
  split_queries(corpus, cfg, result.train_queries, result.heldout_queries);
  result.model = RankerModelF::initialize(cfg, corpus.vocab().size(), corpus.vocab().hash());

  bool any_pair = false;
  for (const std::string& qid : result.train_queries) {
    const CandidatePool& p = corpus.pool(qid);
    const int mx = *std::max_element(p.grades.begin(), p.grades.end());
    const int mn = *std::min_element(p.grades.begin(), p.grades.end());
    any_pair = any_pair || mx > mn;
  }
  if (!any_pair) throw TrainingError("no positive pairs: every training pool has uniform grades");

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::string> order = result.train_queries;
  std::vector<MatrixF> grads;
  for (const MatrixF& p : result.model.params) grads.push_back(MatrixF::Zero(p.rows(), p.cols()));
  const auto lr = static_cast<float>(cfg.learning_rate);
  std::size_t in_batch = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0;
    std::size_t n_pairs = 0;
    for (const std::string& qid : order) {
      const CandidatePool& pool = corpus.pool(qid);
      const Query& q = corpus.query(qid);
      std::vector<std::size_t> positives;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool.grades[i] > 0) positives.push_back(i);
      }
      if (positives.empty()) continue;
      for (std::size_t k = 0; k < cfg.pairs_per_query; ++k) {
        const std::size_t pi =
            positives[std::uniform_int_distribution<std::size_t>(0, positives.size() - 1)(rng)];
        std::vector<std::size_t> negatives;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (pool.grades[i] < pool.grades[pi]) negatives.push_back(i);
        }
        if (negatives.empty()) continue;
        const std::size_t ni =
            negatives[std::uniform_int_distribution<std::size_t>(0, negatives.size() - 1)(rng)];
        const EncodedPair pos = encode(q, corpus.document(pool.doc_ids[pi]), cfg);
        const EncodedPair neg = encode(q, corpus.document(pool.doc_ids[ni]), cfg);
        loss_sum += accumulate_pair(result.model, pos, neg, static_cast<float>(cfg.margin), grads);
        ++n_pairs;
        if (++in_batch == cfg.batch_pairs) {
          sgd_step(result.model, grads, in_batch, lr);
          in_batch = 0;
        }
      }
    }
    if (in_batch > 0) {
      sgd_step(result.model, grads, in_batch, lr);
      in_batch = 0;
    }
    if (!result.model.all_finite()) {
      throw NumericError("training diverged in epoch " + std::to_string(epoch));
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_loss = n_pairs ? loss_sum / static_cast<double>(n_pairs) : 0.0;
    stats.heldout_ndcg10 = mean_ndcg10(result.model, corpus, result.heldout_queries);
    std::clog << "train: epoch " << epoch << " loss " << stats.mean_loss << " heldout ndcg@10 "
              << stats.heldout_ndcg10 << '\n';
    result.epochs.push_back(stats);
  }
  return result;
}

}  // namespace advrank
