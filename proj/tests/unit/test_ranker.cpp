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


#include <gtest/gtest.h>

#include <sstream>

#include "../oracles.hpp"
#include "advrank/common/errors.hpp"
#include "advrank/ranker/checkpoint.hpp"
#include "advrank/ranker/encode.hpp"
#include "advrank/ranker/forward.hpp"
#include "advrank/ranker/ranking.hpp"
#include "advrank/ranker/train.hpp"
#include "support.hpp"

namespace advrank {
namespace {

TokenSequence random_tokens(std::size_t n, std::size_t vocab, std::mt19937_64& rng) {
  std::uniform_int_distribution<TokenId> pick(Vocabulary::kFirstRegular,
                                              static_cast<TokenId>(vocab - 1));
  TokenSequence out(n);
  for (auto& t : out) t = pick(rng);
  return out;
}

RankerConfig gradient_config(std::uint64_t seed) {
  RankerConfig cfg = testing::tiny_ranker();
  cfg.embed_dim = 12;
  cfg.ffn_dim = 20;
  cfg.n_heads = 3;
  cfg.max_len = 24;
  cfg.seed = seed;
  return cfg;
}

TEST(RankerGradient, InputGradientsMatchFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto m = RankerModelD::initialize(gradient_config(seed), 40, 0);
    std::mt19937_64 rng(seed);
    TokenSequence doc = random_tokens(9, 40, rng);
    doc[4] = doc[1];  // repeated token: positions must still separate
    const EncodedPair e = encode(random_tokens(3, 40, rng), doc, m.config.max_len);
    const auto analytic = score_with_input_grads(m, e);
    const MatrixD numeric = oracle::fd_input_gradients(m, e, 1e-5);
    const MatrixD a = analytic.grads.topRows(numeric.rows());
    const double scale = std::max(1e-3, a.cwiseAbs().maxCoeff());
    EXPECT_LT((a - numeric).cwiseAbs().maxCoeff() / scale, 1e-6) << "seed " << seed;
    EXPECT_TRUE(analytic.grads.bottomRows(analytic.grads.rows() - numeric.rows()).isZero());
    EXPECT_DOUBLE_EQ(analytic.score, score(m, e));
  }
}

TEST(RankerGradient, ParameterGradientsMatchFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto m = RankerModelD::initialize(gradient_config(seed), 30, 0);
    std::mt19937_64 rng(seed + 100);
    const EncodedPair e = encode(random_tokens(2, 30, rng), random_tokens(6, 30, rng), 24);
    const auto ids = std::span<const TokenId>(e.ids.data(), e.length);
    Tape<double> t(true);
    auto out = forward(t, m, ids, 1, e.length, true);
    t.backward(out.scores, MatrixD::Ones(1, 1));
    const auto grads = t.parameter_grads();
    for (std::size_t p = 0; p < m.params.size(); ++p) {
      const MatrixD g = grads.count(static_cast<long>(p)) ? grads.at(static_cast<long>(p))
                                                         : MatrixD::Zero(m.params[p].rows(),
                                                                         m.params[p].cols());
      std::uniform_int_distribution<Eigen::Index> pick(0, m.params[p].size() - 1);
      for (int trial = 0; trial < 4; ++trial) {
        const Eigen::Index i = pick(rng);
        const double keep = m.params[p].data()[i];
        m.params[p].data()[i] = keep + 1e-5;
        const double up = score(m, e);
        m.params[p].data()[i] = keep - 1e-5;
        const double down = score(m, e);
        m.params[p].data()[i] = keep;
        const double numeric = (up - down) / 2e-5;
        const double a = g.data()[i];
        EXPECT_LT(std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-3}), 1e-6)
            << "seed " << seed << " param " << p << " index " << i;
      }
    }
  }
}

TEST(Ranker, BatchScoresEqualSingleScoresExactly) {
  const auto& s = testing::tiny_setup();
  const Query& q = s.corpus.queries().front();
  std::vector<TokenSequence> seqs;
  std::vector<float> single;
  for (const auto& id : s.corpus.pools().front().doc_ids) {
    const EncodedPair e = encode(q, s.corpus.document(id), s.model.config);
    seqs.emplace_back(e.ids.begin(), e.ids.begin() + static_cast<std::ptrdiff_t>(e.length));
    single.push_back(score(s.model, e));
  }
  const auto batch = score_batch(s.model, std::span<const TokenSequence>(seqs));
  ASSERT_EQ(batch.size(), single.size());
  for (std::size_t i = 0; i < batch.size(); ++i) EXPECT_EQ(batch[i], single[i]) << i;
}

TEST(Ranker, PaddingDoesNotChangeScore) {
  auto m = RankerModelD::initialize(gradient_config(3), 30, 0);
  std::mt19937_64 rng(3);
  const TokenSequence q = random_tokens(2, 30, rng);
  const TokenSequence d = random_tokens(5, 30, rng);
  const EncodedPair short_e = encode(q, d, 12);
  const EncodedPair long_e = encode(q, d, 24);
  EXPECT_EQ(short_e.length, long_e.length);
  EXPECT_DOUBLE_EQ(score(m, short_e), score(m, long_e));
}

TEST(Encode, LayoutAndTruncation) {
  const EncodedPair e = encode({7, 8}, {10, 11, 12, 13, 14}, 8);
  const TokenSequence expect{Vocabulary::kCls, 7, 8, Vocabulary::kSep, 10, 11, 12, Vocabulary::kSep};
  EXPECT_EQ(e.ids, expect);
  EXPECT_EQ(e.length, 8u);
  EXPECT_EQ(e.doc, (DocSpan{4, 7}));
  EXPECT_EQ(e.doc_capacity, 3u);
  const EncodedPair p = encode({7}, {10}, 8);
  EXPECT_EQ(p.length, 5u);
  EXPECT_EQ(p.ids[5], Vocabulary::kPad);
  EXPECT_EQ(p.mask[4], 1);
  EXPECT_EQ(p.mask[5], 0);
  EXPECT_THROW(encode({7, 8, 9, 10, 11, 12}, {10}, 8), ValidationError);
  EXPECT_THROW(encode({7}, {}, 8), ValidationError);
}

TEST(Ranking, TiesBreakByDocId) {
  const std::vector<std::string> ids{"b", "a", "c"};
  const std::vector<double> scores{1.0, 1.0, 2.0};
  const auto r = rank_scores(ids, scores);
  EXPECT_EQ(r[0].doc_id, "c");
  EXPECT_EQ(r[1].doc_id, "a");
  EXPECT_EQ(r[2].doc_id, "b");
  EXPECT_EQ(r[2].rank, 3u);
  EXPECT_EQ(rank_against("b", 1.5, ids, scores), 2u);
  EXPECT_EQ(rank_against("b", 0.0, ids, scores), 3u);
  EXPECT_EQ(rank_against("b", 9.0, ids, scores), 1u);
  EXPECT_EQ(rank_against("0", 1.0, ids, scores), 2u);  // ties: "0" < "a"
}

TEST(Ranking, NdcgKnownValues) {
  const std::vector<int> ideal{3, 2, 0};
  EXPECT_DOUBLE_EQ(ndcg_at_k(ideal, 10), 1.0);
  const std::vector<int> swapped{2, 3, 0};
  const double dcg = 3.0 / std::log2(2.0) + 7.0 / std::log2(3.0);
  const double idcg = 7.0 / std::log2(2.0) + 3.0 / std::log2(3.0);
  EXPECT_NEAR(ndcg_at_k(swapped, 10), dcg / idcg, 1e-12);
  const std::vector<int> none{0, 0};
  EXPECT_EQ(ndcg_at_k(none, 10), 0.0);
}

TEST(Checkpoint, RoundTripIsExact) {
  const auto& s = testing::tiny_setup();
  std::stringstream buf;
  write_model(s.model, buf);
  const RankerModelF back = read_model(buf);
  EXPECT_TRUE(back == s.model);
  std::stringstream bad("XXXX");
  EXPECT_THROW(read_model(bad), Error);
}

TEST(Training, DeterministicAndLearns) {
  const auto& s = testing::tiny_setup();
  const TrainResult a = train(s.corpus, testing::tiny_ranker());
  EXPECT_TRUE(a.model == s.model);
  ASSERT_GE(a.epochs.size(), 2u);
  EXPECT_LE(a.epochs.back().mean_loss, a.epochs.front().mean_loss);
  std::vector<std::string> train_q, held_q;
  split_queries(s.corpus, testing::tiny_ranker(), train_q, held_q);
  EXPECT_EQ(train_q, a.train_queries);
  EXPECT_EQ(held_q, a.heldout_queries);
  EXPECT_FALSE(held_q.empty());
}

TEST(Training, RejectsInvalidConfig) {
  RankerConfig cfg = testing::tiny_ranker();
  cfg.n_heads = 5;  // does not divide embed_dim
  EXPECT_THROW(cfg.validate(), Error);
}

}  // namespace
}  // namespace advrank
