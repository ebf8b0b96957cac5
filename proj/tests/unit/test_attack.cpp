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
#include "advrank/attack/global.hpp"
#include "advrank/attack/hotflip.hpp"
#include "advrank/attack/local.hpp"
#include "advrank/attack/result_io.hpp"
#include "advrank/common/errors.hpp"
#include "advrank/ranker/ranking.hpp"
#include "support.hpp"

namespace advrank {
namespace {

TEST(AttackSpec, NamesRoundTrip) {
  for (auto p : {PositionStrategy::kStart, PositionStrategy::kEnd, PositionStrategy::kMiddle,
                 PositionStrategy::kRandom, PositionStrategy::kMaxGrad, PositionStrategy::kMinGrad}) {
    EXPECT_EQ(parse_position(to_string(p)), p);
  }
  EXPECT_EQ(parse_direction("promote"), Direction::kPromote);
  EXPECT_EQ(parse_mode("replace"), Mode::kReplace);
  EXPECT_THROW(parse_position("top"), ConfigError);
  EXPECT_THROW(parse_direction(""), ConfigError);
}

TEST(AttackSpec, Validate) {
  AttackSpec s;
  EXPECT_NO_THROW(s.validate(100));
  s.n_tokens = 0;
  EXPECT_THROW(s.validate(100), ConfigError);
  s.n_tokens = 21;
  EXPECT_THROW(s.validate(100), ConfigError);
  s = AttackSpec{};
  s.shortlist_k = 101;
  EXPECT_THROW(s.validate(100), ConfigError);
  s = AttackSpec{};
  s.beam_width = 0;
  EXPECT_THROW(s.validate(100), ConfigError);
  s = AttackSpec{};
  s.epsilon = -1;
  EXPECT_THROW(s.validate(100), ConfigError);
}

TEST(Perturbation, AddInsertsAtSlots) {
  const Document d{"d", {10, 11, 12, 13}};
  const DocSpan span{4, 8};
  const Document a = apply_perturbation(d, {{4, 6}, {20, 21}}, Mode::kAdd, span);
  EXPECT_EQ(a.tokens, (TokenSequence{20, 10, 21, 11, 12, 13}));
  const Document r = apply_perturbation(d, {{5, 7}, {20, 21}}, Mode::kReplace, span);
  EXPECT_EQ(r.tokens, (TokenSequence{10, 20, 12, 21}));
  EXPECT_EQ(d.tokens, (TokenSequence{10, 11, 12, 13}));
  const Document m = apply_perturbation(d, {{4}, {Vocabulary::kMask}}, Mode::kAdd, span);
  EXPECT_EQ(m.tokens.front(), Vocabulary::kMask);
}

TEST(Perturbation, Rejections) {
  const Document d{"d", {10, 11, 12}};
  const DocSpan span{2, 5};
  EXPECT_THROW(apply_perturbation(d, {{1}, {20}}, Mode::kAdd, span), ValidationError);
  EXPECT_THROW(apply_perturbation(d, {{5}, {20}}, Mode::kAdd, span), ValidationError);
  EXPECT_THROW(apply_perturbation(d, {{3, 3}, {20, 21}}, Mode::kAdd, span), ValidationError);
  EXPECT_THROW(apply_perturbation(d, {{3}, {Vocabulary::kCls}}, Mode::kAdd, span), ValidationError);
  EXPECT_THROW(apply_perturbation(d, {{3}, {}}, Mode::kAdd, span), ValidationError);
}

TEST(SelectPositions, FixedStrategies) {
  const EncodedPair e = encode({7, 8}, {10, 11, 12, 13, 14, 15, 16}, 32);  // doc [4, 11)
  EXPECT_EQ(select_positions(PositionStrategy::kStart, e, nullptr, 3, 0),
            (std::vector<std::size_t>{4, 5, 6}));
  EXPECT_EQ(select_positions(PositionStrategy::kEnd, e, nullptr, 2, 0),
            (std::vector<std::size_t>{9, 10}));
  EXPECT_EQ(select_positions(PositionStrategy::kMiddle, e, nullptr, 3, 0),
            (std::vector<std::size_t>{6, 7, 8}));
  EXPECT_THROW(select_positions(PositionStrategy::kStart, e, nullptr, 8, 0), ValidationError);
}

TEST(SelectPositions, RandomIsSeededDistinctAndSorted) {
  const EncodedPair e = encode({7}, TokenSequence(30, 10), 64);
  const auto a = select_positions(PositionStrategy::kRandom, e, nullptr, 6, 11);
  EXPECT_EQ(a, select_positions(PositionStrategy::kRandom, e, nullptr, 6, 11));
  EXPECT_NE(a, select_positions(PositionStrategy::kRandom, e, nullptr, 6, 12));
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
  for (auto p : a) EXPECT_TRUE(e.doc.contains(p));
}

TEST(SelectPositions, GradientNormsWithTies) {
  const EncodedPair e = encode({7}, {10, 11, 12, 13, 14}, 16);  // doc [3, 8)
  MatrixF g = MatrixF::Zero(16, 2);
  g.row(3) << 3, 4;  // 5
  g.row(4) << 0, 1;
  g.row(5) << 5, 0;  // 5, ties with 3
  g.row(6) << 0, 2;
  g.row(7) << 1, 0;
  g.row(0) << 100, 100;  // outside the document
  EXPECT_EQ(select_positions(PositionStrategy::kMaxGrad, e, &g, 2, 0),
            (std::vector<std::size_t>{3, 5}));
  EXPECT_EQ(select_positions(PositionStrategy::kMaxGrad, e, &g, 1, 0),
            (std::vector<std::size_t>{3}));
  EXPECT_EQ(select_positions(PositionStrategy::kMinGrad, e, &g, 2, 0),
            (std::vector<std::size_t>{4, 7}));
  EXPECT_THROW(select_positions(PositionStrategy::kMaxGrad, e, nullptr, 2, 0), UsageError);
}

TEST(Hotflip, ShortlistIsTopKOfLinearEstimate) {
  std::mt19937_64 rng(3);
  const MatrixF table = testing::random_matrix(60, 8, rng).cast<float>();
  const RowVector<float> cur = table.row(9);
  const RowVector<float> grad = testing::random_matrix(1, 8, rng).cast<float>();
  for (Direction dir : {Direction::kDemote, Direction::kPromote}) {
    const auto got = hotflip_shortlist<float>(table, cur, grad, 7, dir);
    // Brute force: estimate every regular token, sort, take 7.
    std::vector<std::pair<double, TokenId>> all;
    for (TokenId v = Vocabulary::kFirstRegular; v < 60; ++v) {
      const float est = (table.row(v) - cur).dot(grad);
      all.emplace_back(dir == Direction::kDemote ? est : -est, v);
    }
    std::sort(all.begin(), all.end());
    ASSERT_EQ(got.size(), 7u);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(got[i], all[i].second) << i;
  }
  EXPECT_EQ(hotflip_shortlist<float>(table, cur, grad, 1000, Direction::kDemote).size(), 55u);
}

class AttackTest : public ::testing::Test {
 protected:
  const Corpus& corpus() { return testing::tiny_setup().corpus; }
  const RankerModelF& model() { return testing::tiny_setup().model; }
  std::vector<RankedDoc> ranked(const std::string& q) {
    return rank_pool(model(), corpus(), corpus().pool(q));
  }
};

TEST_F(AttackTest, ExhaustiveSearchMatchesBruteForceSubstitution) {
  AttackSpec spec;
  spec.n_tokens = 1;
  spec.mode = Mode::kReplace;
  spec.shortlist_k = model().vocab_size;
  spec.beam_width = 1;
  spec.epsilon = 0;
  int cases = 0;
  for (const Query& q : corpus().queries()) {
    const auto r = ranked(q.id);
    const PoolContext ctx = make_pool_context(model(), corpus(), q.id);
    for (auto pos : {PositionStrategy::kStart, PositionStrategy::kMaxGrad}) {
      spec.position = pos;
      const auto& doc_id = r[cases % 5].doc_id;
      const AttackResult res = local_attack(model(), corpus(), ctx, doc_id, spec);
      const auto best = oracle::best_substitution(model(), q, corpus().document(doc_id),
                                                  res.perturbation.positions[0], spec.direction);
      EXPECT_EQ(res.score_after, best.score) << q.id << " " << doc_id;
      ++cases;
    }
  }
  EXPECT_GE(cases, 10);
}

TEST_F(AttackTest, DemotionOfTopDocument) {
  const std::string q = corpus().queries()[1].id;
  const auto r = ranked(q);
  AttackSpec spec;
  spec.n_tokens = 3;
  const AttackResult a = local_attack(model(), corpus(), q, r[0].doc_id, spec);
  EXPECT_LE(a.score_after, a.score_before);
  EXPECT_EQ(a.rank_before, 1u);
  EXPECT_GE(a.rank_after, a.rank_before);
  EXPECT_EQ(a.score_trace.front(), a.score_before);
  EXPECT_EQ(a.score_trace.back(), a.score_after);
  EXPECT_EQ(a.score_trace.size(), a.iterations + 1);
  for (std::size_t i = 1; i < a.score_trace.size(); ++i) {
    EXPECT_LE(a.score_trace[i], a.score_trace[i - 1] - spec.epsilon);
  }
  EXPECT_EQ(a.perturbation.tokens.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.token_strings[i], corpus().vocab().term(a.perturbation.tokens[i]));
  }
  EXPECT_DOUBLE_EQ(a.score_original, r[0].score);
}

TEST_F(AttackTest, PromotionRaisesScoreAndIsDeterministic) {
  const std::string q = corpus().queries()[2].id;
  const auto r = ranked(q);
  AttackSpec spec;
  spec.direction = Direction::kPromote;
  spec.n_tokens = 2;
  spec.position = PositionStrategy::kRandom;
  spec.seed = 5;
  const AttackResult a = local_attack(model(), corpus(), q, r.back().doc_id, spec);
  const AttackResult b = local_attack(model(), corpus(), q, r.back().doc_id, spec);
  EXPECT_GE(a.score_after, a.score_before);
  EXPECT_LE(a.rank_after, a.rank_before);
  EXPECT_EQ(a.perturbation, b.perturbation);
  EXPECT_EQ(a.score_trace, b.score_trace);
}

TEST_F(AttackTest, EvaluatePerturbationReranksAgainstFixedScores) {
  const std::string q = corpus().queries()[0].id;
  const PoolContext ctx = make_pool_context(model(), corpus(), q);
  const auto r = ranked(q);
  const std::string& doc = r[3].doc_id;
  const AttackResult none = evaluate_perturbation(model(), corpus(), ctx, doc, {}, Mode::kAdd,
                                                  Direction::kDemote, PositionStrategy::kStart);
  EXPECT_EQ(none.rank_before, 4u);
  EXPECT_EQ(none.rank_after, 4u);
  EXPECT_EQ(none.score_after, none.score_original);
  const EncodedPair e = encode(*ctx.query, corpus().document(doc), model().config);
  const AttackResult some = evaluate_perturbation(
      model(), corpus(), ctx, doc, prepend_perturbation(e, {10, 11}), Mode::kAdd,
      Direction::kDemote, PositionStrategy::kStart);
  EXPECT_EQ(some.rank_after, ctx.rank_with(doc, some.score_after));
}

TEST_F(AttackTest, UnknownDocumentIsRejected) {
  AttackSpec spec;
  EXPECT_THROW(local_attack(model(), corpus(), corpus().queries()[0].id, "nope", spec), Error);
}

TEST_F(AttackTest, GlobalTriggerLowersMeanScore) {
  std::vector<std::string> qs;
  for (const Query& q : corpus().queries()) qs.push_back(q.id);
  AttackSpec spec;
  spec.n_tokens = 2;
  spec.seed = 3;
  GlobalOptions opt;
  opt.batch_size = 8;
  opt.eval_size = 12;
  const TriggerResult t = global_attack(model(), corpus(), qs, DocSelector::kTopRanked, spec, opt);
  EXPECT_LE(t.mean_score_after, t.mean_score_before);
  EXPECT_EQ(t.score_trace.front(), t.mean_score_before);
  EXPECT_EQ(t.eval_pairs.size(), 12u);
  EXPECT_EQ(t.tokens.size(), 2u);
  const TriggerResult again =
      global_attack(model(), corpus(), qs, DocSelector::kTopRanked, spec, opt);
  EXPECT_EQ(t.tokens, again.tokens);
  spec.mode = Mode::kReplace;
  EXPECT_THROW(global_attack(model(), corpus(), qs, DocSelector::kTopRanked, spec, opt),
               ConfigError);
}

TEST_F(AttackTest, SelectPairsSplitsRankHalves) {
  const std::vector<std::string> qs{corpus().queries()[0].id};
  const auto top = select_pairs(model(), corpus(), qs, DocSelector::kTopRanked);
  const auto bottom = select_pairs(model(), corpus(), qs, DocSelector::kBottomRanked);
  EXPECT_EQ(top.size(), corpus().depth() / 2);
  EXPECT_EQ(bottom.size(), corpus().depth() - corpus().depth() / 2);
  const auto r = ranked(qs[0]);
  EXPECT_EQ(top.front().doc_id, r.front().doc_id);
  EXPECT_EQ(bottom.back().doc_id, r.back().doc_id);
}

TEST_F(AttackTest, ResultsRoundTripThroughJsonl) {
  const std::string q = corpus().queries()[0].id;
  AttackSpec spec;
  spec.n_tokens = 2;
  std::vector<AttackResult> rs{local_attack(model(), corpus(), q, ranked(q)[0].doc_id, spec)};
  std::stringstream buf;
  write_attack_results(rs, buf);
  const auto back = read_attack_results(buf);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].perturbation, rs[0].perturbation);
  EXPECT_EQ(back[0].token_strings, rs[0].token_strings);
  EXPECT_EQ(back[0].score_after, rs[0].score_after);
  EXPECT_EQ(back[0].score_trace, rs[0].score_trace);
  EXPECT_EQ(back[0].rank_after, rs[0].rank_after);
  std::stringstream bad("{\"query_id\": 3}\n");
  EXPECT_THROW(read_attack_results(bad), ParseError);
}

}  // namespace
}  // namespace advrank
