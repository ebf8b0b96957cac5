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

#include "advrank/common/errors.hpp"
#include "advrank/eval/experiments.hpp"
#include "advrank/eval/metrics.hpp"
#include "advrank/eval/records.hpp"
#include "support.hpp"

namespace advrank {
namespace {

TEST(Metric, KnownValues) {
  EXPECT_NEAR(nrs(10, 100, 100, Direction::kDemote), 1.0, 1e-12);
  EXPECT_NEAR(nrs(10, 10, 100, Direction::kDemote), 0.0, 1e-12);
  EXPECT_NEAR(nrs(95, 3, 100, Direction::kPromote), 92.0 / 94.0, 1e-12);
  EXPECT_NEAR(nrc(10, 100, 100), 0.90, 1e-12);
  EXPECT_NEAR(nrs(50, 75, 100, Direction::kDemote), 0.5, 1e-12);
}

TEST(Metric, DegenerateAndClamped) {
  const RankShift at_bottom = normalized_rank_shift(100, 100, 100, Direction::kDemote);
  EXPECT_TRUE(at_bottom.degenerate);
  EXPECT_EQ(at_bottom.value, 0.0);
  const RankShift at_top = normalized_rank_shift(1, 5, 100, Direction::kPromote);
  EXPECT_TRUE(at_top.degenerate);
  EXPECT_EQ(at_top.value, 0.0);
  // Moving the wrong way by more than the maximum distance clamps at 1.
  EXPECT_EQ(nrs(90, 1, 100, Direction::kDemote), 1.0);
  EXPECT_FALSE(normalized_rank_shift(5, 6, 100, Direction::kDemote).degenerate);
}

TEST(Metric, RangeErrors) {
  EXPECT_THROW(nrs(0, 5, 100, Direction::kDemote), ValidationError);
  EXPECT_THROW(nrs(5, 101, 100, Direction::kDemote), ValidationError);
  EXPECT_THROW(nrc(5, 0, 100), ValidationError);
  EXPECT_EQ(parse_metric("nrc"), MetricVariant::kNrc);
  EXPECT_THROW(parse_metric("ndcg"), ConfigError);
}

TEST(Records, CsvRoundTripAndRecompute) {
  AttackResult r;
  r.query_id = "q1";
  r.doc_id = "d7";
  r.direction = Direction::kPromote;
  r.perturbation.tokens = {5, 6, 7};
  r.perturbation.positions = {4, 5, 6};
  r.rank_before = 95;
  r.rank_after = 3;
  const RankShiftRecord rec = make_record(r, Method::kRandom, 100, MetricVariant::kNrs, 2);
  EXPECT_EQ(rec.n_tokens, 3u);
  EXPECT_NEAR(rec.value, 92.0 / 94.0, 1e-15);
  std::stringstream buf;
  write_records_csv({rec}, buf);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')),
            "query_id,doc_id,method,direction,i,position,rank_before,rank_after,nrs");
  const auto back = read_records_csv(buf, 100);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].value, rec.value);
  EXPECT_EQ(back[0].method, Method::kRandom);
  EXPECT_EQ(back[0].value, nrs(back[0].rank_before, back[0].rank_after, 100, back[0].direction));
}

TEST(Records, SortIsCanonical) {
  std::vector<RankShiftRecord> rs(3);
  rs[0].query_id = "q2";
  rs[1].query_id = "q1";
  rs[1].doc_id = "b";
  rs[2].query_id = "q1";
  rs[2].doc_id = "a";
  sort_records(rs);
  EXPECT_EQ(rs[0].doc_id, "a");
  EXPECT_EQ(rs[2].query_id, "q2");
}

TEST(Records, FormatNumberRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 92.0 / 94.0, 1e-300, -2.5}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_THROW(format_number(std::nan("")), NumericError);
}

TEST(Records, MeanStdIsPopulation) {
  const MeanStd m = mean_std({1.0, 3.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.stddev, 1.0);
  EXPECT_EQ(m.count, 2u);
}

TEST(Summarize, AveragesRepetitionMeans) {
  std::vector<RankShiftRecord> rs(3);
  rs[0].value = 1.0;
  rs[0].repetition = 0;
  rs[1].value = 0.0;
  rs[1].repetition = 0;
  rs[2].value = 0.3;
  rs[2].repetition = 1;
  const MeanStd s = summarize(rs, [](const RankShiftRecord&) { return true; });
  EXPECT_DOUBLE_EQ(s.mean, 0.4);
  EXPECT_NEAR(s.stddev, 0.1, 1e-15);
  EXPECT_EQ(s.count, 3u);
}

class EvalTest : public ::testing::Test {
 protected:
  const Corpus& corpus() { return testing::tiny_setup().corpus; }
  const RankerModelF& model() { return testing::tiny_setup().model; }
  ExperimentPlan plan() {
    ExperimentPlan p;
    p.query_count = 3;
    p.docs_per_group = 2;
    p.repetitions = 2;
    p.n_tokens = 2;
    p.length_grid = {1, 2};
    p.position_grid = {PositionStrategy::kStart, PositionStrategy::kMaxGrad};
    p.global.batch_size = 4;
    p.global.eval_size = 8;
    return p;
  }
};

TEST_F(EvalTest, RandomBaselineIsSeeded) {
  const std::string q = corpus().queries()[0].id;
  const PoolContext ctx = make_pool_context(model(), corpus(), q);
  const std::string& d = ctx.pool->doc_ids[3];
  const auto a = random_baseline(model(), corpus(), ctx, d, 3, PositionStrategy::kStart,
                                 Mode::kAdd, Direction::kDemote, 9);
  const auto b = random_baseline(model(), corpus(), ctx, d, 3, PositionStrategy::kStart,
                                 Mode::kAdd, Direction::kDemote, 9);
  EXPECT_EQ(a.perturbation, b.perturbation);
  for (TokenId t : a.perturbation.tokens) EXPECT_FALSE(Vocabulary::is_special(t));
  const auto none = random_baseline(model(), corpus(), ctx, d, 0, PositionStrategy::kStart,
                                    Mode::kAdd, Direction::kDemote, 9);
  EXPECT_EQ(nrs(none.rank_before, none.rank_after, corpus().depth(), Direction::kDemote), 0.0);
}

TEST_F(EvalTest, EffectivenessShapeAndThreadInvariance) {
  ExperimentPlan p = plan();
  const ExperimentResult a = run_effectiveness(model(), corpus(), p);
  EXPECT_EQ(a.summary.rows.size(), 3u * 2u);
  for (const auto& row : a.summary.rows) {
    const double mean = std::stod(row[4]);
    EXPECT_GE(mean, 0.0);
    EXPECT_LE(mean, 1.0);
  }
  // 3 queries x 2 directions x 2 docs x 2 repetitions per method.
  EXPECT_EQ(a.records.size(), 3u * 3u * 2u * 2u * 2u);
  for (const auto& r : a.records) {
    EXPECT_EQ(r.value, nrs(r.rank_before, r.rank_after, corpus().depth(), r.direction));
    if (r.direction == Direction::kDemote) EXPECT_LE(r.rank_before, corpus().depth() / 2);
    if (r.direction == Direction::kPromote) EXPECT_GT(r.rank_before, corpus().depth() / 2);
  }
  p.threads = 3;
  const ExperimentResult b = run_effectiveness(model(), corpus(), p);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.summary.rows, b.summary.rows);
}

TEST_F(EvalTest, SweepCardinality) {
  const ExperimentResult len = run_length_sweep(model(), corpus(), plan());
  EXPECT_EQ(len.summary.rows.size(), 2u * 2u);
  const ExperimentResult pos = run_position_sweep(model(), corpus(), plan());
  EXPECT_EQ(pos.summary.rows.size(), 2u);
  for (const auto& r : pos.records) EXPECT_EQ(r.direction, Direction::kDemote);
}

TEST_F(EvalTest, PlanValidationAndQueries) {
  ExperimentPlan p = plan();
  p.docs_per_group = corpus().depth() / 2 + 1;
  EXPECT_THROW(p.validate(corpus().depth()), ConfigError);
  p = plan();
  const auto qs = plan_queries(corpus(), p);
  EXPECT_EQ(qs.size(), 3u);
  EXPECT_EQ(qs, plan_queries(corpus(), p));
  p.query_ids = {"missing"};
  EXPECT_THROW(plan_queries(corpus(), p), Error);
}

TEST_F(EvalTest, PrependedZeroTokensShiftNothing) {
  const auto rs = evaluate_prepended(model(), corpus(), plan(), {}, Method::kMostFrequent,
                                     Direction::kDemote);
  EXPECT_FALSE(rs.empty());
  for (const auto& r : rs) EXPECT_EQ(r.value, 0.0);
}

}  // namespace
}  // namespace advrank
