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

#include "advrank/common/errors.hpp"
#include "advrank/core/ops.hpp"
#include "support.hpp"

namespace advrank {
namespace {

using testing::check_gradients;
using testing::MatD;
using testing::random_matrix;

constexpr double kTol = 1e-6;
constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

TEST(OpsGradient, MatmulAddMulScale) {
  for (auto seed : kSeeds) {
    std::mt19937_64 rng(seed);
    auto g = [](Tape<double>& t, const std::vector<Var>& v) {
      Var y = ops::matmul(t, v[0], v[1]);
      y = ops::add(t, y, v[2]);  // row broadcast
      y = ops::mul(t, y, y);
      return ops::add_scalar(t, ops::scale(t, y, 0.5), 2.0);
    };
    auto r = check_gradients(g, {random_matrix(4, 3, rng), random_matrix(3, 5, rng),
                                 random_matrix(1, 5, rng)}, seed);
    EXPECT_LT(r.max_rel_error, kTol) << "seed " << seed << " abs " << r.max_abs_error;
  }
}

TEST(OpsGradient, LayerNorm) {
  for (auto seed : kSeeds) {
    std::mt19937_64 rng(seed);
    auto g = [](Tape<double>& t, const std::vector<Var>& v) {
      return ops::layer_norm(t, v[0], v[1], v[2]);
    };
    auto r = check_gradients(g, {random_matrix(5, 6, rng), random_matrix(1, 6, rng),
                                 random_matrix(1, 6, rng)}, seed);
    EXPECT_LT(r.max_rel_error, 1e-5) << "seed " << seed;
  }
}

TEST(OpsGradient, SoftmaxBothAxes) {
  for (auto seed : kSeeds) {
    std::mt19937_64 rng(seed);
    for (int axis : {0, 1}) {
      auto g = [axis](Tape<double>& t, const std::vector<Var>& v) {
        return ops::softmax(t, v[0], axis);
      };
      auto r = check_gradients(g, {random_matrix(4, 5, rng, 2.0)}, seed);
      EXPECT_LT(r.max_rel_error, kTol) << "seed " << seed << " axis " << axis;
    }
  }
}

TEST(OpsGradient, Gelu) {
  for (auto seed : kSeeds) {
    std::mt19937_64 rng(seed);
    auto g = [](Tape<double>& t, const std::vector<Var>& v) { return ops::gelu(t, v[0]); };
    auto r = check_gradients(g, {random_matrix(3, 17, rng, 2.0)}, seed);
    EXPECT_LT(r.max_rel_error, kTol) << "seed " << seed << " abs " << r.max_abs_error;
  }
}

TEST(OpsGradient, GatherConcatSlicePool) {
  const std::vector<TokenId> ids{2, 0, 2, 3};
  for (auto seed : kSeeds) {
    std::mt19937_64 rng(seed);
    auto g = [&ids](Tape<double>& t, const std::vector<Var>& v) {
      Var x = ops::embed_gather(t, v[0], std::span<const TokenId>(ids));
      Var rows = ops::concat(t, {x, v[1]}, 0);
      Var cols = ops::concat(t, {rows, rows}, 1);
      Var s = ops::slice(t, cols, 1, 4, 2, 5);
      return ops::concat(t, {ops::mean_pool(t, s), ops::sum(t, ops::mul(t, s, s))}, 1);
    };
    auto r = check_gradients(g, {random_matrix(5, 4, rng), random_matrix(2, 4, rng)}, seed);
    EXPECT_LT(r.max_rel_error, kTol) << "seed " << seed << " abs " << r.max_abs_error;
  }
}

TEST(OpsGradient, AttentionAllQueries) {
  for (auto seed : kSeeds) {
    std::mt19937_64 rng(seed);
    auto g = [](Tape<double>& t, const std::vector<Var>& v) {
      return ops::multi_head_attention(t, v[0], 2, 4, 2);
    };
    auto r = check_gradients(g, {random_matrix(8, 3 * 6, rng)}, seed);
    EXPECT_LT(r.max_rel_error, kTol) << "seed " << seed << " abs " << r.max_abs_error;
  }
}

TEST(OpsGradient, AttentionFirstQueryOnly) {
  for (auto seed : kSeeds) {
    std::mt19937_64 rng(seed);
    auto g = [](Tape<double>& t, const std::vector<Var>& v) {
      return ops::multi_head_attention(t, v[0], 3, 5, 3, true);
    };
    auto r = check_gradients(g, {random_matrix(15, 3 * 6, rng)}, seed);
    EXPECT_LT(r.max_rel_error, kTol) << "seed " << seed << " abs " << r.max_abs_error;
  }
}

TEST(Ops, FirstQueryOnlyMatchesFullAttentionRows) {
  std::mt19937_64 rng(9);
  const MatD qkv = random_matrix(12, 3 * 8, rng);
  Tape<double> t(false);
  Var in = t.constant(qkv);
  const MatD full = t.value(ops::multi_head_attention(t, in, 3, 4, 2));
  const MatD first = t.value(ops::multi_head_attention(t, in, 3, 4, 2, true));
  ASSERT_EQ(first.rows(), 3);
  for (Eigen::Index s = 0; s < 3; ++s) {
    EXPECT_LT((first.row(s) - full.row(s * 4)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Ops, AttentionRowsMixOnlyTheirOwnSequence) {
  std::mt19937_64 rng(4);
  MatD qkv = random_matrix(6, 3 * 4, rng);
  Tape<double> t(false);
  const MatD before = t.value(ops::multi_head_attention(t, t.constant(qkv), 2, 3, 1));
  qkv.row(5).setConstant(7.0);  // second sequence only
  const MatD after = t.value(ops::multi_head_attention(t, t.constant(qkv), 2, 3, 1));
  EXPECT_EQ(before.topRows(3), after.topRows(3));
}

TEST(Ops, SoftmaxRowsSumToOne) {
  std::mt19937_64 rng(1);
  Tape<double> t(false);
  const MatD y = t.value(ops::softmax(t, t.constant(random_matrix(3, 7, rng, 30.0))));
  for (Eigen::Index r = 0; r < y.rows(); ++r) EXPECT_NEAR(y.row(r).sum(), 1.0, 1e-12);
}

TEST(Ops, ShapeErrors) {
  Tape<double> t(false);
  Var a = t.constant(MatD::Zero(2, 3));
  Var b = t.constant(MatD::Zero(2, 3));
  EXPECT_THROW(ops::matmul(t, a, b), ShapeError);
  EXPECT_THROW(ops::add(t, a, t.constant(MatD::Zero(3, 3))), ShapeError);
  EXPECT_THROW(ops::slice(t, a, 1, 2, 0, 1), ShapeError);
  EXPECT_THROW(ops::multi_head_attention(t, t.constant(MatD::Zero(4, 9)), 2, 2, 2), ShapeError);
  const std::vector<TokenId> bad{5};
  EXPECT_THROW(ops::embed_gather(t, a, std::span<const TokenId>(bad)), ShapeError);
}

TEST(Tape, SharedNodeGradientsAccumulate) {
  Tape<double> t(true);
  Var x = t.input(MatD::Constant(1, 1, 3.0));
  Var y = ops::add(t, ops::mul(t, x, x), x);  // x^2 + x
  t.backward(y, MatD::Ones(1, 1));
  EXPECT_DOUBLE_EQ(t.grad(x)(0, 0), 7.0);
  EXPECT_THROW(t.backward(y, MatD::Ones(1, 1)), UsageError);
}

TEST(Tape, NonRecordingTapeRejectsBackward) {
  Tape<double> t(false);
  Var x = t.input(MatD::Ones(1, 1));
  EXPECT_THROW(t.backward(x, MatD::Ones(1, 1)), UsageError);
}

}  // namespace
}  // namespace advrank
