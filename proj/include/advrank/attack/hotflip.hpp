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

#ifndef ADVRANK_ATTACK_HOTFLIP_HPP
#define ADVRANK_ATTACK_HOTFLIP_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include "advrank/attack/spec.hpp"
#include "advrank/common/errors.hpp"
#include "advrank/core/tensor.hpp"
#include "advrank/corpus/vocabulary.hpp"

namespace advrank {

// First-order estimate of the score change from swapping the embedding
// `current` for every table row v: (v - current) . grad. Entries for special
// tokens and [OOV] are still computed; callers exclude them.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hotflip_linear_scores(
    const Matrix<Scalar>& table, const Eigen::Ref<const RowVector<Scalar>>& current,
    const Eigen::Ref<const RowVector<Scalar>>& grad) {
  if (current.size() != table.cols() || grad.size() != table.cols()) {
    throw ShapeError("hotflip: embedding width mismatch with table " + shape_string(table));
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s = table * grad.transpose();
  s.array() -= current.dot(grad);
  return s;
}

// The k regular tokens whose linear estimate moves the score most in the
// attack direction: smallest estimates for demotion, largest for promotion.
// Ties go to the smaller token id. Returns every candidate if k exceeds
// their number.
template <typename Scalar>
std::vector<TokenId> hotflip_shortlist(const Matrix<Scalar>& table,
                                       const Eigen::Ref<const RowVector<Scalar>>& current,
                                       const Eigen::Ref<const RowVector<Scalar>>& grad,
                                       std::size_t k, Direction direction) {
  const auto s = hotflip_linear_scores<Scalar>(table, current, grad);
  std::vector<TokenId> ids;
  ids.reserve(static_cast<std::size_t>(table.rows()));
  for (TokenId v = Vocabulary::kFirstRegular; v < table.rows(); ++v) ids.push_back(v);
  const std::size_t take = std::min(k, ids.size());
  auto better = [&s, direction](TokenId a, TokenId b) {
    if (s(a) != s(b)) return direction == Direction::kDemote ? s(a) < s(b) : s(a) > s(b);
    return a < b;
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(), better);
  ids.resize(take);
  return ids;
}

}  // namespace advrank

#endif  // ADVRANK_ATTACK_HOTFLIP_HPP
