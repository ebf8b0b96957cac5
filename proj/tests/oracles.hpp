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


// Independent reference computations shared by the unit and acceptance
// tests. They use only the public scoring entry points.

#ifndef ADVRANK_TESTS_ORACLES_HPP
#define ADVRANK_TESTS_ORACLES_HPP

#include <limits>
#include <vector>

#include "advrank/attack/local.hpp"
#include "advrank/attack/perturbation.hpp"
#include "advrank/corpus/vocabulary.hpp"
#include "advrank/ranker/encode.hpp"
#include "advrank/ranker/forward.hpp"

namespace advrank::oracle {

// Central differences of the score with respect to each real position's
// input embedding, [length x d]. Every position gets a private copy of its
// embedding row appended to the token table, so perturbing that row moves
// exactly one position, including positions that share a token id.
template <typename Scalar>
Matrix<Scalar> fd_input_gradients(const RankerModel<Scalar>& model, const EncodedPair& encoded,
                                  Scalar h) {
  RankerModel<Scalar> m = model;
  auto& table = m.params[ParamLayout::kTokenEmbedding];
  const Eigen::Index v0 = table.rows();
  const auto n = static_cast<Eigen::Index>(encoded.length);
  const Matrix<Scalar> original = table;
  table.resize(v0 + n, original.cols());
  table.topRows(v0) = original;
  EncodedPair e = encoded;
  for (Eigen::Index p = 0; p < n; ++p) {
    table.row(v0 + p) = original.row(encoded.ids[static_cast<std::size_t>(p)]);
    e.ids[static_cast<std::size_t>(p)] = static_cast<TokenId>(v0 + p);
  }
  m.vocab_size = static_cast<std::size_t>(table.rows());
  Matrix<Scalar> out(n, table.cols());
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
      const Scalar keep = table(v0 + p, c);
      table(v0 + p, c) = keep + h;
      const Scalar up = score(m, e);
      table(v0 + p, c) = keep - h;
      const Scalar down = score(m, e);
      table(v0 + p, c) = keep;
      out(p, c) = (up - down) / (2 * h);
    }
  }
  return out;
}

struct SubstitutionOptimum {
  TokenId token = 0;
  double score = 0;
};

// Best score over every regular token written at `position` of the
// document (replace mode), by exhaustive enumeration.
inline SubstitutionOptimum best_substitution(const RankerModelF& model, const Query& query,
                                             const Document& doc, std::size_t position,
                                             Direction direction) {
  const EncodedPair base = encode(query, doc, model.config);
  SubstitutionOptimum best{0, direction == Direction::kDemote
                                  ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity()};
  for (TokenId v = Vocabulary::kFirstRegular; v < static_cast<TokenId>(model.vocab_size); ++v) {
    Perturbation p{{position}, {v}};
    const Document d = apply_perturbation(doc, p, Mode::kReplace, base.doc);
    const double s = score(model, encode(query, d, model.config));
    if (direction == Direction::kDemote ? s < best.score : s > best.score) best = {v, s};
  }
  return best;
}

}  // namespace advrank::oracle

#endif  // ADVRANK_TESTS_ORACLES_HPP
