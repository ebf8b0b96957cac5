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


#include "advrank/analysis/pca.hpp"

#include "advrank/eval/records.hpp"

namespace advrank {

PcaResult pca_projection(const RankerModelF& model, const Vocabulary& vocab,
                         const TokenFrequencyMatrix& matrix, std::size_t min_support) {
  if (vocab.hash() != model.vocab_hash) {
    throw ValidationError("pca_projection: model vocabulary hash " + hash_hex(model.vocab_hash) +
                          " does not match " + hash_hex(vocab.hash()));
  }
  PcaResult out;
  std::vector<TokenId> ids;
  for (std::size_t c = 0; c < matrix.tokens.size(); ++c) {
    if (matrix.totals[c] < min_support || !vocab.contains(matrix.tokens[c])) continue;
    ids.push_back(vocab.id(matrix.tokens[c]));
    out.points.push_back({matrix.tokens[c], matrix.totals[c], 0, 0, ""});
  }
  if (ids.size() < 3) {
    throw ValidationError("pca_projection: " + std::to_string(ids.size()) +
                          " tokens reach min support " + std::to_string(min_support) +
                          ", need at least 3");
  }
  const auto& table = model.token_embedding();
  const Eigen::Index n = static_cast<Eigen::Index>(ids.size());
  out.embeddings.resize(n, table.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.embeddings.row(i) = table.row(ids[static_cast<std::size_t>(i)]).cast<double>();
  }
  const Eigen::MatrixXd centered = out.embeddings.rowwise() - out.embeddings.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  const auto eig = top_eigenpairs(cov, 2);
  out.components = eig.vectors;
  out.variances = eig.values;
  const Eigen::MatrixXd coords = centered * out.components;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.points[static_cast<std::size_t>(i)].x = coords(i, 0);
    out.points[static_cast<std::size_t>(i)].y = coords(i, 1);
  }
  return out;
}

Table projection_table(const PcaResult& pca) {
  Table t{{"token", "frequency", "x", "y", "label"}, {}};
  for (const TokenProjection& p : pca.points) {
    t.rows.push_back({p.token, std::to_string(p.frequency), format_number(p.x),
                      format_number(p.y), p.label});
  }
  return t;
}

}  // namespace advrank
