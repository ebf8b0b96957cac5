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


#ifndef ADVRANK_ANALYSIS_PCA_HPP
#define ADVRANK_ANALYSIS_PCA_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "advrank/analysis/tokens.hpp"
#include "advrank/common/errors.hpp"
#include "advrank/ranker/model.hpp"

namespace advrank {

template <typename Scalar>
struct EigenPairs {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;                // non-increasing
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns, orthonormal
};

// Top-k eigenpairs of a symmetric positive semi-definite matrix by power
// iteration with deflation. Each iterate is re-orthogonalized against the
// vectors already found; when the deflated matrix vanishes the remaining
// eigenvalues are 0 and the vectors complete an orthonormal set.
template <typename Derived>
EigenPairs<typename Derived::Scalar> top_eigenpairs(const Eigen::MatrixBase<Derived>& sym,
                                                    Eigen::Index k, double tol = 1e-8,
                                                    int max_iter = 1000) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = sym.rows();
  if (sym.cols() != n) throw ShapeError("top_eigenpairs: matrix is not square");
  if (k < 0 || k > n) throw ShapeError("top_eigenpairs: k out of range");

  EigenPairs<Scalar> out{Vec::Zero(k), Mat::Zero(n, k)};
  Mat a = sym;
  const Scalar scale = std::max<Scalar>(a.cwiseAbs().maxCoeff(), Scalar(1));
  auto orthogonalize = [&](Vec& v, Eigen::Index found) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < found; ++j) v -= out.vectors.col(j).dot(v) * out.vectors.col(j);
    }
  };
  for (Eigen::Index c = 0; c < k; ++c) {
    // Deterministic start with every coordinate nonzero.
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Scalar(1) + Scalar(i + 1) / Scalar(n + 1);
    orthogonalize(v, c);
    Vec w = a * v;
    orthogonalize(w, c);
    if (w.norm() <= Scalar(1e-12) * scale) {
      // Degenerate remainder: take the next basis direction not yet spanned.
      for (Eigen::Index e = 0; e < n; ++e) {
        v = Vec::Unit(n, e);
        orthogonalize(v, c);
        if (v.norm() > Scalar(1e-6)) break;
      }
      out.vectors.col(c) = v.normalized();
      out.values(c) = 0;
      continue;
    }
    v = w.normalized();
    for (int it = 0; it < max_iter; ++it) {
      w = a * v;
      orthogonalize(w, c);
      const Scalar norm = w.norm();
      if (norm <= Scalar(1e-12) * scale) break;
      w /= norm;
      if (w.dot(v) < 0) w = -w;
      const Scalar delta = (w - v).norm();
      v = w;
      if (delta < Scalar(tol)) break;
    }
    const Scalar lambda = v.dot(sym * v);
    out.vectors.col(c) = v;
    out.values(c) = lambda;
    a -= lambda * v * v.transpose();
  }
  return out;
}

struct TokenProjection {
  std::string token;
  std::size_t frequency = 0;
  double x = 0;
  double y = 0;
  std::string label;  // left empty for manual annotation
};

struct PcaResult {
  std::vector<TokenProjection> points;  // matrix column order
  Eigen::MatrixXd components;           // [d x 2], orthonormal columns
  Eigen::Vector2d variances;            // covariance eigenvalues, non-increasing
  Eigen::MatrixXd embeddings;           // [n x d] gathered rows, uncentered
};

// Projects the token-embedding rows of tokens with frequency >= min_support
// onto the top two principal directions of their sample covariance. Tokens
// missing from the vocabulary are skipped. Fewer than 3 qualifying tokens
// is a ValidationError.
PcaResult pca_projection(const RankerModelF& model, const Vocabulary& vocab,
                         const TokenFrequencyMatrix& matrix, std::size_t min_support = 2);

// token,frequency,x,y,label
Table projection_table(const PcaResult& pca);

}  // namespace advrank

#endif  // ADVRANK_ANALYSIS_PCA_HPP
