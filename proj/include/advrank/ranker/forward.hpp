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

#ifndef ADVRANK_RANKER_FORWARD_HPP
#define ADVRANK_RANKER_FORWARD_HPP

#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "advrank/core/ops.hpp"
#include "advrank/ranker/encode.hpp"
#include "advrank/ranker/model.hpp"

namespace advrank {

template <typename Scalar>
struct ForwardOutput {
  Var scores;  // [n_seq x 1]
  Var inputs;  // gathered token embeddings, [n_seq*seq_len x d]
};

// Post-norm transformer encoder over `n_seq` stacked sequences of
// `seq_len` real (non-PAD) tokens each, scored from the [CLS] row.
//
// PAD positions are never materialized: attending only over the real
// prefix of a padded sequence is exactly masked attention, so the score and
// all real-position gradients are those of the padded computation.
//
// With `param_grads` the parameters are recorded as differentiable leaves
// (training); otherwise only the gathered input embeddings are.
template <typename Scalar>
ForwardOutput<Scalar> forward(Tape<Scalar>& t, const RankerModel<Scalar>& m,
                              std::span<const TokenId> ids, std::size_t n_seq, std::size_t seq_len,
                              bool param_grads) {
  using P = ParamLayout;
  using Mat = Matrix<Scalar>;
  const RankerConfig& cfg = m.config;
  if (n_seq == 0 || seq_len == 0 || ids.size() != n_seq * seq_len) {
    throw ShapeError("forward: " + std::to_string(ids.size()) + " ids do not form " +
                     std::to_string(n_seq) + " sequences of length " + std::to_string(seq_len));
  }
  if (seq_len > cfg.max_len) {
    throw ShapeError("forward: sequence length " + std::to_string(seq_len) + " exceeds max_len " +
                     std::to_string(cfg.max_len));
  }
  auto param = [&](std::size_t i) {
    return t.reference(m.params[i], param_grads ? static_cast<long>(i) : -1);
  };

  Var x;
  if (param_grads) {
    x = ops::embed_gather(t, param(P::kTokenEmbedding), ids);
  } else {
    const Mat& table = m.params[P::kTokenEmbedding];
    Mat gathered(static_cast<Eigen::Index>(ids.size()), table.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 0 || ids[i] >= table.rows()) {
        throw ShapeError("forward: token id " + std::to_string(ids[i]) + " outside vocabulary of " +
                         std::to_string(table.rows()));
      }
      gathered.row(static_cast<Eigen::Index>(i)) = table.row(ids[i]);
    }
    x = t.input(std::move(gathered));
  }
  std::vector<TokenId> positions(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) positions[i] = static_cast<TokenId>(i % seq_len);
  Var pos = ops::embed_gather(t, param(P::kPositionEmbedding), std::span<const TokenId>(positions));

  Var h = ops::layer_norm(t, ops::add(t, x, pos), param(P::kEmbedNormGain),
                          param(P::kEmbedNormBias));
  const auto ns = static_cast<Eigen::Index>(n_seq);
  const auto sl = static_cast<Eigen::Index>(seq_len);
  const auto nh = static_cast<Eigen::Index>(cfg.n_heads);
  std::vector<TokenId> cls_rows(n_seq);
  for (std::size_t s = 0; s < n_seq; ++s) cls_rows[s] = static_cast<TokenId>(s * seq_len);
  bool reduced = false;
  for (std::size_t l = 0; l < cfg.n_layers; ++l) {
    Var qkv = ops::add(t, ops::matmul(t, h, param(P::layer(l, P::kQkvWeight))),
                       param(P::layer(l, P::kQkvBias)));
    // The score reads only the [CLS] row, so the last layer computes nothing else.
    const bool last = l + 1 == cfg.n_layers;
    Var att = ops::multi_head_attention(t, qkv, ns, sl, nh, last);
    if (last) {
      h = ops::embed_gather(t, h, std::span<const TokenId>(cls_rows));
      reduced = true;
    }
    Var proj = ops::add(t, ops::matmul(t, att, param(P::layer(l, P::kOutWeight))),
                        param(P::layer(l, P::kOutBias)));
    h = ops::layer_norm(t, ops::add(t, h, proj), param(P::layer(l, P::kNorm1Gain)),
                        param(P::layer(l, P::kNorm1Bias)));
    Var f1 = ops::gelu(t, ops::add(t, ops::matmul(t, h, param(P::layer(l, P::kFfn1Weight))),
                                   param(P::layer(l, P::kFfn1Bias))));
    Var f2 = ops::add(t, ops::matmul(t, f1, param(P::layer(l, P::kFfn2Weight))),
                      param(P::layer(l, P::kFfn2Bias)));
    h = ops::layer_norm(t, ops::add(t, h, f2), param(P::layer(l, P::kNorm2Gain)),
                        param(P::layer(l, P::kNorm2Bias)));
  }
  Var cls = reduced ? h : ops::embed_gather(t, h, std::span<const TokenId>(cls_rows));
  Var score = ops::add(t, ops::matmul(t, cls, param(P::head_weight(cfg.n_layers))),
                       param(P::head_bias(cfg.n_layers)));
  return {score, x};
}

namespace detail {

inline std::span<const TokenId> active_ids(const EncodedPair& e) {
  if (e.length == 0 || e.length > e.ids.size()) {
    throw ValidationError("encoded pair has invalid length " + std::to_string(e.length));
  }
  return std::span<const TokenId>(e.ids.data(), e.length);
}

}  // namespace detail

template <typename Scalar>
Scalar score(const RankerModel<Scalar>& m, const EncodedPair& e) {
  Tape<Scalar> t(false);
  auto ids = detail::active_ids(e);
  auto out = forward(t, m, ids, 1, ids.size(), false);
  return t.value(out.scores)(0, 0);
}

// Scores several unpadded sequences one forward pass at a time. Results
// are bit-identical to score() on each sequence. (Stacking sequences into
// one pass was measured slower: the intermediates of a stacked batch
// overflow the cache.)
template <typename Scalar>
std::vector<Scalar> score_batch(const RankerModel<Scalar>& m, std::span<const TokenSequence> seqs) {
  std::vector<Scalar> out;
  out.reserve(seqs.size());
  for (const TokenSequence& s : seqs) {
    if (s.empty()) throw ShapeError("score_batch: empty sequence");
    Tape<Scalar> t(false);
    auto f = forward(t, m, std::span<const TokenId>(s), 1, s.size(), false);
    out.push_back(t.value(f.scores)(0, 0));
  }
  return out;
}

template <typename Scalar>
struct InputGradients {
  Scalar score = 0;
  // d(score)/d(token embedding) per position, [max_len x d]; PAD rows are 0.
  Matrix<Scalar> grads;
};

template <typename Scalar>
InputGradients<Scalar> score_with_input_grads(const RankerModel<Scalar>& m, const EncodedPair& e) {
  Tape<Scalar> t(true);
  auto ids = detail::active_ids(e);
  auto out = forward(t, m, ids, 1, ids.size(), false);
  t.backward(out.scores, Matrix<Scalar>::Ones(1, 1));
  InputGradients<Scalar> r;
  r.score = t.value(out.scores)(0, 0);
  r.grads = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(e.ids.size()),
                                 static_cast<Eigen::Index>(m.config.embed_dim));
  r.grads.topRows(static_cast<Eigen::Index>(ids.size())) = t.grad(out.inputs);
  return r;
}

}  // namespace advrank

#endif  // ADVRANK_RANKER_FORWARD_HPP
