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

#ifndef ADVRANK_RANKER_MODEL_HPP
#define ADVRANK_RANKER_MODEL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "advrank/common/errors.hpp"
#include "advrank/core/tensor.hpp"
#include "advrank/ranker/config.hpp"

namespace advrank {

// Index arithmetic over the flat parameter list. The order here is also the
// checkpoint manifest order.
struct ParamLayout {
  static constexpr std::size_t kTokenEmbedding = 0;
  static constexpr std::size_t kPositionEmbedding = 1;
  static constexpr std::size_t kEmbedNormGain = 2;
  static constexpr std::size_t kEmbedNormBias = 3;
  static constexpr std::size_t kFirstLayer = 4;
  static constexpr std::size_t kPerLayer = 12;

  enum LayerParam : std::size_t {
    kQkvWeight = 0,
    kQkvBias,
    kOutWeight,
    kOutBias,
    kNorm1Gain,
    kNorm1Bias,
    kFfn1Weight,
    kFfn1Bias,
    kFfn2Weight,
    kFfn2Bias,
    kNorm2Gain,
    kNorm2Bias,
  };

  static std::size_t layer(std::size_t l, LayerParam p) { return kFirstLayer + l * kPerLayer + p; }
  static std::size_t head_weight(std::size_t n_layers) { return kFirstLayer + n_layers * kPerLayer; }
  static std::size_t head_bias(std::size_t n_layers) { return head_weight(n_layers) + 1; }
  static std::size_t count(std::size_t n_layers) { return head_bias(n_layers) + 1; }
};

// All trainable tensors of the cross-encoder, plus the hash of the
// vocabulary the token table was built for.
template <typename Scalar>
struct RankerModel {
  using Mat = Matrix<Scalar>;

  RankerConfig config;
  std::size_t vocab_size = 0;
  std::uint64_t vocab_hash = 0;
  std::vector<Mat> params;

  const Mat& token_embedding() const { return params[ParamLayout::kTokenEmbedding]; }
  const Mat& param(std::size_t i) const { return params[i]; }

  static std::vector<std::string> param_names(std::size_t n_layers) {
    static const char* kLayerNames[] = {"qkv.weight",  "qkv.bias",   "out.weight", "out.bias",
                                        "norm1.gain",  "norm1.bias", "ffn1.weight", "ffn1.bias",
                                        "ffn2.weight", "ffn2.bias",  "norm2.gain", "norm2.bias"};
    std::vector<std::string> names = {"token_embedding", "position_embedding", "embed_norm.gain",
                                      "embed_norm.bias"};
    for (std::size_t l = 0; l < n_layers; ++l) {
      for (const char* n : kLayerNames) names.push_back("layer" + std::to_string(l) + "." + n);
    }
    names.push_back("head.weight");
    names.push_back("head.bias");
    return names;
  }

  // Seeded initialization: embeddings N(0, 1/sqrt(d)), projections
  // N(0, 1/sqrt(fan_in)), zero biases, unit norm gains.
  static RankerModel initialize(const RankerConfig& cfg, std::size_t vocab_size,
                                std::uint64_t vocab_hash) {
    cfg.validate();
    RankerModel m;
    m.config = cfg;
    m.vocab_size = vocab_size;
    m.vocab_hash = vocab_hash;
    const auto d = static_cast<Eigen::Index>(cfg.embed_dim);
    const auto f = static_cast<Eigen::Index>(cfg.ffn_dim);
    std::mt19937_64 rng(cfg.seed);
    auto normal = [&rng](Eigen::Index r, Eigen::Index c, double stddev) {
      std::normal_distribution<double> dist(0.0, stddev);
      Mat out(r, c);
      for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = static_cast<Scalar>(dist(rng));
      return out;
    };
    const double emb_std = 1.0 / std::sqrt(static_cast<double>(d));
    m.params.resize(ParamLayout::count(cfg.n_layers));
    m.params[ParamLayout::kTokenEmbedding] = normal(static_cast<Eigen::Index>(vocab_size), d, emb_std);
    m.params[ParamLayout::kPositionEmbedding] =
        normal(static_cast<Eigen::Index>(cfg.max_len), d, emb_std);
    m.params[ParamLayout::kEmbedNormGain] = Mat::Ones(1, d);
    m.params[ParamLayout::kEmbedNormBias] = Mat::Zero(1, d);
    for (std::size_t l = 0; l < cfg.n_layers; ++l) {
      using P = ParamLayout;
      const double wd = 1.0 / std::sqrt(static_cast<double>(d));
      const double wf = 1.0 / std::sqrt(static_cast<double>(f));
      m.params[P::layer(l, P::kQkvWeight)] = normal(d, 3 * d, wd);
      if (l == 0) {
        // Query and key projections start tied, so first-layer attention
        // initially favors positions holding the same token.
        auto& w = m.params[P::layer(l, P::kQkvWeight)];
        w.middleCols(d, d) = w.leftCols(d);
      }
      m.params[P::layer(l, P::kQkvBias)] = Mat::Zero(1, 3 * d);
      m.params[P::layer(l, P::kOutWeight)] = normal(d, d, wd);
      m.params[P::layer(l, P::kOutBias)] = Mat::Zero(1, d);
      m.params[P::layer(l, P::kNorm1Gain)] = Mat::Ones(1, d);
      m.params[P::layer(l, P::kNorm1Bias)] = Mat::Zero(1, d);
      m.params[P::layer(l, P::kFfn1Weight)] = normal(d, f, wd);
      m.params[P::layer(l, P::kFfn1Bias)] = Mat::Zero(1, f);
      m.params[P::layer(l, P::kFfn2Weight)] = normal(f, d, wf);
      m.params[P::layer(l, P::kFfn2Bias)] = Mat::Zero(1, d);
      m.params[P::layer(l, P::kNorm2Gain)] = Mat::Ones(1, d);
      m.params[P::layer(l, P::kNorm2Bias)] = Mat::Zero(1, d);
    }
    m.params[ParamLayout::head_weight(cfg.n_layers)] =
        normal(d, 1, 1.0 / std::sqrt(static_cast<double>(d)));
    m.params[ParamLayout::head_bias(cfg.n_layers)] = Mat::Zero(1, 1);
    return m;
  }

  template <typename To>
  RankerModel<To> cast() const {
    RankerModel<To> out;
    out.config = config;
    out.vocab_size = vocab_size;
    out.vocab_hash = vocab_hash;
    out.params.reserve(params.size());
    for (const Mat& p : params) out.params.push_back(p.template cast<To>());
    return out;
  }

  bool all_finite() const {
    for (const Mat& p : params) {
      if (!p.allFinite()) return false;
    }
    return true;
  }

  bool operator==(const RankerModel& other) const {
    if (!(config == other.config) || vocab_size != other.vocab_size ||
        vocab_hash != other.vocab_hash || params.size() != other.params.size()) {
      return false;
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].rows() != other.params[i].rows() || params[i].cols() != other.params[i].cols() ||
          params[i] != other.params[i]) {
        return false;
      }
    }
    return true;
  }
};

using RankerModelF = RankerModel<float>;
using RankerModelD = RankerModel<double>;

}  // namespace advrank

#endif  // ADVRANK_RANKER_MODEL_HPP
