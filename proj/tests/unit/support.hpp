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


#ifndef ADVRANK_TESTS_SUPPORT_HPP
#define ADVRANK_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "advrank/core/tape.hpp"
#include "advrank/corpus/generator.hpp"
#include "advrank/ranker/model.hpp"
#include "advrank/ranker/train.hpp"

namespace advrank::testing {

using MatD = Matrix<double>;

inline MatD random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                          double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  MatD m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

// Builds a scalar objective from input leaves: sum(w ⊙ f(inputs)) with a
// fixed random weighting w, so every output entry contributes.
using Graph = std::function<Var(Tape<double>&, const std::vector<Var>&)>;

struct GradCheck {
  double max_rel_error = 0;
  double max_abs_error = 0;
};

// Compares reverse-mode gradients of `graph` at `inputs` with central
// differences of step h. Relative error is |a - n| / max(|a|, |n|, floor).
inline GradCheck check_gradients(const Graph& graph, const std::vector<MatD>& inputs,
                                 std::uint64_t seed, double h = 1e-5, double floor = 1e-3) {
  std::mt19937_64 rng(seed);
  MatD weights;
  auto objective = [&](const std::vector<MatD>& xs) {
    Tape<double> t(false);
    std::vector<Var> vs;
    for (const MatD& x : xs) vs.push_back(t.constant(x));
    const MatD& y = t.value(graph(t, vs));
    if (weights.size() == 0) weights = random_matrix(y.rows(), y.cols(), rng);
    return y.cwiseProduct(weights).sum();
  };
  objective(inputs);

  Tape<double> t(true);
  std::vector<Var> vs;
  for (const MatD& x : inputs) vs.push_back(t.input(x));
  Var y = graph(t, vs);
  t.backward(y, weights);

  GradCheck out;
  std::vector<MatD> xs = inputs;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const MatD analytic = t.grad(vs[k]);
    for (Eigen::Index i = 0; i < xs[k].size(); ++i) {
      const double keep = xs[k].data()[i];
      xs[k].data()[i] = keep + h;
      const double up = objective(xs);
      xs[k].data()[i] = keep - h;
      const double down = objective(xs);
      xs[k].data()[i] = keep;
      const double numeric = (up - down) / (2 * h);
      const double a = analytic.data()[i];
      const double abs_err = std::abs(a - numeric);
      out.max_abs_error = std::max(out.max_abs_error, abs_err);
      out.max_rel_error = std::max(
          out.max_rel_error, abs_err / std::max({std::abs(a), std::abs(numeric), floor}));
    }
  }
  return out;
}

inline GeneratorConfig tiny_generator(std::uint64_t seed = 3) {
  GeneratorConfig g;
  g.seed = seed;
  g.n_queries = 6;
  g.depth = 20;
  g.vocab_size = 150;
  g.topic_count = 4;
  g.min_doc_len = 20;
  g.max_doc_len = 40;
  g.median_doc_len = 25;
  return g;
}

inline RankerConfig tiny_ranker() {
  RankerConfig r;
  r.embed_dim = 16;
  r.n_layers = 2;
  r.n_heads = 2;
  r.ffn_dim = 32;
  r.max_len = 64;
  r.epochs = 2;
  r.pairs_per_query = 16;
  return r;
}

// A tiny corpus with a briefly trained ranker, built once per process.
struct TinySetup {
  Corpus corpus;
  RankerModelF model;
};

inline const TinySetup& tiny_setup() {
  static const TinySetup setup = [] {
    Corpus c = generate_corpus(tiny_generator());
    RankerModelF m = train(c, tiny_ranker()).model;
    return TinySetup{std::move(c), std::move(m)};
  }();
  return setup;
}

}  // namespace advrank::testing

#endif  // ADVRANK_TESTS_SUPPORT_HPP
