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

#include "advrank/attack/local.hpp"

#include <algorithm>

#include "advrank/attack/hotflip.hpp"
#include "advrank/common/errors.hpp"
#include "advrank/ranker/encode.hpp"
#include "advrank/ranker/forward.hpp"
#include "advrank/ranker/ranking.hpp"
#include "beam.hpp"

namespace advrank {

namespace {

std::size_t pool_index(const PoolContext& ctx, const std::string& doc_id) {
  const auto& ids = ctx.pool->doc_ids;
  auto it = std::find(ids.begin(), ids.end(), doc_id);
  if (it == ids.end()) {
    throw ValidationError("document '" + doc_id + "' is not in the pool of query '" +
                          ctx.pool->query_id + "'");
  }
  return static_cast<std::size_t>(it - ids.begin());
}

bool needs_gradients(PositionStrategy p) {
  return p == PositionStrategy::kMaxGrad || p == PositionStrategy::kMinGrad;
}

}  // namespace

double PoolContext::score_of(const std::string& doc_id) const {
  return scores[pool_index(*this, doc_id)];
}

std::size_t PoolContext::rank_of(const std::string& doc_id) const {
  return rank_with(doc_id, score_of(doc_id));
}

std::size_t PoolContext::rank_with(const std::string& doc_id, double score) const {
  return rank_against(doc_id, score, pool->doc_ids, scores);
}

PoolContext make_pool_context(const RankerModelF& model, const Corpus& corpus,
                              const std::string& query_id) {
  PoolContext ctx;
  ctx.query = &corpus.query(query_id);
  ctx.pool = &corpus.pool(query_id);
  ctx.scores = score_pool(model, corpus, *ctx.pool);
  return ctx;
}

AttackResult evaluate_perturbation(const RankerModelF& model, const Corpus& corpus,
                                   const PoolContext& ctx, const std::string& doc_id,
                                   const Perturbation& perturbation, Mode mode,
                                   Direction direction, PositionStrategy position) {
  const Document& doc = corpus.document(doc_id);
  const EncodedPair original = encode(*ctx.query, doc, model.config);
  const Document perturbed = apply_perturbation(doc, perturbation, mode, original.doc);
  AttackResult r;
  r.query_id = ctx.query->id;
  r.doc_id = doc_id;
  r.direction = direction;
  r.mode = mode;
  r.position = position;
  r.perturbation = perturbation;
  for (TokenId t : perturbation.tokens) r.token_strings.push_back(corpus.vocab().term(t));
  r.score_original = ctx.score_of(doc_id);
  r.score_after = score(model, encode(*ctx.query, perturbed, model.config));
  r.rank_before = ctx.rank_of(doc_id);
  r.rank_after = ctx.rank_with(doc_id, r.score_after);
  return r;
}

AttackResult local_attack(const RankerModelF& model, const Corpus& corpus, const PoolContext& ctx,
                          const std::string& doc_id, const AttackSpec& spec) {
  spec.validate(model.vocab_size);
  pool_index(ctx, doc_id);
  const Query& query = *ctx.query;
  const Document& doc = corpus.document(doc_id);
  const EncodedPair original = encode(query, doc, model.config);

  MatrixF original_grads;
  if (needs_gradients(spec.position)) {
    original_grads = score_with_input_grads(model, original).grads;
  }
  const std::size_t i = spec.n_tokens;
  Perturbation pert;
  pert.positions = select_positions(spec.position, original,
                                    needs_gradients(spec.position) ? &original_grads : nullptr, i,
                                    spec.seed);
  for (std::size_t p : pert.positions) {
    pert.tokens.push_back(spec.mode == Mode::kAdd
                              ? Vocabulary::kMask
                              : original.ids[p]);
  }

  EncodedPair current = encode(query.tokens, apply_perturbation(doc, pert, spec.mode, original.doc).tokens,
                               model.config.max_len);
  const TokenSequence base(current.ids.begin(),
                           current.ids.begin() + static_cast<std::ptrdiff_t>(current.length));
  auto scorer = [&](const std::vector<TokenSequence>& assignments) {
    std::vector<TokenSequence> seqs;
    seqs.reserve(assignments.size());
    for (const TokenSequence& y : assignments) {
      TokenSequence s = base;
      for (std::size_t j = 0; j < i; ++j) s[pert.positions[j]] = y[j];
      seqs.push_back(std::move(s));
    }
    const auto s = score_batch(model, std::span<const TokenSequence>(seqs));
    return std::vector<double>(s.begin(), s.end());
  };

  const MatrixF& table = model.params[ParamLayout::kTokenEmbedding];
  detail::Assignment best{pert.tokens, score(model, current)};
  AttackResult result;
  result.score_before = best.score;
  result.score_trace.push_back(best.score);
  std::size_t accepted = 0;
  for (std::size_t it = 0; it < spec.max_iterations; ++it) {
    for (std::size_t j = 0; j < i; ++j) current.ids[pert.positions[j]] = best.tokens[j];
    const auto g = score_with_input_grads(model, current);
    std::vector<std::vector<TokenId>> shortlists;
    shortlists.reserve(i);
    for (std::size_t j = 0; j < i; ++j) {
      const auto p = static_cast<Eigen::Index>(pert.positions[j]);
      shortlists.push_back(hotflip_shortlist<float>(table, table.row(best.tokens[j]), g.grads.row(p),
                                                    spec.shortlist_k, spec.direction));
    }
    const detail::Assignment next =
        detail::beam_search(best, shortlists, spec.beam_width, spec.direction, scorer);
    if (!(improvement(spec.direction, best.score, next.score) >= spec.epsilon) ||
        next.tokens == best.tokens) {
      break;
    }
    best = next;
    result.score_trace.push_back(best.score);
    ++accepted;
  }
  pert.tokens = best.tokens;

  AttackResult evaluated = evaluate_perturbation(model, corpus, ctx, doc_id, pert, spec.mode,
                                                 spec.direction, spec.position);
  evaluated.score_before = result.score_before;
  evaluated.score_trace = std::move(result.score_trace);
  evaluated.iterations = accepted;
  return evaluated;
}

AttackResult local_attack(const RankerModelF& model, const Corpus& corpus,
                          const std::string& query_id, const std::string& doc_id,
                          const AttackSpec& spec) {
  return local_attack(model, corpus, make_pool_context(model, corpus, query_id), doc_id, spec);
}

}  // namespace advrank
