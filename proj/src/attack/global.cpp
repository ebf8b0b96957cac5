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

#include "advrank/attack/global.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include "advrank/attack/hotflip.hpp"
#include "advrank/common/errors.hpp"
#include "advrank/ranker/encode.hpp"
#include "advrank/ranker/forward.hpp"
#include "advrank/ranker/ranking.hpp"
#include "beam.hpp"

namespace advrank {

namespace {

constexpr std::array<std::string_view, 2> kSelectors = {"top", "bottom"};

// Seeded sample of min(n, size) distinct indices, returned in ascending order.
std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t take = std::min(n, size);
  for (std::size_t j = 0; j < take; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, size - 1);
    std::swap(idx[j], idx[pick(rng)]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// A (query, document) pair encoded with a placeholder trigger in front of
// the document; trigger slots are overwritten per candidate.
struct PreparedPair {
  TokenSequence ids;  // unpadded
  std::size_t first_slot = 0;
};

PreparedPair prepare(const RankerModelF& model, const Corpus& corpus, const QueryDocPair& pair,
                     std::size_t n_tokens) {
  const Query& q = corpus.query(pair.query_id);
  const Document& d = corpus.document(pair.doc_id);
  TokenSequence tokens(n_tokens, Vocabulary::kMask);
  tokens.insert(tokens.end(), d.tokens.begin(), d.tokens.end());
  const EncodedPair e = encode(q.tokens, tokens, model.config.max_len);
  if (e.doc.size() < n_tokens) {
    throw ValidationError("global attack: trigger does not fit in front of document '" +
                          pair.doc_id + "'");
  }
  return {TokenSequence(e.ids.begin(), e.ids.begin() + static_cast<std::ptrdiff_t>(e.length)),
          e.doc.start};
}

TokenSequence with_trigger(const PreparedPair& p, const TokenSequence& trigger) {
  TokenSequence s = p.ids;
  std::copy(trigger.begin(), trigger.end(), s.begin() + static_cast<std::ptrdiff_t>(p.first_slot));
  return s;
}

}  // namespace

std::string_view to_string(DocSelector s) { return kSelectors[static_cast<std::size_t>(s)]; }

DocSelector parse_selector(std::string_view s) {
  for (std::size_t i = 0; i < kSelectors.size(); ++i) {
    if (kSelectors[i] == s) return static_cast<DocSelector>(i);
  }
  throw ConfigError("unknown document selector '" + std::string(s) + "' (expected top or bottom)");
}

std::vector<QueryDocPair> select_pairs(const RankerModelF& model, const Corpus& corpus,
                                       const std::vector<std::string>& query_ids,
                                       DocSelector selector) {
  std::vector<QueryDocPair> out;
  for (const std::string& qid : query_ids) {
    const auto ranked = rank_pool(model, corpus, corpus.pool(qid));
    const std::size_t half = ranked.size() / 2;
    const std::size_t first = selector == DocSelector::kTopRanked ? 0 : half;
    const std::size_t last = selector == DocSelector::kTopRanked ? half : ranked.size();
    for (std::size_t r = first; r < last; ++r) out.push_back({qid, ranked[r].doc_id});
  }
  return out;
}

Perturbation prepend_perturbation(const EncodedPair& encoded, const TokenSequence& tokens) {
  Perturbation p;
  p.tokens = tokens;
  for (std::size_t j = 0; j < tokens.size(); ++j) p.positions.push_back(encoded.doc.start + j);
  return p;
}

TriggerResult global_attack(const RankerModelF& model, const Corpus& corpus,
                            const std::vector<std::string>& query_ids, DocSelector selector,
                            const AttackSpec& spec, const GlobalOptions& options) {
  spec.validate(model.vocab_size);
  if (spec.mode != Mode::kAdd || spec.position != PositionStrategy::kStart) {
    throw ConfigError("global attack requires attack.mode=add and attack.position=start");
  }
  if (options.batch_size == 0) throw ConfigError("global.batch_size must be >= 1");
  if (options.eval_size == 0) throw ConfigError("global.eval_size must be >= 1");
  const std::vector<QueryDocPair> pairs = select_pairs(model, corpus, query_ids, selector);
  if (pairs.empty()) throw ValidationError("global attack: no (query, document) pairs selected");

  const std::size_t i = spec.n_tokens;
  std::mt19937_64 rng(spec.seed);
  TriggerResult result;
  result.direction = spec.direction;
  result.selector = selector;

  std::vector<PreparedPair> eval;
  double original_sum = 0;
  for (std::size_t k : sample_indices(pairs.size(), options.eval_size, rng)) {
    const QueryDocPair& pair = pairs[k];
    result.eval_pairs.push_back(pair);
    eval.push_back(prepare(model, corpus, pair, i));
    original_sum += score(model, encode(corpus.query(pair.query_id),
                                        corpus.document(pair.doc_id), model.config));
  }
  const double n_eval = static_cast<double>(eval.size());
  result.mean_score_original = original_sum / n_eval;

  auto scorer = [&](const std::vector<TokenSequence>& triggers) {
    std::vector<double> sums(triggers.size(), 0.0);
    for (const PreparedPair& p : eval) {
      std::vector<TokenSequence> seqs;
      seqs.reserve(triggers.size());
      for (const TokenSequence& t : triggers) seqs.push_back(with_trigger(p, t));
      const auto s = score_batch(model, std::span<const TokenSequence>(seqs));
      for (std::size_t n = 0; n < s.size(); ++n) sums[n] += s[n];
    }
    for (double& s : sums) s /= n_eval;
    return sums;
  };

  const MatrixF& table = model.params[ParamLayout::kTokenEmbedding];
  const TokenSequence start(i, Vocabulary::kMask);
  detail::Assignment best{start, scorer({start}).front()};
  result.mean_score_before = best.score;
  result.score_trace.push_back(best.score);
  for (std::size_t it = 0; it < spec.max_iterations; ++it) {
    MatrixF grad_sum = MatrixF::Zero(static_cast<Eigen::Index>(i), table.cols());
    const auto batch = sample_indices(pairs.size(), options.batch_size, rng);
    for (std::size_t k : batch) {
      const PreparedPair p = prepare(model, corpus, pairs[k], i);
      EncodedPair e;
      e.ids = with_trigger(p, best.tokens);
      e.length = e.ids.size();
      const auto g = score_with_input_grads(model, e);
      grad_sum += g.grads.middleRows(static_cast<Eigen::Index>(p.first_slot),
                                     static_cast<Eigen::Index>(i));
    }
    grad_sum /= static_cast<float>(batch.size());
    std::vector<std::vector<TokenId>> shortlists;
    for (std::size_t j = 0; j < i; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      shortlists.push_back(hotflip_shortlist<float>(table, table.row(best.tokens[j]),
                                                    grad_sum.row(jj), spec.shortlist_k,
                                                    spec.direction));
    }
    const detail::Assignment next =
        detail::beam_search(best, shortlists, spec.beam_width, spec.direction, scorer);
    if (!(improvement(spec.direction, best.score, next.score) >= spec.epsilon) ||
        next.tokens == best.tokens) {
      break;
    }
    best = next;
    result.score_trace.push_back(best.score);
    ++result.iterations;
  }
  result.tokens = best.tokens;
  for (TokenId t : best.tokens) result.token_strings.push_back(corpus.vocab().term(t));
  result.mean_score_after = best.score;
  return result;
}

}  // namespace advrank
