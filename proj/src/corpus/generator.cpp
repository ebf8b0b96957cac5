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

#include "advrank/corpus/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <unordered_set>

#include "advrank/common/errors.hpp"

namespace advrank {

namespace {

constexpr std::string_view kOnsets = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

// Weighted sampler over a fixed id list.
struct TermDistribution {
  std::vector<TokenId> ids;
  mutable std::discrete_distribution<std::size_t> pick;

  TokenId sample(std::mt19937_64& rng) const { return ids[pick(rng)]; }
};

TermDistribution zipf_block(std::vector<TokenId> ids, std::mt19937_64& rng) {
  std::shuffle(ids.begin(), ids.end(), rng);
  TermDistribution d;
  d.ids = std::move(ids);
  std::vector<double> weights(d.ids.size());
  for (std::size_t r = 0; r < d.ids.size(); ++r) {
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), 0.9);
  }
  d.pick = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  return d;
}

std::string format_id(const char* fmt, std::size_t a, std::size_t b = 0) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

// Query-term probability and own-topic probability per latent level.
constexpr double kQueryShare[4] = {0.0, 0.04, 0.09, 0.15};
constexpr double kTopicShare[4] = {0.10, 0.20, 0.28, 0.35};
constexpr double kSecondaryShare = 0.30;
constexpr double kLevelProbs[4] = {0.45, 0.25, 0.18, 0.12};
// Query-term density thresholds for grades 1, 2 and 3.
constexpr double kGradeThresholds[3] = {0.02, 0.06, 0.11};
constexpr double kGradeNoise = 0.15;

}  // namespace

std::string synthetic_term(std::size_t index) {
  const std::size_t base = kOnsets.size() * kVowels.size();
  std::size_t n = index + base;  // at least two syllables
  std::string out;
  while (n > 0) {
    const std::size_t syl = n % base;
    out.insert(out.begin(), kVowels[syl % kVowels.size()]);
    out.insert(out.begin(), kOnsets[syl / kVowels.size()]);
    n /= base;
  }
  return out;
}

Corpus generate_corpus(const GeneratorConfig& config) {
  if (config.vocab_size < 100) throw ConfigError("corpus.vocab_size must be >= 100");
  if (config.depth < 10) throw ConfigError("corpus.depth must be >= 10");
  if (config.topic_count < 2) throw ConfigError("corpus.topic_count must be >= 2");
  if (config.n_queries < 1) throw ConfigError("corpus.n_queries must be >= 1");
  if (config.min_doc_len < 1 || config.min_doc_len > config.max_doc_len) {
    throw ConfigError("corpus.min_doc_len must be in [1, corpus.max_doc_len]");
  }

  std::mt19937_64 rng(config.seed);

  const std::size_t n_regular = config.vocab_size - Vocabulary::kFirstRegular;
  std::vector<std::string> terms;
  terms.reserve(n_regular);
  for (std::size_t i = 0; i < n_regular; ++i) terms.push_back(synthetic_term(i));
  Vocabulary vocab = Vocabulary::from_regular_terms(std::move(terms));

  // Background block then equal topic blocks over a shuffled id order.
  std::vector<TokenId> all(n_regular);
  std::iota(all.begin(), all.end(), Vocabulary::kFirstRegular);
  std::shuffle(all.begin(), all.end(), rng);
  const std::size_t n_background = n_regular / 5;
  const std::size_t per_topic = (n_regular - n_background) / config.topic_count;
  if (per_topic < 8) throw ConfigError("corpus.topic_count too large for corpus.vocab_size");
  TermDistribution background =
      zipf_block(std::vector<TokenId>(all.begin(), all.begin() + n_background), rng);
  std::vector<TermDistribution> topics;
  for (std::size_t t = 0; t < config.topic_count; ++t) {
    auto first = all.begin() + static_cast<std::ptrdiff_t>(n_background + t * per_topic);
    topics.push_back(zipf_block(std::vector<TokenId>(first, first + per_topic), rng));
  }

  std::vector<Query> queries;
  std::vector<Document> documents;
  std::vector<CandidatePool> pools;
  std::uniform_int_distribution<std::size_t> query_len(2, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> log_len(std::log(config.median_doc_len), 0.5);
  std::discrete_distribution<int> level_dist(std::begin(kLevelProbs), std::end(kLevelProbs));
  std::uniform_int_distribution<std::size_t> other_topic(0, config.topic_count - 2);

  for (std::size_t qi = 0; qi < config.n_queries; ++qi) {
    const std::size_t topic = qi % config.topic_count;
    Query q;
    q.id = format_id("q%04zu", qi);
    const std::size_t len = query_len(rng);
    std::unordered_set<TokenId> qset;
    while (q.tokens.size() < len) {
      const TokenId t = topics[topic].sample(rng);
      if (qset.insert(t).second) q.tokens.push_back(t);
    }

    CandidatePool pool;
    pool.query_id = q.id;
    std::vector<double> density(config.depth);
    std::vector<std::size_t> overlap(config.depth);
    // One guaranteed highly relevant document per pool.
    const std::size_t anchor = std::uniform_int_distribution<std::size_t>(0, config.depth - 1)(rng);
    for (std::size_t di = 0; di < config.depth; ++di) {
      const int level = di == anchor ? 3 : level_dist(rng);
      std::size_t secondary = other_topic(rng);
      if (secondary >= topic) ++secondary;
      const double raw_len = std::exp(log_len(rng));
      const auto dlen = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(raw_len)),
                                                config.min_doc_len, config.max_doc_len);
      Document d;
      d.id = format_id("q%04zu-d%03zu", qi, di);
      d.tokens.reserve(dlen);
      for (std::size_t k = 0; k < dlen; ++k) {
        const double u = unit(rng);
        // Query terms concentrate toward the head: linear decay with mean 1.
        const double lead =
            2.0 * (1.0 - (static_cast<double>(k) + 0.5) / static_cast<double>(dlen));
        const double p_query = kQueryShare[level] * lead;
        const double p_topic = p_query + kTopicShare[level];
        const double p_secondary = p_topic + kSecondaryShare;
        TokenId t;
        if (u < p_query) {
          t = q.tokens[std::uniform_int_distribution<std::size_t>(0, q.tokens.size() - 1)(rng)];
        } else if (u < p_topic) {
          t = topics[topic].sample(rng);
        } else if (u < p_secondary) {
          t = topics[secondary].sample(rng);
        } else {
          t = background.sample(rng);
        }
        d.tokens.push_back(t);
      }
      std::size_t hits = 0;
      for (TokenId t : d.tokens) hits += qset.count(t);
      overlap[di] = hits;
      density[di] = static_cast<double>(hits) / static_cast<double>(dlen);
      pool.doc_ids.push_back(d.id);
      documents.push_back(std::move(d));
    }

    pool.grades.resize(config.depth);
    for (std::size_t di = 0; di < config.depth; ++di) {
      int grade = 0;
      if (overlap[di] > 0) {
        for (double th : kGradeThresholds) grade += density[di] >= th ? 1 : 0;
        const double u = unit(rng);
        if (u < kGradeNoise / 2) {
          grade -= 1;
        } else if (u < kGradeNoise) {
          grade += 1;
        }
        grade = std::clamp(grade, 0, 3);
      } else {
        unit(rng);  // keep the stream aligned regardless of overlap
      }
      pool.grades[di] = grade;
    }
    if (std::none_of(pool.grades.begin(), pool.grades.end(), [](int g) { return g > 0; })) {
      auto best = std::max_element(density.begin(), density.end()) - density.begin();
      pool.grades[static_cast<std::size_t>(best)] = 1;
    }
    queries.push_back(std::move(q));
    pools.push_back(std::move(pool));
  }
  return Corpus(std::move(vocab), std::move(queries), std::move(documents), std::move(pools));
}

}  // namespace advrank
