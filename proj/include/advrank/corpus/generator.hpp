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

#ifndef ADVRANK_CORPUS_GENERATOR_HPP
#define ADVRANK_CORPUS_GENERATOR_HPP

#include <cstdint>

#include "advrank/corpus/corpus.hpp"

namespace advrank {

struct GeneratorConfig {
  std::uint64_t seed = 7;
  std::size_t n_queries = 50;
  std::size_t depth = 100;
  std::size_t vocab_size = 2000;
  std::size_t topic_count = 10;
  std::size_t min_doc_len = 20;
  std::size_t max_doc_len = 400;
  double median_doc_len = 30.0;
};

// Seeded synthetic retrieval corpus. Terms are split into a background
// block and `topic_count` topic blocks with Zipf-shaped weights. Each query
// draws 2-6 distinct terms from its topic; each pooled document mixes query
// terms (denser toward the head), its query's topic, a secondary topic and
// background according to a latent relevance level. Grades (0-3) are derived from the measured
// query-term density of the generated text plus seeded +-1 noise; documents
// without any query term are always grade 0.
Corpus generate_corpus(const GeneratorConfig& config);

// Pronounceable synthetic term for a regular index (unique per index).
std::string synthetic_term(std::size_t index);

}  // namespace advrank

#endif  // ADVRANK_CORPUS_GENERATOR_HPP
