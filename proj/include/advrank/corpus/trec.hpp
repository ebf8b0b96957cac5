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

#ifndef ADVRANK_CORPUS_TREC_HPP
#define ADVRANK_CORPUS_TREC_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "advrank/corpus/corpus.hpp"

namespace advrank {

struct IngestOptions {
  std::size_t depth = 100;
  std::size_t min_term_frequency = 2;
};

struct IngestReport {
  std::size_t unknown_doc_rows = 0;      // qrels rows naming a docid absent from docs
  std::size_t unknown_query_rows = 0;    // qrels rows naming a qid absent from queries
  std::size_t duplicate_rows = 0;
  std::size_t dropped_short_pools = 0;   // fewer than depth judged documents
  std::size_t dropped_no_relevant = 0;   // no grade > 0 among the kept rows
  std::size_t dropped_empty_queries = 0;
  std::size_t empty_documents = 0;
};

struct IngestResult {
  Corpus corpus;
  IngestReport report;
};

// Lowercases, splits on whitespace and strips leading/trailing ASCII
// punctuation; tokens that become empty are dropped.
std::vector<std::string> tokenize_text(std::string_view text);

// Builds a corpus from TREC qrels ("qid 0 docid grade") plus JSONL docs and
// queries ({"id":..., "text":...}). The vocabulary holds every term seen at
// least min_term_frequency times across docs and queries (ordered by
// descending count, then lexicographically); rarer terms map to [OOV].
// Pools keep qrels order truncated to depth.
IngestResult ingest_trec(const std::filesystem::path& qrels_path,
                         const std::filesystem::path& docs_path,
                         const std::filesystem::path& queries_path,
                         const IngestOptions& options = {});

}  // namespace advrank

#endif  // ADVRANK_CORPUS_TREC_HPP
