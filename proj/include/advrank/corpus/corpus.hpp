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

#ifndef ADVRANK_CORPUS_CORPUS_HPP
#define ADVRANK_CORPUS_CORPUS_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "advrank/common/types.hpp"
#include "advrank/corpus/vocabulary.hpp"

namespace advrank {

struct Query {
  std::string id;
  TokenSequence tokens;

  bool operator==(const Query&) const = default;
};

struct Document {
  std::string id;
  TokenSequence tokens;

  bool operator==(const Document&) const = default;
};

// Fixed re-ranking candidate list for one query. doc_ids and grades are
// parallel arrays.
struct CandidatePool {
  std::string query_id;
  std::vector<std::string> doc_ids;
  std::vector<int> grades;

  std::size_t size() const { return doc_ids.size(); }
  int grade_of(const std::string& doc_id) const;

  bool operator==(const CandidatePool&) const = default;
};

// Queries, documents and pools over one vocabulary. Immutable once built;
// the constructor validates every cross-reference.
class Corpus {
 public:
  Corpus() = default;
  Corpus(Vocabulary vocab, std::vector<Query> queries, std::vector<Document> documents,
         std::vector<CandidatePool> pools);

  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<Query>& queries() const { return queries_; }
  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<CandidatePool>& pools() const { return pools_; }

  const Query& query(const std::string& id) const;
  const Document& document(const std::string& id) const;
  const CandidatePool& pool(const std::string& query_id) const;
  bool has_document(const std::string& id) const { return doc_index_.count(id) > 0; }

  // Common pool size (0 for an empty corpus).
  std::size_t depth() const { return pools_.empty() ? 0 : pools_.front().size(); }

  bool operator==(const Corpus& other) const {
    return vocab_ == other.vocab_ && queries_ == other.queries_ &&
           documents_ == other.documents_ && pools_ == other.pools_;
  }

 private:
  void validate_and_index();

  Vocabulary vocab_;
  std::vector<Query> queries_;
  std::vector<Document> documents_;
  std::vector<CandidatePool> pools_;
  std::unordered_map<std::string, std::size_t> query_index_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  std::unordered_map<std::string, std::size_t> pool_index_;
};

}  // namespace advrank

#endif  // ADVRANK_CORPUS_CORPUS_HPP
