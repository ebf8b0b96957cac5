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

#include "advrank/corpus/corpus.hpp"

#include <algorithm>

#include "advrank/common/errors.hpp"

namespace advrank {

int CandidatePool::grade_of(const std::string& doc_id) const {
  auto it = std::find(doc_ids.begin(), doc_ids.end(), doc_id);
  if (it == doc_ids.end()) {
    throw ValidationError("document " + doc_id + " is not in the pool of query " + query_id);
  }
  return grades[static_cast<std::size_t>(it - doc_ids.begin())];
}

Corpus::Corpus(Vocabulary vocab, std::vector<Query> queries, std::vector<Document> documents,
               std::vector<CandidatePool> pools)
    : vocab_(std::move(vocab)),
      queries_(std::move(queries)),
      documents_(std::move(documents)),
      pools_(std::move(pools)) {
  validate_and_index();
}

namespace {

// Text may hold regular terms and [OOV]; the structural specials never.
void check_text(const Vocabulary& vocab, const TokenSequence& tokens, const std::string& what) {
  for (TokenId t : tokens) {
    if (!vocab.valid(t)) {
      throw ValidationError(what + ": token id " + std::to_string(t) + " outside vocabulary");
    }
    if (Vocabulary::is_special(t) && t != Vocabulary::kOov) {
      throw ValidationError(what + ": contains special token " + vocab.term(t));
    }
  }
}

}  // namespace

void Corpus::validate_and_index() {
  if (queries_.empty()) throw ValidationError("no queries");
  for (std::size_t i = 0; i < queries_.size(); ++i) {
    const Query& q = queries_[i];
    if (!query_index_.emplace(q.id, i).second) {
      throw ValidationError("duplicate query id: " + q.id);
    }
    if (q.tokens.empty()) throw ValidationError("query " + q.id + " has no tokens");
    check_text(vocab_, q.tokens, "query " + q.id);
  }
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const Document& d = documents_[i];
    if (!doc_index_.emplace(d.id, i).second) {
      throw ValidationError("duplicate document id: " + d.id);
    }
    if (d.tokens.empty()) throw ValidationError("document " + d.id + " is empty");
    check_text(vocab_, d.tokens, "document " + d.id);
  }
  const std::size_t depth = pools_.empty() ? 0 : pools_.front().size();
  for (std::size_t i = 0; i < pools_.size(); ++i) {
    const CandidatePool& p = pools_[i];
    if (!query_index_.count(p.query_id)) {
      throw ValidationError("pool references unknown query id: " + p.query_id);
    }
    if (!pool_index_.emplace(p.query_id, i).second) {
      throw ValidationError("duplicate pool for query id: " + p.query_id);
    }
    if (p.doc_ids.size() != p.grades.size()) {
      throw ValidationError("pool " + p.query_id + ": doc_ids and grades differ in length");
    }
    if (p.size() != depth || depth == 0) {
      throw ValidationError("pool " + p.query_id + " has " + std::to_string(p.size()) +
                            " documents, expected " + std::to_string(depth));
    }
    std::unordered_map<std::string, int> seen;
    bool any_relevant = false;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!doc_index_.count(p.doc_ids[j])) {
        throw ValidationError("pool " + p.query_id + " references unknown document id: " +
                              p.doc_ids[j]);
      }
      if (!seen.emplace(p.doc_ids[j], 1).second) {
        throw ValidationError("pool " + p.query_id + " lists duplicate document id: " +
                              p.doc_ids[j]);
      }
      if (p.grades[j] < 0) {
        throw ValidationError("pool " + p.query_id + ": negative grade for " + p.doc_ids[j]);
      }
      any_relevant = any_relevant || p.grades[j] > 0;
    }
    if (!any_relevant) {
      throw ValidationError("pool " + p.query_id + " has no document with grade > 0");
    }
  }
}

const Query& Corpus::query(const std::string& id) const {
  auto it = query_index_.find(id);
  if (it == query_index_.end()) throw ValidationError("unknown query id: " + id);
  return queries_[it->second];
}

const Document& Corpus::document(const std::string& id) const {
  auto it = doc_index_.find(id);
  if (it == doc_index_.end()) throw ValidationError("unknown document id: " + id);
  return documents_[it->second];
}

const CandidatePool& Corpus::pool(const std::string& query_id) const {
  auto it = pool_index_.find(query_id);
  if (it == pool_index_.end()) throw ValidationError("no pool for query id: " + query_id);
  return pools_[it->second];
}

}  // namespace advrank
