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

#ifndef ADVRANK_RANKER_ENCODE_HPP
#define ADVRANK_RANKER_ENCODE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "advrank/common/types.hpp"
#include "advrank/corpus/corpus.hpp"
#include "advrank/ranker/config.hpp"

namespace advrank {

// Half-open range [start, end) of document positions in an encoded sequence.
struct DocSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t pos) const { return pos >= start && pos < end; }
  bool operator==(const DocSpan&) const = default;
};

// [CLS] query [SEP] document [SEP], head-truncated to max_len and padded.
struct EncodedPair {
  TokenSequence ids;              // max_len entries
  std::vector<std::uint8_t> mask;  // 1 for real tokens, 0 for PAD
  std::size_t length = 0;          // number of non-PAD positions
  DocSpan doc;
  std::size_t doc_capacity = 0;    // max_len - query - 3

  bool operator==(const EncodedPair&) const = default;
};

// Throws ValidationError if the query does not leave room for at least one
// document token, or the document is empty.
EncodedPair encode(const TokenSequence& query, const TokenSequence& document,
                   std::size_t max_len);

inline EncodedPair encode(const Query& q, const Document& d, const RankerConfig& cfg) {
  return encode(q.tokens, d.tokens, cfg.max_len);
}

}  // namespace advrank

#endif  // ADVRANK_RANKER_ENCODE_HPP
