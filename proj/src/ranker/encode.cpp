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

#include "advrank/ranker/encode.hpp"

#include <algorithm>
#include <string>

#include "advrank/common/errors.hpp"
#include "advrank/corpus/vocabulary.hpp"

namespace advrank {

EncodedPair encode(const TokenSequence& query, const TokenSequence& document,
                   std::size_t max_len) {
  if (document.empty()) throw ValidationError("encode: empty document");
  if (query.size() + 4 > max_len) {
    throw ValidationError("encode: query of " + std::to_string(query.size()) +
                          " tokens leaves no room for the document within max_len " +
                          std::to_string(max_len));
  }
  EncodedPair e;
  e.doc_capacity = max_len - query.size() - 3;
  const std::size_t doc_len = std::min(document.size(), e.doc_capacity);
  e.ids.reserve(max_len);
  e.ids.push_back(Vocabulary::kCls);
  e.ids.insert(e.ids.end(), query.begin(), query.end());
  e.ids.push_back(Vocabulary::kSep);
  e.doc.start = e.ids.size();
  e.ids.insert(e.ids.end(), document.begin(), document.begin() + static_cast<std::ptrdiff_t>(doc_len));
  e.doc.end = e.ids.size();
  e.ids.push_back(Vocabulary::kSep);
  e.length = e.ids.size();
  e.mask.assign(max_len, 0);
  std::fill(e.mask.begin(), e.mask.begin() + static_cast<std::ptrdiff_t>(e.length), 1);
  e.ids.resize(max_len, Vocabulary::kPad);
  return e;
}

}  // namespace advrank
