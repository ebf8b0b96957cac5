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

#include "advrank/corpus/vocabulary.hpp"

#include <cstdio>

#include "advrank/common/errors.hpp"

namespace advrank {

Vocabulary::Vocabulary() {
  for (std::size_t i = 0; i < kSpecialTerms.size(); ++i) {
    terms_.emplace_back(kSpecialTerms[i]);
    index_.emplace(terms_.back(), static_cast<TokenId>(i));
  }
}

Vocabulary Vocabulary::from_regular_terms(std::vector<std::string> regular_terms) {
  Vocabulary v;
  v.terms_.reserve(v.terms_.size() + regular_terms.size());
  for (std::string& t : regular_terms) {
    if (t.empty()) throw ValidationError("vocabulary: empty term");
    const auto id = static_cast<TokenId>(v.terms_.size());
    if (!v.index_.emplace(t, id).second) {
      throw ValidationError("vocabulary: duplicate term '" + t + "'");
    }
    v.terms_.push_back(std::move(t));
  }
  return v;
}

Vocabulary Vocabulary::from_terms(const std::vector<std::string>& terms) {
  if (terms.size() < kSpecialTerms.size()) {
    throw ValidationError("vocabulary: missing special tokens");
  }
  for (std::size_t i = 0; i < kSpecialTerms.size(); ++i) {
    if (terms[i] != kSpecialTerms[i]) {
      throw ValidationError("vocabulary: expected special token " +
                            std::string(kSpecialTerms[i]) + " at index " + std::to_string(i) +
                            ", found '" + terms[i] + "'");
    }
  }
  return from_regular_terms(
      std::vector<std::string>(terms.begin() + kSpecialTerms.size(), terms.end()));
}

TokenId Vocabulary::id(std::string_view term) const {
  auto it = index_.find(std::string(term));
  return it == index_.end() ? kOov : it->second;
}

bool Vocabulary::contains(std::string_view term) const {
  return index_.count(std::string(term)) > 0;
}

const std::string& Vocabulary::term(TokenId id) const {
  if (!valid(id)) throw ValidationError("vocabulary: token id " + std::to_string(id) + " out of range");
  return terms_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const std::string& t : terms_) {
    for (char c : t) mix(static_cast<unsigned char>(c));
    mix(0);
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace advrank
