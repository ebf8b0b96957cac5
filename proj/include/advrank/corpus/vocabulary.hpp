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

#ifndef ADVRANK_CORPUS_VOCABULARY_HPP
#define ADVRANK_CORPUS_VOCABULARY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "advrank/common/types.hpp"

namespace advrank {

// Integer-coded token space. Ids 0..4 are the reserved special tokens;
// regular terms occupy 5..size()-1 and map one-to-one to their strings.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kCls = 1;
  static constexpr TokenId kSep = 2;
  static constexpr TokenId kMask = 3;
  static constexpr TokenId kOov = 4;
  static constexpr TokenId kFirstRegular = 5;
  static constexpr std::array<std::string_view, 5> kSpecialTerms = {"[PAD]", "[CLS]", "[SEP]",
                                                                    "[MASK]", "[OOV]"};

  // Specials only.
  Vocabulary();

  // Specials followed by `regular_terms` in order. Throws ValidationError on
  // duplicates, empty strings or special strings among the regular terms.
  static Vocabulary from_regular_terms(std::vector<std::string> regular_terms);

  // Full ordered list as serialized (specials first).
  static Vocabulary from_terms(const std::vector<std::string>& terms);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }

  // Unknown strings resolve to kOov.
  TokenId id(std::string_view term) const;
  bool contains(std::string_view term) const;
  const std::string& term(TokenId id) const;

  static bool is_special(TokenId id) { return id >= 0 && id < kFirstRegular; }
  bool valid(TokenId id) const { return id >= 0 && static_cast<std::size_t>(id) < size(); }

  // 64-bit FNV-1a over the ordered term list, each term followed by a 0 byte.
  std::uint64_t hash() const;

  bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TokenId> index_;
};

std::string hash_hex(std::uint64_t h);

}  // namespace advrank

#endif  // ADVRANK_CORPUS_VOCABULARY_HPP
