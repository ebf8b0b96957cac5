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

#ifndef ADVRANK_SRC_ATTACK_BEAM_HPP
#define ADVRANK_SRC_ATTACK_BEAM_HPP

#include <functional>
#include <vector>

#include "advrank/attack/spec.hpp"
#include "advrank/common/types.hpp"

namespace advrank::detail {

struct Assignment {
  TokenSequence tokens;
  double score = 0;
};

// Scores a list of complete assignments exactly.
using AssignmentScorer = std::function<std::vector<double>(const std::vector<TokenSequence>&)>;

// Left-to-right beam search over slots. Each beam may keep its token at a
// slot or take one of that slot's shortlist entries; new assignments are
// scored with `scorer`. Beams are ordered by objective, then by token
// sequence. Returns the best assignment (possibly `start` itself).
Assignment beam_search(const Assignment& start, const std::vector<std::vector<TokenId>>& shortlists,
                       std::size_t beam_width, Direction direction, const AssignmentScorer& scorer);

}  // namespace advrank::detail

#endif  // ADVRANK_SRC_ATTACK_BEAM_HPP
