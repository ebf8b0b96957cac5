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

#include "beam.hpp"

#include <algorithm>
#include <set>

namespace advrank::detail {

Assignment beam_search(const Assignment& start, const std::vector<std::vector<TokenId>>& shortlists,
                       std::size_t beam_width, Direction direction, const AssignmentScorer& scorer) {
  auto before = [direction](const Assignment& a, const Assignment& b) {
    if (a.score != b.score) return improvement(direction, b.score, a.score) > 0;
    return a.tokens < b.tokens;
  };
  std::vector<Assignment> beams{start};
  std::set<TokenSequence> seen{start.tokens};
  for (std::size_t j = 0; j < shortlists.size(); ++j) {
    std::vector<TokenSequence> fresh;
    for (const Assignment& b : beams) {
      for (TokenId c : shortlists[j]) {
        if (c == b.tokens[j]) continue;
        TokenSequence y = b.tokens;
        y[j] = c;
        if (seen.insert(y).second) fresh.push_back(std::move(y));
      }
    }
    if (fresh.empty()) continue;
    const std::vector<double> scores = scorer(fresh);
    for (std::size_t n = 0; n < fresh.size(); ++n) beams.push_back({std::move(fresh[n]), scores[n]});
    std::sort(beams.begin(), beams.end(), before);
    if (beams.size() > beam_width) beams.resize(beam_width);
  }
  return beams.front();
}

}  // namespace advrank::detail
