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

#ifndef ADVRANK_EVAL_METRICS_HPP
#define ADVRANK_EVAL_METRICS_HPP

#include <cstddef>
#include <string_view>

#include "advrank/attack/spec.hpp"

namespace advrank {

enum class MetricVariant { kNrs, kNrc };

std::string_view to_string(MetricVariant m);
MetricVariant parse_metric(std::string_view s);

struct RankShift {
  double value = 0;
  // The document already sat at the extreme rank for its direction, so the
  // maximum shift distance is 0 and the value is reported as 0.
  bool degenerate = false;
};

// Normalized rank shift |before - after| / max distance, clamped to [0, 1].
// The max distance is depth - before for demotion and before - 1 for
// promotion. Ranks are 1-based and must lie in 1..depth (ValidationError).
RankShift normalized_rank_shift(std::size_t rank_before, std::size_t rank_after,
                                std::size_t depth, Direction direction);

inline double nrs(std::size_t rank_before, std::size_t rank_after, std::size_t depth,
                  Direction direction) {
  return normalized_rank_shift(rank_before, rank_after, depth, direction).value;
}

// |before - after| / depth.
double nrc(std::size_t rank_before, std::size_t rank_after, std::size_t depth);

RankShift rank_shift_metric(MetricVariant metric, std::size_t rank_before,
                            std::size_t rank_after, std::size_t depth, Direction direction);

}  // namespace advrank

#endif  // ADVRANK_EVAL_METRICS_HPP
