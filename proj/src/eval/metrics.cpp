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

#include "advrank/eval/metrics.hpp"

#include <algorithm>
#include <string>

#include "advrank/common/errors.hpp"

namespace advrank {

namespace {

void check_ranks(std::size_t before, std::size_t after, std::size_t depth) {
  if (depth == 0) throw ValidationError("rank shift: depth must be positive");
  for (std::size_t r : {before, after}) {
    if (r < 1 || r > depth) {
      throw ValidationError("rank shift: rank " + std::to_string(r) + " outside 1.." +
                            std::to_string(depth));
    }
  }
}

std::size_t distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::string_view to_string(MetricVariant m) { return m == MetricVariant::kNrs ? "nrs" : "nrc"; }

MetricVariant parse_metric(std::string_view s) {
  if (s == "nrs") return MetricVariant::kNrs;
  if (s == "nrc") return MetricVariant::kNrc;
  throw ConfigError("unknown metric '" + std::string(s) + "' (expected nrs or nrc)");
}

RankShift normalized_rank_shift(std::size_t rank_before, std::size_t rank_after,
                                std::size_t depth, Direction direction) {
  check_ranks(rank_before, rank_after, depth);
  const std::size_t denom = direction == Direction::kDemote ? depth - rank_before : rank_before - 1;
  if (denom == 0) return {0.0, true};
  const double v =
      static_cast<double>(distance(rank_before, rank_after)) / static_cast<double>(denom);
  return {std::clamp(v, 0.0, 1.0), false};
}

double nrc(std::size_t rank_before, std::size_t rank_after, std::size_t depth) {
  check_ranks(rank_before, rank_after, depth);
  return static_cast<double>(distance(rank_before, rank_after)) / static_cast<double>(depth);
}

RankShift rank_shift_metric(MetricVariant metric, std::size_t rank_before,
                            std::size_t rank_after, std::size_t depth, Direction direction) {
  if (metric == MetricVariant::kNrc) return {nrc(rank_before, rank_after, depth), false};
  return normalized_rank_shift(rank_before, rank_after, depth, direction);
}

}  // namespace advrank
