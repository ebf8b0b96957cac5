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

#ifndef ADVRANK_ATTACK_SPEC_HPP
#define ADVRANK_ATTACK_SPEC_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace advrank {

enum class Direction { kDemote, kPromote };
enum class Mode { kAdd, kReplace };
enum class PositionStrategy { kStart, kEnd, kMiddle, kRandom, kMaxGrad, kMinGrad };

std::string_view to_string(Direction d);
std::string_view to_string(Mode m);
std::string_view to_string(PositionStrategy p);

// Throw ConfigError on unknown names.
Direction parse_direction(std::string_view s);
Mode parse_mode(std::string_view s);
PositionStrategy parse_position(std::string_view s);

inline constexpr std::size_t kMaxAttackTokens = 20;

struct AttackSpec {
  Direction direction = Direction::kDemote;
  std::size_t n_tokens = 5;
  Mode mode = Mode::kAdd;
  PositionStrategy position = PositionStrategy::kStart;
  std::size_t beam_width = 3;
  std::size_t shortlist_k = 30;
  std::size_t max_iterations = 20;
  // Minimum objective improvement for an iteration to be accepted.
  double epsilon = 1e-4;
  std::uint64_t seed = 0;

  // Throws ConfigError naming the offending field.
  void validate(std::size_t vocab_size) const;
};

// Signed objective gain of moving from `from` to `to` (positive = better).
inline double improvement(Direction d, double from, double to) {
  return d == Direction::kDemote ? from - to : to - from;
}

}  // namespace advrank

#endif  // ADVRANK_ATTACK_SPEC_HPP
