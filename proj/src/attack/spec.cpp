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

#include "advrank/attack/spec.hpp"

#include <array>
#include <cmath>

#include "advrank/common/errors.hpp"

namespace advrank {

namespace {

constexpr std::array<std::string_view, 2> kDirections = {"demote", "promote"};
constexpr std::array<std::string_view, 2> kModes = {"add", "replace"};
constexpr std::array<std::string_view, 6> kPositions = {"start",  "end",      "middle",
                                                        "random", "max_grad", "min_grad"};

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::string_view, N>& names, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  std::string msg = std::string("unknown ") + what + " '" + std::string(s) + "' (expected one of";
  for (auto n : names) msg += " " + std::string(n);
  throw ConfigError(msg + ")");
}

}  // namespace

std::string_view to_string(Direction d) { return kDirections[static_cast<std::size_t>(d)]; }
std::string_view to_string(Mode m) { return kModes[static_cast<std::size_t>(m)]; }
std::string_view to_string(PositionStrategy p) { return kPositions[static_cast<std::size_t>(p)]; }

Direction parse_direction(std::string_view s) {
  return parse_enum<Direction>(s, kDirections, "direction");
}
Mode parse_mode(std::string_view s) { return parse_enum<Mode>(s, kModes, "mode"); }
PositionStrategy parse_position(std::string_view s) {
  return parse_enum<PositionStrategy>(s, kPositions, "position strategy");
}

void AttackSpec::validate(std::size_t vocab_size) const {
  if (n_tokens < 1 || n_tokens > kMaxAttackTokens) {
    throw ConfigError("attack.n_tokens must be in [1, " + std::to_string(kMaxAttackTokens) + "]");
  }
  if (beam_width < 1) throw ConfigError("attack.beam_width must be >= 1");
  if (shortlist_k < 1) throw ConfigError("attack.shortlist_k must be >= 1");
  if (shortlist_k > vocab_size) {
    throw ConfigError("attack.shortlist_k (" + std::to_string(shortlist_k) +
                      ") exceeds the vocabulary size (" + std::to_string(vocab_size) + ")");
  }
  if (std::isnan(epsilon) || epsilon < 0) throw ConfigError("attack.epsilon must be >= 0");
}

}  // namespace advrank
