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

#ifndef ADVRANK_RANKER_CONFIG_HPP
#define ADVRANK_RANKER_CONFIG_HPP

#include <cstddef>
#include <cstdint>

namespace advrank {

struct RankerConfig {
  std::size_t embed_dim = 48;
  std::size_t n_layers = 2;
  std::size_t n_heads = 2;
  std::size_t ffn_dim = 96;
  std::size_t max_len = 128;
  double margin = 1.0;
  double learning_rate = 0.05;
  std::size_t epochs = 10;
  std::size_t pairs_per_query = 64;
  std::size_t batch_pairs = 8;  // pairs averaged per SGD step
  double heldout_fraction = 0.2;
  std::uint64_t seed = 13;

  // Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const RankerConfig&) const = default;
};

}  // namespace advrank

#endif  // ADVRANK_RANKER_CONFIG_HPP
