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

#include "advrank/ranker/config.hpp"

#include "advrank/common/errors.hpp"

namespace advrank {

void RankerConfig::validate() const {
  if (embed_dim == 0) throw ConfigError("ranker.embed_dim must be positive");
  if (n_heads == 0) throw ConfigError("ranker.n_heads must be positive");
  if (embed_dim % n_heads != 0) {
    throw ConfigError("ranker.embed_dim must be divisible by ranker.n_heads");
  }
  if (n_layers == 0) throw ConfigError("ranker.n_layers must be positive");
  if (ffn_dim == 0) throw ConfigError("ranker.ffn_dim must be positive");
  if (max_len < 5) throw ConfigError("ranker.max_len must be at least 5");
  if (!(margin >= 0)) throw ConfigError("ranker.margin must be non-negative");
  if (!(learning_rate > 0)) throw ConfigError("ranker.learning_rate must be positive");
  if (batch_pairs == 0) throw ConfigError("ranker.batch_pairs must be positive");
  if (!(heldout_fraction >= 0 && heldout_fraction < 1)) {
    throw ConfigError("ranker.heldout_fraction must be in [0, 1)");
  }
}

}  // namespace advrank
