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

#ifndef ADVRANK_ATTACK_PERTURBATION_HPP
#define ADVRANK_ATTACK_PERTURBATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "advrank/attack/spec.hpp"
#include "advrank/core/tensor.hpp"
#include "advrank/corpus/corpus.hpp"
#include "advrank/ranker/encode.hpp"

namespace advrank {

// Adversarial tokens and the encoded positions they occupy. In add mode the
// positions are slots of the perturbed sequence (original tokens fill the
// remaining slots in order); in replace mode they are overwritten in place.
struct Perturbation {
  std::vector<std::size_t> positions;  // strictly increasing
  TokenSequence tokens;

  bool operator==(const Perturbation&) const = default;
};

// d ⊙ x. `span` is the document region of the unperturbed encoding; every
// position must lie inside it. The input document is not modified; tokens
// pushed past max_len by an insertion are dropped only when encoding.
Document apply_perturbation(const Document& document, const Perturbation& perturbation, Mode mode,
                            const DocSpan& span);

// Picks `count` document slots of `encoded`:
//   start / end  first / last slots of the (truncated) document region
//   middle       consecutive slots centered at half the region length
//   random       distinct uniform slots drawn with `seed`
//   max_grad / min_grad  slots with the largest / smallest L2 norm of the
//                per-position embedding gradient (ties: lower position)
// Result is sorted ascending.
std::vector<std::size_t> select_positions(PositionStrategy strategy, const EncodedPair& encoded,
                                          const MatrixF* input_grads, std::size_t count,
                                          std::uint64_t seed);

}  // namespace advrank

#endif  // ADVRANK_ATTACK_PERTURBATION_HPP
