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

#include "advrank/attack/perturbation.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "advrank/common/errors.hpp"
#include "advrank/corpus/vocabulary.hpp"

namespace advrank {

Document apply_perturbation(const Document& document, const Perturbation& perturbation, Mode mode,
                            const DocSpan& span) {
  const auto& pos = perturbation.positions;
  const auto& x = perturbation.tokens;
  if (pos.size() != x.size()) {
    throw ValidationError("perturbation: " + std::to_string(pos.size()) + " positions but " +
                          std::to_string(x.size()) + " tokens");
  }
  for (std::size_t j = 0; j < pos.size(); ++j) {
    if (!span.contains(pos[j])) {
      throw ValidationError("perturbation: position " + std::to_string(pos[j]) +
                            " outside document region [" + std::to_string(span.start) + ", " +
                            std::to_string(span.end) + ")");
    }
    if (j > 0 && pos[j] <= pos[j - 1]) {
      throw ValidationError("perturbation: positions must be strictly increasing");
    }
    if (Vocabulary::is_special(x[j]) && x[j] != Vocabulary::kMask) {
      throw ValidationError("perturbation: special token id " + std::to_string(x[j]) +
                            " cannot be inserted");
    }
  }
  Document out;
  out.id = document.id;
  if (mode == Mode::kReplace) {
    out.tokens = document.tokens;
    for (std::size_t j = 0; j < pos.size(); ++j) {
      const std::size_t off = pos[j] - span.start;
      if (off >= out.tokens.size()) {
        throw ValidationError("perturbation: position beyond the document");
      }
      out.tokens[off] = x[j];
    }
    return out;
  }
  const std::size_t n = document.tokens.size() + x.size();
  out.tokens.reserve(n);
  std::size_t next_x = 0, next_orig = 0;
  for (std::size_t off = 0; off < n; ++off) {
    if (next_x < pos.size() && pos[next_x] - span.start == off) {
      out.tokens.push_back(x[next_x++]);
    } else {
      out.tokens.push_back(document.tokens[next_orig++]);
    }
  }
  return out;
}

std::vector<std::size_t> select_positions(PositionStrategy strategy, const EncodedPair& encoded,
                                          const MatrixF* input_grads, std::size_t count,
                                          std::uint64_t seed) {
  const DocSpan& span = encoded.doc;
  const std::size_t n = span.size();
  if (count > n) {
    throw ValidationError("select_positions: document region of " + std::to_string(n) +
                          " slots is shorter than " + std::to_string(count));
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  switch (strategy) {
    case PositionStrategy::kStart:
      for (std::size_t j = 0; j < count; ++j) out.push_back(span.start + j);
      break;
    case PositionStrategy::kEnd:
      for (std::size_t j = 0; j < count; ++j) out.push_back(span.end - count + j);
      break;
    case PositionStrategy::kMiddle: {
      const std::size_t center = n / 2;
      std::size_t first = center >= count / 2 ? center - count / 2 : 0;
      first = std::min(first, n - count);
      for (std::size_t j = 0; j < count; ++j) out.push_back(span.start + first + j);
      break;
    }
    case PositionStrategy::kRandom: {
      std::vector<std::size_t> slots(n);
      std::iota(slots.begin(), slots.end(), span.start);
      std::mt19937_64 rng(seed);
      for (std::size_t j = 0; j < count; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, n - 1);
        std::swap(slots[j], slots[pick(rng)]);
      }
      out.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(count));
      break;
    }
    case PositionStrategy::kMaxGrad:
    case PositionStrategy::kMinGrad: {
      if (input_grads == nullptr) {
        throw UsageError("select_positions: gradient strategies need input gradients");
      }
      if (input_grads->rows() < static_cast<Eigen::Index>(span.end)) {
        throw ShapeError("select_positions: gradient matrix " + shape_string(*input_grads) +
                         " does not cover the document region");
      }
      std::vector<std::pair<double, std::size_t>> norms;
      for (std::size_t p = span.start; p < span.end; ++p) {
        norms.emplace_back(input_grads->row(static_cast<Eigen::Index>(p)).template cast<double>().norm(), p);
      }
      const bool want_max = strategy == PositionStrategy::kMaxGrad;
      std::stable_sort(norms.begin(), norms.end(), [want_max](const auto& a, const auto& b) {
        return want_max ? a.first > b.first : a.first < b.first;
      });
      for (std::size_t j = 0; j < count; ++j) out.push_back(norms[j].second);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace advrank
