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

#ifndef ADVRANK_RANKER_CHECKPOINT_HPP
#define ADVRANK_RANKER_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "advrank/ranker/model.hpp"

namespace advrank {

inline constexpr char kCheckpointMagic[4] = {'R', 'K', 'R', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout: magic "RKR1", u32 version, u64 metadata length, JSON metadata
// (config, vocabulary size and hash, tensor manifest), then every tensor as
// row-major little-endian float32 in manifest order. All integers are
// little-endian.
void write_model(const RankerModelF& model, std::ostream& out);
RankerModelF read_model(std::istream& in);

void save_model(const RankerModelF& model, const std::filesystem::path& path);
RankerModelF load_model(const std::filesystem::path& path);

}  // namespace advrank

#endif  // ADVRANK_RANKER_CHECKPOINT_HPP
