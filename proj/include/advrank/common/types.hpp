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

#ifndef ADVRANK_COMMON_TYPES_HPP
#define ADVRANK_COMMON_TYPES_HPP

#include <cstdint>
#include <vector>

namespace advrank {

using TokenId = std::int32_t;
using TokenSequence = std::vector<TokenId>;

}  // namespace advrank

#endif  // ADVRANK_COMMON_TYPES_HPP
