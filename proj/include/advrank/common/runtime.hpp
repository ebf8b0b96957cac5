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

#ifndef ADVRANK_COMMON_RUNTIME_HPP
#define ADVRANK_COMMON_RUNTIME_HPP

namespace advrank {

// Keeps freed activation buffers in the heap instead of returning them to
// the OS after every forward pass. Call once at program start.
void tune_allocator();

}  // namespace advrank

#endif  // ADVRANK_COMMON_RUNTIME_HPP
