// Copyright 2026 The Nabla Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NABLA_SEARCH_H_
#define NABLA_SEARCH_H_

#include "nabla/kernel.h"

namespace nabla {

inline constexpr int kDefaultSearchDepth = 5;

/// Bounded proof search by iterative deepening. `depth` bounds the number of
/// unfoldings along any branch. Right rules are applied eagerly; ∃ uses
/// unification variables.
bool search(const Env& env, const Sequent& s, int depth = kDefaultSearchDepth);

}  // namespace nabla

#endif  // NABLA_SEARCH_H_
