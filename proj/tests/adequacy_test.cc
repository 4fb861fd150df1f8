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

// The specification interpreter and bounded search in the reasoning logic
// agree on generated typing goals.

#include <chrono>

#include <gtest/gtest.h>

#include "adequacy.h"
#include "nabla/printer.h"

namespace nabla {
namespace {

TEST(Adequacy, InterpreterAgreesWithReasoningLogicSearch) {
  auto start = std::chrono::steady_clock::now();
  AdequacyReport r = run_adequacy(NABLA_PROOFS_DIR, 120, 2026);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const std::string& m : r.mismatches) ADD_FAILURE() << m;
  EXPECT_GE(r.goals, 100);
  EXPECT_EQ(r.agree, r.goals);
  EXPECT_GT(r.derivable, r.goals / 4);
  EXPECT_GT(r.goals - r.derivable, r.goals / 4);
  EXPECT_LE(r.max_height, 6);
  EXPECT_LE(secs, 60.0);
}

}  // namespace
}  // namespace nabla
