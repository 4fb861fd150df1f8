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

#ifndef NABLA_DRIVER_H_
#define NABLA_DRIVER_H_

#include <iosfwd>
#include <string>

#include "nabla/session.h"

namespace nabla {

inline constexpr int kExitOk = 0;
inline constexpr int kExitProofFailure = 1;
inline constexpr int kExitUsage = 2;

/// Replays a script, echoing each command after its prompt followed by the
/// reply. Stops at the first error, which goes to `err` as
/// `label:line:col: message`. Returns an exit code.
int replay(Session& session, const std::string& text, const std::string& label, std::ostream& out,
           std::ostream& err);

/// Interactive loop: commands may span lines and end with a period; errors
/// are printed and the loop continues. `quit.` or end of input stops it.
/// Returns nonzero in strict mode when a theorem is left open.
int repl(Session& session, std::istream& in, std::ostream& out, bool strict);

/// One line per theorem: name, status and tactic count separated by tabs.
std::string summary(const Session& session);

}  // namespace nabla

#endif  // NABLA_DRIVER_H_
