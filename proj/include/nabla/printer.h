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

#ifndef NABLA_PRINTER_H_
#define NABLA_PRINTER_H_

#include <string>
#include <vector>

#include "nabla/formula.h"
#include "nabla/term.h"

namespace nabla {

/// Concrete syntax accepted by the parser.
std::string show(const Term& t);
std::string show(const Formula& f);
std::string show(const Ty& ty);

/// Splits a context `e1 :: e2 :: ... :: tail` into its tail (invalid term for
/// nil) and the elements in display order (innermost first).
void split_context(const Term& ctx, Term& tail, std::vector<Term>& elems);

}  // namespace nabla

#endif  // NABLA_PRINTER_H_
