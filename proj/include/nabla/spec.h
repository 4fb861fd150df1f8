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

#ifndef NABLA_SPEC_H_
#define NABLA_SPEC_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nabla/defs.h"
#include "nabla/formula.h"
#include "nabla/syntax.h"
#include "nabla/term.h"

namespace nabla {

/// ∀x̄. G ⊃ A with G a conjunction of goals (spec_true when empty).
struct SpecClause {
  std::vector<std::pair<std::string, Ty>> vars;  // occur as local atoms
  Term head;                                     // type form
  Term body;                                     // type goal
  Loc loc;
};

/// Kinds and constants shared by every environment: o, form, goal, olist,
/// nt and the constructors of Fig. 8 style encodings.
Signature base_signature();

class SpecProgram {
 public:
  SpecProgram() : sig_(base_signature()) {}

  /// `kind a, b type.` and `type c, d TY.` declarations; `o` means `form`.
  void load_sig(std::string_view text);
  /// `HEAD :- G1, ..., Gn.` clauses.
  void load_mod(std::string_view text);

  const Signature& sig() const { return sig_; }
  const std::vector<SpecClause>& clauses() const { return clauses_; }
  /// Types quantified by `pi` somewhere in the program, in order of first use.
  const std::vector<Ty>& pi_types() const { return pi_types_; }
  /// Object-level declarations in declaration order.
  const std::vector<std::string>& kinds() const { return kinds_; }
  const std::vector<std::string>& constants() const { return consts_; }

  void note_pi_type(const Ty& ty);

 private:
  Signature sig_;
  std::vector<SpecClause> clauses_;
  std::vector<Ty> pi_types_;
  std::vector<std::string> kinds_;
  std::vector<std::string> consts_;
};

/// Declares `member`, `nat`, `prog` and `seq` in `sig` and adds their
/// definitions to `defs`; `seq` gets one ∇ clause per pi type of `p`.
void install_builtins(const SpecProgram& p, Signature& sig, ClauseSet& defs);

/// {L |- A} as ∃n. nat n ∧ seq n L (atm A); the annotation is dropped.
Formula encode_surface(const Formula& obj);
/// Inverse of encode_surface.
std::optional<Formula> decode_surface(const Formula& f);

/// Result of the direct hH² interpreter.
struct HH2Result {
  bool derivable = false;
  int height = 0;                   // minimal derivation height when derivable
  bool bound_hit = false;           // a branch was cut by the height bound
  std::vector<std::string> rules;   // rules of the derivation, preorder
};

/// Goal-directed search for Σ : Δ, L ⊢ G with derivation height ≤ bound.
/// Throws OutsideFragment when backchaining leaves the pattern fragment.
HH2Result hh2_prove(const SpecProgram& p, const Term& context, const Term& goal, int bound);

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The judgment with context K, or a side condition
/// `forall X, member X L -> member X K` when inclusion is not syntactic.
struct MonotoneResult {
  Formula judgment;
  std::optional<Formula> side;
};
MonotoneResult spec_monotone(const Formula& h, const Term& k);

/// Replaces nominal `v` by `t` in a judgment.
Formula spec_inst(const Formula& h, const Term& v, const Term& t);

/// From {L, A |- B} and {L |- A} derive {L |- B}.
Formula spec_cut(const Formula& h1, const Formula& h2);

}  // namespace nabla

#endif  // NABLA_SPEC_H_
