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

#ifndef NABLA_KERNEL_H_
#define NABLA_KERNEL_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nabla/defs.h"
#include "nabla/formula.h"
#include "nabla/term.h"
#include "nabla/unify.h"

namespace nabla {

struct Hyp {
  std::string name;
  Formula f;
};

/// Σ : Γ ⟶ C together with the induction hypotheses in scope.
struct Sequent {
  std::vector<Term> vars;  // eigenvariables
  std::vector<Hyp> hyps;
  Formula goal;
  std::vector<Hyp> ihs;
  int next_hyp = 1;
  std::uint32_t clock = 0;  // timestamp source for new variables

  const Hyp* hyp(std::string_view name) const;
  const Hyp* ih(std::string_view name) const;
  /// Adds a hypothesis (named H<k> unless given) and returns its name.
  std::string add(Formula f, std::string name = {});
  void remove(std::string_view name);
  /// Nominal constants anywhere in the sequent.
  std::set<std::string> support() const;
};

/// Global tables a kernel step may consult.
struct Env {
  const Signature* sig = nullptr;
  const ClauseSet* defs = nullptr;
};

class TacticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Name supply that avoids constants and every variable of `s`.
VarSupply make_supply(const Env& env, const Sequent& s);

/// Applies θ to every formula of the sequent and recomputes Σ.
Sequent subst_sequent(const Sequent& s, const Subst& theta);
/// Recomputes Σ from the variables occurring in the sequent.
void refresh_vars(Sequent& s);

/// h' c̄ for a fresh h' of the raised type; h' keeps the timestamp of `h`.
Term raise(const Term& h, std::span<const Term> noms, VarSupply& supply);

/// One most general upper sequent of defL.
struct MatchResult {
  Subst theta;                     // on sequent and clause variables
  std::vector<Term> new_nominals;  // fresh nominals chosen for ∇ head variables
  Formula body;                    // body instance, θ applied
  VarSupply supply;                // names in use after the match
};

/// Unifies a hypothesis atom with a clause head. ∇ head variables range over
/// the nominals of `atom` and fresh nominals; in the fresh case every
/// eigenvariable of `s` is raised over the new nominals. Clause variables are
/// raised over the remaining support of `atom`.
std::vector<MatchResult> match_head(const Sequent& s, const Term& atom, const DefClause& c,
                                    VarSupply& supply, std::uint32_t& clock);

/// The clause set of `pred`, including the built-in `name` predicate at the
/// type of `atom`'s argument. Empty for undefined predicates.
std::optional<Definition> definition_for(const Env& env, const Term& atom);

/// Marks atoms of predicates in `block` with `ann`.
Formula mark_block(const Formula& f, const ClauseSet& defs, int block, Annotation ann);

/// A specification goal under context `ctx` as a formula over surface judgments.
Formula spec_goal_formula(const Env& env, const Term& ctx, const Term& goal, Annotation ann,
                          VarSupply& supply);

/// Adds `f` to the hypotheses, splitting ∧, dropping ⊤ and opening ∃ and ∇.
void add_decomposed(Sequent& s, const Formula& f, VarSupply& supply);

/// Case analysis on a hypothesis; an empty result closes the subgoal.
std::vector<Sequent> case_hyp(const Env& env, const Sequent& s, std::string_view name,
                              bool keep = false);

/// Repeated ∀R, ⊃R and ∇R. `names` optionally names the new hypotheses in order.
Sequent intros(const Env& env, const Sequent& s, const std::vector<std::string>& names = {});

/// defR with the first matching clause.
Sequent unfold(const Env& env, const Sequent& s);

/// Whether `hyp` proves `goal` by the identity rule.
bool closes(const Env& env, const Formula& hyp, const Formula& goal);
/// Identity, ⊤ on the right, ⊥ on the left or an equation with equal sides.
bool trivially_closed(const Env& env, const Sequent& s);

/// Instantiation for a universally quantified variable of an applied formula.
struct Witness {
  std::string var;
  Term value;
};

struct ApplyResult {
  Formula conclusion;
  std::vector<Formula> holes;  // premises given as `_`
};

/// Forward chaining: matches `args` (hypothesis names or "_") against the
/// premises of `target`.
ApplyResult apply_formula(const Env& env, const Sequent& s, const Formula& target,
                          const std::vector<std::string>& args,
                          const std::vector<Witness>& withs);

/// Strips the ∀/∇ prefix: kinds, names and types in order.
struct Binder {
  Formula::Kind kind;
  std::string name;
  Ty ty;
};
std::pair<std::vector<Binder>, Formula> strip_prefix(const Formula& f);

bool coinductive(const Env& env, const Formula& atom);

}  // namespace nabla

#endif  // NABLA_KERNEL_H_
