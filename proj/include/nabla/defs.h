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

#ifndef NABLA_DEFS_H_
#define NABLA_DEFS_H_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nabla/formula.h"
#include "nabla/term.h"

namespace nabla {

/// Base type names with fixed meaning.
namespace types {
inline const std::string kProp = "o";       // reasoning-logic formulas
inline const std::string kAtom = "form";    // specification atoms
inline const std::string kGoal = "goal";    // specification goals
inline const std::string kList = "olist";   // contexts of atoms
inline const std::string kNat = "nt";       // derivation heights
}  // namespace types

/// Constants and predicates provided by the system.
namespace names {
inline const std::string kNil = "nil";
inline const std::string kCons = "::";
inline const std::string kZero = "z";
inline const std::string kSucc = "s";
inline const std::string kMember = "member";
inline const std::string kNat = "nat";
inline const std::string kSeq = "seq";
inline const std::string kProg = "prog";
inline const std::string kName = "name";
inline const std::string kSpecTrue = "spec_true";
inline const std::string kSpecAnd = "spec_and";
inline const std::string kSpecImp = "spec_imp";
inline const std::string kAtm = "atm";
}  // namespace names

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declared kinds and constants (the set K) plus the nominal types.
class Signature {
 public:
  void add_kind(const std::string& name);
  void add_const(const std::string& name, const Ty& ty);
  bool has_kind(const std::string& name) const { return kinds_.contains(name); }
  bool has_const(const std::string& name) const { return consts_.contains(name); }
  const Ty& const_type(const std::string& name) const;
  Term constant(const std::string& name) const;
  const std::vector<std::string>& kinds() const { return kind_order_; }
  const std::map<std::string, Ty>& constants() const { return consts_; }

  /// Types at which nominal constants and nabla are permitted.
  bool nominal_type(const Ty& ty) const;

  /// Checks that every base type in `ty` is declared.
  void check_type(const Ty& ty) const;

 private:
  std::set<std::string> kinds_;
  std::vector<std::string> kind_order_;
  std::map<std::string, Ty> consts_;
};

enum class Flavor { kPlain, kInductive, kCoinductive };

/// ∀x̄. (∇z̄. p t̄) ≜ B. Variables occur as local atoms.
struct DefClause {
  std::vector<std::pair<std::string, Ty>> forall_vars;
  std::vector<std::pair<std::string, Ty>> nabla_vars;
  Term head;
  Formula body;
};

struct Definition {
  std::string pred;
  Ty ty;
  Flavor flavor = Flavor::kInductive;
  int block = 0;  // predicates of one Define command share a block
  std::vector<DefClause> clauses;
};

/// Result of instantiating a clause: head and body instances.
struct ClauseInstance {
  Term head;
  Formula body;
};

/// σ maps clause variables (by name) to terms. Throws std::invalid_argument
/// when the provisos on ∇-variables fail.
ClauseInstance instantiate_clause(const DefClause& c, const std::map<std::string, Term>& sigma);

struct StratificationReport {
  bool ok = true;
  std::string pred;      // offending predicate
  int clause_index = -1; // offending clause
  std::string message;
  std::map<std::string, int> levels;
};

/// All definitions in scope, in declaration order.
class ClauseSet {
 public:
  void add(Definition def);
  bool defines(const std::string& pred) const { return defs_.contains(pred); }
  const Definition* find(const std::string& pred) const;
  const Definition& get(const std::string& pred) const;
  const std::vector<std::string>& order() const { return order_; }
  int next_block() { return ++block_counter_; }

  /// Finds a level assignment with lvl(B) <= lvl(p) for each clause of p,
  /// where implication antecedents count one level higher.
  StratificationReport check_stratified() const;

 private:
  std::map<std::string, Definition> defs_;
  std::vector<std::string> order_;
  int block_counter_ = 0;
};

/// lvl(f) under `levels`; surface judgments count as the `seq` predicate.
/// Throws std::out_of_range on an unassigned predicate.
int formula_level(const Formula& f, const std::map<std::string, int>& levels);

/// Head predicate name of an atom term.
std::string pred_of(const Term& atom);

}  // namespace nabla

#endif  // NABLA_DEFS_H_
