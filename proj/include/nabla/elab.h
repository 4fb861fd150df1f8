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

#ifndef NABLA_ELAB_H_
#define NABLA_ELAB_H_

#include <map>
#include <optional>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

#include "nabla/defs.h"
#include "nabla/formula.h"
#include "nabla/syntax.h"

namespace nabla {

/// Names visible while elaborating: eigenvariables and nominal constants of
/// the focused sequent on top of the signature.
struct ElabScope {
  const Signature* sig = nullptr;
  std::vector<Term> eigen;
  std::vector<Term> nominals;
  /// Capitalized unknown names become clause variables (local atoms).
  bool implicit_vars = false;
  /// Unknown names of the form n<digits> become nominal constants.
  bool new_nominals = true;
};

/// Two-phase elaboration of untyped syntax: `add` collects typing
/// constraints, `solve` infers simple types, and the build functions produce
/// normalized terms and formulas.
class Elaborator {
 public:
  enum class Sort { kFormula, kTerm, kGoal };

  explicit Elaborator(ElabScope scope);

  /// Binds `name` as a formula-level variable for subsequent expressions.
  void push_local(const std::string& name, std::optional<Ty> ty = std::nullopt);
  Ty local_type(const std::string& name);

  void add(const Expr& e, Sort sort, std::optional<Ty> expected = std::nullopt);
  void solve();

  Formula formula(const Expr& e);
  Term term(const Expr& e);
  /// Specification goal as a term of type `goal`.
  Term goal(const Expr& e);
  /// Type inferred for a term expression.
  Ty type_of(const Expr& e);

  /// Clause variables introduced implicitly, in order of appearance.
  std::vector<std::pair<std::string, Ty>> implicit_vars() const;
  /// Nominal constants mentioned but not in scope.
  std::map<std::string, Ty> new_nominals() const;

 private:
  struct TNode {
    int kind = 0;  // 0 variable, 1 base, 2 arrow
    std::string base;
    int a = -1, b = -1;
    int link = -1;
  };
  enum class Res { kBound, kLocal, kImplicit, kEigen, kNominal, kConst, kName };
  struct Ident {
    Res res;
    int ty;
  };

  int fresh();
  int base(const std::string& name);
  int arrow(int a, int b);
  int from_ty(const Ty& t);
  int find(int i);
  bool occurs(int v, int t);
  void unify(int a, int b, Loc loc);
  Ty resolve(int i, Loc loc);
  std::string show(int i);

  void infer_formula(const Expr& e);
  int infer_term(const Expr& e);
  void infer_goal(const Expr& e);
  Ident& lookup(const Expr& e);

  Term build_term(const Expr& e);
  Formula build_formula(const Expr& e);
  Term build_goal(const Expr& e);
  bool is_pi(const Expr& e) const;

  ElabScope scope_;
  std::vector<TNode> nodes_;
  std::map<const Expr*, int> term_ty_;
  std::map<const Expr*, Ident> idents_;
  std::map<std::pair<const Expr*, std::size_t>, int> var_ty_;
  std::map<const Expr*, bool> ctx_first_is_tail_;
  std::vector<std::pair<int, std::string>> defaults_;
  std::vector<std::pair<std::string, int>> implicit_;
  std::map<std::string, int> new_nominals_;
  std::vector<std::pair<std::string, int>> lam_stack_;
  std::vector<std::pair<std::string, int>> local_stack_;
  std::vector<std::string> build_lams_;
  std::vector<std::string> build_locals_;
  std::vector<const Expr*> nabla_binders_;
  std::map<std::string, int> pushed_locals_;
};

/// Convenience wrappers over Elaborator for a single expression.
Formula elaborate_formula(const Expr& e, const ElabScope& scope);
Term elaborate_term(const Expr& e, const ElabScope& scope, std::optional<Ty> expected = {});

/// Elaborates the text of a Define block after the keyword:
/// `p : ty, q : ty by clause ; clause`, where a clause is
/// `[nabla z̄,] head [:= body]`. Declares the predicates in `sig`.
std::vector<Definition> elaborate_define(std::string_view text, Loc loc, Signature& sig,
                                         Flavor flavor, int block);

/// Maps the surface type name `prop` to the formula type.
Ty surface_type(const Ty& ty);

/// Constant for the specification universal quantifier at type `ty`.
Term spec_pi(const Ty& ty);
/// Recognizes a `pi_<ty>` constant name.
bool is_spec_pi(const Term& t);

}  // namespace nabla

#endif  // NABLA_ELAB_H_
