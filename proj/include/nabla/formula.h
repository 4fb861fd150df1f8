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

#ifndef NABLA_FORMULA_H_
#define NABLA_FORMULA_H_

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nabla/term.h"
#include "nabla/unify.h"

namespace nabla {

/// Size markers used by induction (`*`, `@`) and coinduction (`+`, `#`).
enum class Mark : std::uint8_t { kNone, kStar, kAt, kPlus, kHash };

struct Annotation {
  Mark mark = Mark::kNone;
  int level = 0;  // induction generation, 1-based when marked

  bool none() const { return mark == Mark::kNone; }
  std::string str() const;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Formulas of the reasoning logic. Quantifiers bind a named variable that
/// occurs in the body as a `Tag::kLocal` atom.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    kTrue, kFalse, kAtom, kObj, kEq, kAnd, kOr, kImp, kForall, kExists, kNabla
  };

  Formula() = default;

  static Formula top();
  static Formula bottom();
  static Formula atom(Term t, Annotation ann = {});
  /// Surface judgment {context |- goal}.
  static Formula obj(Term context, Term goal, Annotation ann = {});
  static Formula eq(Term lhs, Term rhs);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula binder(Kind q, std::string name, Ty ty, Formula body);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return kind() == k; }
  bool is_binder() const {
    return kind() == Kind::kForall || kind() == Kind::kExists || kind() == Kind::kNabla;
  }

  /// Atom term, surface goal, or equality lhs.
  const Term& term() const { return node_->a; }
  /// Surface context or equality rhs.
  const Term& term2() const { return node_->b; }
  const Formula& left() const { return node_->kids[0]; }
  const Formula& right() const { return node_->kids[1]; }
  const Formula& body() const { return node_->kids[0]; }
  const std::string& var_name() const { return node_->name; }
  const Ty& var_ty() const { return node_->ty; }
  const Annotation& ann() const { return node_->ann; }

  Formula with_ann(Annotation ann) const;

  /// Local atom standing for this binder's variable.
  Term bound_var() const { return Term::var(var_name(), Tag::kLocal, var_ty()); }

  /// Body with the bound variable replaced by `t`.
  Formula instantiate(const Term& t) const;

  /// Rebuilds with `fn` applied to every term; shadowing is respected by
  /// passing the set of locally bound names.
  Formula map_terms(const std::function<Term(const Term&, const std::set<std::string>&)>& fn) const;
  void visit_terms(const std::function<void(const Term&)>& fn) const;

 private:
  struct Node {
    Kind kind;
    Term a, b;
    std::vector<Formula> kids;
    std::string name;
    Ty ty;
    Annotation ann;
  };
  static Formula binary(Kind k, Formula a, Formula b);
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Alpha-equivalence, annotations included.
bool alpha_equal(const Formula& a, const Formula& b, bool compare_annotations = true);

Formula apply_subst(const Formula& f, const Subst& theta);
Formula permute(const Permutation& pi, const Formula& f);
Formula replace_local(const Formula& f, const std::string& name, const Term& t);
/// Replaces every nominal named in `by_name`.
Formula replace_nominals(const Formula& f, const std::map<std::string, Term>& by_name);

std::set<std::string> support(const Formula& f);
/// Nominal atoms in order of first occurrence.
std::vector<Term> nominals_of(const Formula& f);
std::vector<Term> atoms_of(const Formula& f, Tag tag);
bool has_logic_vars(const Formula& f);

/// B ≈ B': equal after some permutation of nominals (annotations ignored).
/// Brute force over bijections between the supports.
bool form_equiv(const Formula& a, const Formula& b);
bool form_equiv(const Term& a, const Term& b);

/// (π.B)[θ] with π moving supp(B) away from the nominals in range(θ).
Formula nominal_subst_apply(const Formula& f, const Subst& theta,
                            const std::set<std::string>& avoid_extra = {});

/// Fresh nominal `n<k>` with the smallest k not in `avoid`.
Term fresh_nominal(const Ty& ty, const std::set<std::string>& avoid);

/// Unifies two formulas structurally; binders are opened with a shared fresh
/// local atom. Annotations are not compared.
void unify_formulas(Unifier& u, VarSupply& supply, const Formula& a, const Formula& b);

}  // namespace nabla

#endif  // NABLA_FORMULA_H_
