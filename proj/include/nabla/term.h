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

#ifndef NABLA_TERM_H_
#define NABLA_TERM_H_

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nabla {

/// Simple types: a base type, or an arrow. Stored in the uncurried form
/// `args[0] -> ... -> args[n-1] -> head` so that the target is always a base.
class Ty {
 public:
  Ty() = default;

  static Ty base(std::string name);
  static Ty arrow(const Ty& from, const Ty& to);
  static Ty arrows(std::span<const Ty> from, const Ty& to);

  bool valid() const { return rep_ != nullptr; }
  const std::string& head() const { return rep_->head; }
  const std::vector<Ty>& args() const { return rep_->args; }
  bool is_base() const { return rep_->args.empty(); }
  std::size_t arity() const { return rep_->args.size(); }

  /// The type left after supplying `n` arguments.
  Ty drop(std::size_t n) const;

  /// True if the base type `name` occurs anywhere in this type.
  bool mentions(std::string_view name) const;

  std::string str() const;

  friend bool operator==(const Ty& a, const Ty& b);
  friend bool operator<(const Ty& a, const Ty& b) { return a.str() < b.str(); }

 private:
  struct Rep {
    std::string head;
    std::vector<Ty> args;
  };
  explicit Ty(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

/// The type of reasoning-logic formulas.
inline constexpr std::string_view kPropType = "o";

/// Namespace a variable atom lives in.
enum class Tag : std::uint8_t {
  kConstant,  // declared constant (K)
  kEigen,     // eigenvariable of a sequent signature
  kNominal,   // nominal constant (C)
  kLogic,     // unification variable introduced by apply/search
  kLocal,     // variable bound by a formula quantifier
};

std::string_view tag_name(Tag tag);

/// A simply typed lambda term. Bound variables are de Bruijn indices
/// (0 = innermost binder); everything else is a named atom.
class Term {
 public:
  enum class Kind : std::uint8_t { kVar, kBound, kApp, kLam };

  Term() = default;

  static Term var(std::string name, Tag tag, Ty ty, std::uint32_t ts = 0);
  static Term bound(int index);
  /// Flattens nested applications; returns `head` for empty `args`.
  static Term app(Term head, std::vector<Term> args);
  /// Merges nested abstractions; returns `body` for empty `binders`.
  static Term lam(std::vector<Ty> binders, Term body,
                  std::vector<std::string> hints = {});

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  bool is_var() const { return kind() == Kind::kVar; }
  bool is_var(Tag tag) const { return is_var() && node_->tag == tag; }
  bool is_bound() const { return kind() == Kind::kBound; }
  bool is_app() const { return kind() == Kind::kApp; }
  bool is_lam() const { return kind() == Kind::kLam; }

  const std::string& name() const { return node_->name; }
  Tag tag() const { return node_->tag; }
  const Ty& ty() const { return node_->ty; }
  std::uint32_t ts() const { return node_->ts; }
  int index() const { return node_->index; }
  const Term& fn() const { return node_->children.front(); }
  std::span<const Term> args() const {
    return std::span<const Term>(node_->children).subspan(1);
  }
  const std::vector<Ty>& binders() const { return node_->binders; }
  const std::vector<std::string>& hints() const { return node_->hints; }
  const Term& body() const { return node_->children.front(); }

  /// Head of an application spine (the term itself if not an application).
  const Term& spine_head() const { return is_app() ? fn() : *this; }
  std::span<const Term> spine_args() const {
    return is_app() ? args() : std::span<const Term>();
  }

  /// Structural equality: alpha-equivalence, since binders are nameless.
  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node {
    Kind kind;
    Tag tag = Tag::kConstant;
    int index = 0;
    std::uint32_t ts = 0;
    std::string name;
    Ty ty;
    std::vector<Term> children;
    std::vector<Ty> binders;
    std::vector<std::string> hints;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mapping from eigen/logic variable names to terms.
using Subst = std::map<std::string, Term>;

/// Mapping between nominal constant names.
using Permutation = std::map<std::string, std::string>;

// --- de Bruijn plumbing ---------------------------------------------------

/// Shifts free bound indices >= `from` by `by`.
Term lift(const Term& t, int by, int from = 0);

/// Substitutes `value` for bound index `level`, decrementing higher indices.
Term subst_bound(const Term& t, int level, const Term& value);

/// True if bound index `index` (relative to the top of `t`) occurs free.
bool has_bound(const Term& t, int index);

// --- normalization --------------------------------------------------------

/// Beta-normal, eta-contracted form; canonical for beta-eta equality.
Term normalize(const Term& t);

/// Normalizes `head args` assuming both are already normal.
Term reduce_app(const Term& head, std::span<const Term> args);

/// Applies `theta` to eigen and logic variables and renormalizes.
Term apply_subst(const Term& t, const Subst& theta);

/// Replaces atoms of the given tag according to `by_name`, renormalizing.
Term replace_atoms(const Term& t, Tag tag, const std::map<std::string, Term>& by_name);

/// theta1 followed by theta2 (idempotent when both are).
Subst compose(const Subst& theta1, const Subst& theta2);

// --- atoms and support ----------------------------------------------------

/// Distinct variable atoms of `tag` in order of first occurrence.
std::vector<Term> atoms_of(const Term& t, Tag tag);
void collect_atoms(const Term& t, Tag tag, std::vector<Term>& out);

/// Nominal constants occurring in `t`.
std::set<std::string> support(const Term& t);

bool occurs_atom(const Term& t, Tag tag, std::string_view name);

/// Applies a nominal permutation.
Term permute(const Permutation& pi, const Term& t);
Permutation inverse(const Permutation& pi);

// --- typing ---------------------------------------------------------------

/// Type of a closed (no dangling de Bruijn indices) term; throws TypeError.
Ty type_of(const Term& t);

/// True if `t` has no dangling bound indices.
bool is_closed(const Term& t);

}  // namespace nabla

#endif  // NABLA_TERM_H_
