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

#include "nabla/formula.h"

#include <algorithm>
#include <atomic>

#include <fmt/format.h>

namespace nabla {

std::string Annotation::str() const {
  char c = 0;
  switch (mark) {
    case Mark::kNone: return "";
    case Mark::kStar: c = '*'; break;
    case Mark::kAt: c = '@'; break;
    case Mark::kPlus: c = '+'; break;
    case Mark::kHash: c = '#'; break;
  }
  return std::string(static_cast<std::size_t>(std::max(level, 1)), c);
}

Formula Formula::top() {
  static const Formula f(std::make_shared<const Node>(Node{Kind::kTrue}));
  return f;
}

Formula Formula::bottom() {
  static const Formula f(std::make_shared<const Node>(Node{Kind::kFalse}));
  return f;
}

Formula Formula::atom(Term t, Annotation ann) {
  Node n{Kind::kAtom};
  n.a = std::move(t);
  n.ann = ann;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::obj(Term context, Term goal, Annotation ann) {
  Node n{Kind::kObj};
  n.a = std::move(goal);
  n.b = std::move(context);
  n.ann = ann;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::eq(Term lhs, Term rhs) {
  Node n{Kind::kEq};
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conj(Formula a, Formula b) { return binary(Kind::kAnd, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Kind::kOr, std::move(a), std::move(b)); }
Formula Formula::imp(Formula a, Formula b) { return binary(Kind::kImp, std::move(a), std::move(b)); }

Formula Formula::binary(Kind k, Formula a, Formula b) {
  Node n{k};
  n.kids = {std::move(a), std::move(b)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::binder(Kind q, std::string name, Ty ty, Formula body) {
  Node n{q};
  n.name = std::move(name);
  n.ty = std::move(ty);
  n.kids.push_back(std::move(body));
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::with_ann(Annotation ann) const {
  Node n = *node_;
  n.ann = ann;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::instantiate(const Term& t) const {
  return replace_local(body(), var_name(), t);
}

Formula Formula::map_terms(
    const std::function<Term(const Term&, const std::set<std::string>&)>& fn) const {
  std::set<std::string> bound;
  std::function<Formula(const Formula&)> go = [&](const Formula& f) -> Formula {
    switch (f.kind()) {
      case Kind::kTrue:
      case Kind::kFalse:
        return f;
      case Kind::kAtom:
        return Formula::atom(fn(f.term(), bound), f.ann());
      case Kind::kObj:
        return Formula::obj(fn(f.term2(), bound), fn(f.term(), bound), f.ann());
      case Kind::kEq:
        return Formula::eq(fn(f.term(), bound), fn(f.term2(), bound));
      case Kind::kAnd:
        return Formula::conj(go(f.left()), go(f.right()));
      case Kind::kOr:
        return Formula::disj(go(f.left()), go(f.right()));
      case Kind::kImp:
        return Formula::imp(go(f.left()), go(f.right()));
      case Kind::kForall:
      case Kind::kExists:
      case Kind::kNabla: {
        bool fresh = bound.insert(f.var_name()).second;
        Formula b = go(f.body());
        if (fresh) bound.erase(f.var_name());
        return Formula::binder(f.kind(), f.var_name(), f.var_ty(), b);
      }
    }
    return f;
  };
  return go(*this);
}

void Formula::visit_terms(const std::function<void(const Term&)>& fn) const {
  switch (kind()) {
    case Kind::kTrue:
    case Kind::kFalse:
      return;
    case Kind::kAtom:
      fn(term());
      return;
    case Kind::kObj:
      fn(term2());
      fn(term());
      return;
    case Kind::kEq:
      fn(term());
      fn(term2());
      return;
    case Kind::kAnd:
    case Kind::kOr:
    case Kind::kImp:
      left().visit_terms(fn);
      right().visit_terms(fn);
      return;
    default:
      body().visit_terms(fn);
  }
}

bool alpha_equal(const Formula& a, const Formula& b, bool compare_annotations) {
  using K = Formula::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::kTrue:
    case K::kFalse:
      return true;
    case K::kAtom:
      return a.term() == b.term() && (!compare_annotations || a.ann() == b.ann());
    case K::kObj:
      return a.term() == b.term() && a.term2() == b.term2() &&
             (!compare_annotations || a.ann() == b.ann());
    case K::kEq:
      return a.term() == b.term() && a.term2() == b.term2();
    case K::kAnd:
    case K::kOr:
    case K::kImp:
      return alpha_equal(a.left(), b.left(), compare_annotations) &&
             alpha_equal(a.right(), b.right(), compare_annotations);
    default: {
      if (!(a.var_ty() == b.var_ty())) return false;
      if (a.var_name() == b.var_name())
        return alpha_equal(a.body(), b.body(), compare_annotations);
      static std::atomic<int> counter{0};
      Term fresh = Term::var(fmt::format("%a{}", ++counter), Tag::kLocal, a.var_ty());
      return alpha_equal(a.instantiate(fresh), b.instantiate(fresh), compare_annotations);
    }
  }
}

Formula apply_subst(const Formula& f, const Subst& theta) {
  if (theta.empty()) return f;
  return f.map_terms([&](const Term& t, const std::set<std::string>&) {
    return apply_subst(t, theta);
  });
}

Formula permute(const Permutation& pi, const Formula& f) {
  if (pi.empty()) return f;
  return f.map_terms([&](const Term& t, const std::set<std::string>&) { return permute(pi, t); });
}

Formula replace_local(const Formula& f, const std::string& name, const Term& t) {
  return f.map_terms([&](const Term& u, const std::set<std::string>& bound) {
    if (bound.contains(name)) return u;
    return replace_atoms(u, Tag::kLocal, {{name, t}});
  });
}

Formula replace_nominals(const Formula& f, const std::map<std::string, Term>& by_name) {
  if (by_name.empty()) return f;
  return f.map_terms([&](const Term& u, const std::set<std::string>&) {
    return replace_atoms(u, Tag::kNominal, by_name);
  });
}

std::vector<Term> atoms_of(const Formula& f, Tag tag) {
  std::vector<Term> out;
  f.visit_terms([&](const Term& t) { collect_atoms(t, tag, out); });
  return out;
}

std::vector<Term> nominals_of(const Formula& f) { return atoms_of(f, Tag::kNominal); }

std::set<std::string> support(const Formula& f) {
  std::set<std::string> out;
  for (const Term& n : nominals_of(f)) out.insert(n.name());
  return out;
}

bool has_logic_vars(const Formula& f) { return !atoms_of(f, Tag::kLogic).empty(); }

namespace {

template <typename T, typename Eq, typename Perm>
bool equiv_by_bijection(const T& a, const T& b, const std::vector<Term>& na,
                        const std::vector<Term>& nb, Eq eq, Perm perm) {
  if (na.size() != nb.size()) return false;
  if (eq(a, b)) return true;
  // Maps each nominal of b to a distinct nominal of a with the same type.
  std::vector<int> choice(nb.size(), -1);
  std::vector<bool> used(na.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == nb.size()) {
      Permutation pi;
      for (std::size_t k = 0; k < nb.size(); ++k)
        pi[nb[k].name()] = na[static_cast<std::size_t>(choice[k])].name();
      return eq(a, perm(pi, b));
    }
    for (std::size_t j = 0; j < na.size(); ++j) {
      if (used[j] || !(na[j].ty() == nb[i].ty())) continue;
      used[j] = true;
      choice[i] = static_cast<int>(j);
      if (go(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return go(0);
}

}  // namespace

bool form_equiv(const Formula& a, const Formula& b) {
  return equiv_by_bijection(
      a, b, nominals_of(a), nominals_of(b),
      [](const Formula& x, const Formula& y) { return alpha_equal(x, y, false); },
      [](const Permutation& pi, const Formula& f) { return permute(pi, f); });
}

bool form_equiv(const Term& a, const Term& b) {
  return equiv_by_bijection(
      a, b, atoms_of(a, Tag::kNominal), atoms_of(b, Tag::kNominal),
      [](const Term& x, const Term& y) { return x == y; },
      [](const Permutation& pi, const Term& t) { return permute(pi, t); });
}

Term fresh_nominal(const Ty& ty, const std::set<std::string>& avoid) {
  for (int k = 1;; ++k) {
    std::string name = fmt::format("n{}", k);
    if (!avoid.contains(name)) return Term::var(name, Tag::kNominal, ty);
  }
}

Formula nominal_subst_apply(const Formula& f, const Subst& theta,
                            const std::set<std::string>& avoid_extra) {
  std::set<std::string> range_noms;
  for (const auto& [name, value] : theta)
    for (const std::string& n : support(value)) range_noms.insert(n);
  std::set<std::string> avoid = range_noms;
  avoid.insert(avoid_extra.begin(), avoid_extra.end());
  std::vector<Term> noms = nominals_of(f);
  for (const Term& n : noms) avoid.insert(n.name());
  Permutation pi;
  for (const Term& n : noms) {
    if (!range_noms.contains(n.name())) continue;
    Term fresh = fresh_nominal(n.ty(), avoid);
    avoid.insert(fresh.name());
    pi[n.name()] = fresh.name();
    pi[fresh.name()] = n.name();
  }
  return apply_subst(permute(pi, f), theta);
}

void unify_formulas(Unifier& u, VarSupply& supply, const Formula& a, const Formula& b) {
  using K = Formula::Kind;
  if (a.kind() != b.kind()) throw UnifyFailure("formula shapes differ");
  switch (a.kind()) {
    case K::kTrue:
    case K::kFalse:
      return;
    case K::kAtom:
      u.unify(a.term(), b.term());
      return;
    case K::kObj:
    case K::kEq:
      u.unify(a.term2(), b.term2());
      u.unify(a.term(), b.term());
      return;
    case K::kAnd:
    case K::kOr:
    case K::kImp:
      unify_formulas(u, supply, a.left(), b.left());
      unify_formulas(u, supply, a.right(), b.right());
      return;
    default: {
      if (!(a.var_ty() == b.var_ty())) throw UnifyFailure("binder types differ");
      std::string name = supply.fresh_name("%" + a.var_name());
      Term fresh = Term::var(name, Tag::kLocal, a.var_ty());
      unify_formulas(u, supply, a.instantiate(fresh), b.instantiate(fresh));
    }
  }
}

}  // namespace nabla
