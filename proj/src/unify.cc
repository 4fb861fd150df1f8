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

#include "nabla/unify.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

#include <fmt/format.h>

namespace nabla {

std::string name_base(const std::string& name) {
  std::size_t end = name.size();
  while (end > 1 && std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
  return name.substr(0, end);
}

std::string VarSupply::fresh_name(const std::string& base) {
  if (!used_.contains(base)) {
    used_.insert(base);
    return base;
  }
  for (int i = 1;; ++i) {
    std::string candidate = fmt::format("{}{}", base, i);
    if (!used_.contains(candidate)) {
      used_.insert(candidate);
      return candidate;
    }
  }
}

Term VarSupply::fresh(const std::string& base, Tag tag, const Ty& ty, std::uint32_t ts) {
  if (tag == Tag::kLogic) {
    std::string name;
    do {
      name = fmt::format("?{}", ++logic_counter_);
    } while (used_.contains(name));
    used_.insert(name);
    return Term::var(name, tag, ty, ts);
  }
  return Term::var(fresh_name(name_base(base)), tag, ty, ts);
}

namespace {

// Removes `m` outer binders from `t`, eta-expanding as needed.
Term peel(const Term& t, int m) {
  if (m == 0) return t;
  int j = t.is_lam() ? static_cast<int>(t.binders().size()) : 0;
  if (j >= m) {
    std::vector<Ty> rest(t.binders().begin() + m, t.binders().end());
    std::vector<std::string> hints(t.hints().begin() + m, t.hints().end());
    return Term::lam(std::move(rest), t.body(), std::move(hints));
  }
  Term body = j > 0 ? t.body() : t;
  int extra = m - j;
  body = lift(body, extra);
  std::vector<Term> args;
  for (int i = extra - 1; i >= 0; --i) args.push_back(Term::bound(i));
  return reduce_app(body, args);
}

bool is_atom_arg(const Term& a, std::size_t depth) {
  if (a.is_bound()) return a.index() < static_cast<int>(depth);
  return a.is_var(Tag::kNominal) || a.is_var(Tag::kLocal);
}

bool same_atom(const Term& a, const Term& b) {
  if (a.is_bound() && b.is_bound()) return a.index() == b.index();
  return a.is_var() && b.is_var() && a.tag() == b.tag() && a.name() == b.name();
}

Ty arg_type(const Term& a, const std::vector<Ty>& ctx) {
  if (a.is_bound()) return ctx[ctx.size() - 1 - static_cast<std::size_t>(a.index())];
  return a.ty();
}

}  // namespace

bool Unifier::flexible(const Term& v) const {
  if (!v.is_var()) return false;
  if (v.tag() == Tag::kLogic) return true;
  return v.tag() == Tag::kEigen && mode_ == UnifyMode::kEigen;
}

void Unifier::bind(const std::string& name, const Term& value) {
  Subst single{{name, value}};
  for (auto& [k, v] : subst_) v = apply_subst(v, single);
  subst_[name] = value;
}

Term Unifier::deref(const Term& t) const {
  const Term& h = t.spine_head();
  if (h.is_var() && flexible(h)) {
    auto it = subst_.find(h.name());
    if (it != subst_.end()) return reduce_app(it->second, t.spine_args());
  }
  return t;
}

bool Unifier::pattern_args(std::span<const Term> args, std::size_t depth) const {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!is_atom_arg(args[i], depth)) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (same_atom(args[i], args[j])) return false;
  }
  return true;
}

void Unifier::unify(const Term& a, const Term& b) {
  std::vector<Ty> ctx;
  unify_in(apply_subst(a, subst_), apply_subst(b, subst_), ctx);
}

void Unifier::unify_in(const Term& a0, const Term& b0, std::vector<Ty>& ctx) {
  Term a = deref(a0);
  Term b = deref(b0);
  if (a == b) return;
  if (a.is_lam() || b.is_lam()) {
    int na = a.is_lam() ? static_cast<int>(a.binders().size()) : 0;
    int nb = b.is_lam() ? static_cast<int>(b.binders().size()) : 0;
    int m = std::max(na, nb);
    const std::vector<Ty>& tys = na >= nb ? a.binders() : b.binders();
    for (int i = 0; i < m; ++i) ctx.push_back(tys[static_cast<std::size_t>(i)]);
    unify_in(peel(a, m), peel(b, m), ctx);
    ctx.resize(ctx.size() - static_cast<std::size_t>(m));
    return;
  }
  const Term& ha = a.spine_head();
  const Term& hb = b.spine_head();
  bool fa = flexible(ha);
  bool fb = flexible(hb);
  if (!fa && !fb) {
    if (!same_atom(ha, hb) || a.spine_args().size() != b.spine_args().size())
      throw UnifyFailure("clash");
    for (std::size_t i = 0; i < a.spine_args().size(); ++i)
      unify_in(a.spine_args()[i], b.spine_args()[i], ctx);
    return;
  }
  if (fa && fb) {
    flex_flex(a, b, ctx);
  } else if (fa) {
    flex_rigid(a, b, ctx);
  } else {
    flex_rigid(b, a, ctx);
  }
}

void Unifier::flex_flex(const Term& a, const Term& b, std::vector<Ty>& ctx) {
  const Term& x = a.spine_head();
  const Term& y = b.spine_head();
  auto xa = a.spine_args();
  auto yb = b.spine_args();
  if (x.name() == y.name()) {
    if (!pattern_args(xa, ctx.size()) || !pattern_args(yb, ctx.size()))
      throw OutsideFragment(fmt::format("non-pattern equation on {}", x.name()));
    std::vector<Ty> all_tys;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < xa.size(); ++i) {
      all_tys.push_back(x.ty().args()[i]);
      if (same_atom(xa[i], yb[i])) keep.push_back(i);
    }
    if (keep.size() == xa.size()) return;
    Ty result = x.ty().drop(xa.size());
    std::vector<Ty> kept_tys;
    for (std::size_t k : keep) kept_tys.push_back(all_tys[k]);
    Term fresh = supply_.fresh(x.name(), x.tag(), Ty::arrows(kept_tys, result), x.ts());
    int n = static_cast<int>(xa.size());
    std::vector<Term> args;
    for (std::size_t k : keep) args.push_back(Term::bound(n - 1 - static_cast<int>(k)));
    bind(x.name(), normalize(Term::lam(all_tys, Term::app(fresh, args))));
    return;
  }
  bool pa = pattern_args(xa, ctx.size());
  bool pb = pattern_args(yb, ctx.size());
  if (pb && !(pa && x.ts() > y.ts())) {
    flex_rigid(b, a, ctx);
  } else if (pa) {
    flex_rigid(a, b, ctx);
  } else {
    throw OutsideFragment(
        fmt::format("non-pattern equation between {} and {}", x.name(), y.name()));
  }
}

void Unifier::flex_rigid(const Term& flex, const Term& rigid0, std::vector<Ty>& ctx) {
  const Term& x = flex.spine_head();
  auto xa = flex.spine_args();
  if (!pattern_args(xa, ctx.size()))
    throw OutsideFragment(fmt::format("{} is applied to non-pattern arguments", x.name()));
  Term rigid = apply_subst(rigid0, subst_);
  int n = static_cast<int>(xa.size());
  std::size_t depth = ctx.size();

  auto map_atom = [&](const Term& atom, int inner) -> std::optional<Term> {
    for (int j = 0; j < n; ++j) {
      const Term& arg = xa[static_cast<std::size_t>(j)];
      if (atom.is_bound()) {
        if (arg.is_bound() && arg.index() == atom.index() - inner)
          return Term::bound(inner + n - 1 - j);
      } else if (same_atom(arg, atom)) {
        return Term::bound(inner + n - 1 - j);
      }
    }
    return std::nullopt;
  };

  // Abstraction with occurs check, scope check and pruning.
  std::function<Term(const Term&, int)> abstract = [&](const Term& u, int inner) -> Term {
    switch (u.kind()) {
      case Term::Kind::kBound: {
        if (u.index() < inner) return u;
        if (auto m = map_atom(u, inner)) return *m;
        throw UnifyFailure("bound variable escapes its scope");
      }
      case Term::Kind::kLam:
        return Term::lam(u.binders(),
                         abstract(u.body(), inner + static_cast<int>(u.binders().size())),
                         u.hints());
      case Term::Kind::kVar:
      case Term::Kind::kApp:
        break;
    }
    const Term& h = u.spine_head();
    auto args = u.spine_args();
    if (h.is_var() && flexible(h)) {
      if (h.name() == x.name()) throw UnifyFailure(fmt::format("occurs check on {}", x.name()));
      // Pruned earlier in this traversal.
      if (subst_.contains(h.name())) return abstract(apply_subst(u, subst_), inner);
      // Decide which arguments survive.
      std::vector<std::optional<Term>> mapped;
      bool all_ok = true;
      for (const Term& arg : args) {
        try {
          mapped.push_back(abstract(arg, inner));
        } catch (const UnifyFailure&) {
          mapped.push_back(std::nullopt);
          all_ok = false;
        }
      }
      if (subst_.contains(h.name())) return abstract(apply_subst(u, subst_), inner);
      bool lower = mode_ == UnifyMode::kLogic && h.ts() > x.ts();
      if (all_ok && !lower) {
        std::vector<Term> out;
        for (auto& m : mapped) out.push_back(*m);
        return Term::app(h, std::move(out));
      }
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (!mapped[i] && !(is_atom_arg(args[i], depth + static_cast<std::size_t>(inner))))
          throw OutsideFragment(fmt::format("cannot prune argument of {}", h.name()));
      }
      std::vector<Ty> all_tys(h.ty().args().begin(),
                              h.ty().args().begin() + static_cast<std::ptrdiff_t>(args.size()));
      std::vector<Ty> kept_tys;
      std::vector<Term> inner_args;
      std::vector<Term> outer_args;
      int k = static_cast<int>(args.size());
      for (int i = 0; i < k; ++i) {
        if (!mapped[static_cast<std::size_t>(i)]) continue;
        kept_tys.push_back(all_tys[static_cast<std::size_t>(i)]);
        inner_args.push_back(Term::bound(k - 1 - i));
        outer_args.push_back(*mapped[static_cast<std::size_t>(i)]);
      }
      Ty result = h.ty().drop(args.size());
      Term fresh = supply_.fresh(h.name(), h.tag(), Ty::arrows(kept_tys, result),
                                 std::min(h.ts(), x.ts()));
      bind(h.name(), normalize(Term::lam(all_tys, Term::app(fresh, inner_args))));
      return Term::app(fresh, std::move(outer_args));
    }
    Term head;
    if (h.is_bound()) {
      head = abstract(h, inner);
    } else if (h.is_var(Tag::kNominal) || h.is_var(Tag::kLocal)) {
      auto m = map_atom(h, inner);
      if (!m)
        throw UnifyFailure(fmt::format("{} cannot depend on {}", x.name(), h.name()));
      head = *m;
    } else if (h.is_var(Tag::kEigen) || h.is_var(Tag::kLogic)) {
      if (h.ts() > x.ts())
        throw UnifyFailure(fmt::format("{} is not in scope of {}", h.name(), x.name()));
      head = h;
    } else {
      head = h;
    }
    std::vector<Term> out;
    for (const Term& arg : args) out.push_back(abstract(arg, inner));
    return Term::app(head, std::move(out));
  };

  Term body = abstract(rigid, 0);
  std::vector<Ty> tys;
  for (const Term& a : xa) tys.push_back(arg_type(a, ctx));
  bind(x.name(), normalize(Term::lam(tys, body)));
}

Subst unify_terms(const Term& a, const Term& b, VarSupply& supply, UnifyMode mode, Subst start) {
  Unifier u(start, supply, mode);
  u.unify(a, b);
  return start;
}

}  // namespace nabla
