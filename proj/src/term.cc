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

#include "nabla/term.h"

#include <algorithm>
#include <functional>
#include <optional>

#include <fmt/format.h>

namespace nabla {

// --- Ty ---------------------------------------------------------------------

Ty Ty::base(std::string name) {
  return Ty(std::make_shared<const Rep>(Rep{std::move(name), {}}));
}

Ty Ty::arrow(const Ty& from, const Ty& to) {
  std::vector<Ty> args{from};
  args.insert(args.end(), to.args().begin(), to.args().end());
  return Ty(std::make_shared<const Rep>(Rep{to.head(), std::move(args)}));
}

Ty Ty::arrows(std::span<const Ty> from, const Ty& to) {
  if (from.empty()) return to;
  std::vector<Ty> args(from.begin(), from.end());
  args.insert(args.end(), to.args().begin(), to.args().end());
  return Ty(std::make_shared<const Rep>(Rep{to.head(), std::move(args)}));
}

Ty Ty::drop(std::size_t n) const {
  if (n == 0) return *this;
  if (n > arity()) throw TypeError(fmt::format("too many arguments for type {}", str()));
  std::vector<Ty> rest(args().begin() + static_cast<std::ptrdiff_t>(n), args().end());
  return Ty(std::make_shared<const Rep>(Rep{head(), std::move(rest)}));
}

bool Ty::mentions(std::string_view name) const {
  if (head() == name) return true;
  return std::any_of(args().begin(), args().end(),
                     [&](const Ty& a) { return a.mentions(name); });
}

std::string Ty::str() const {
  if (!valid()) return "?";
  std::string out;
  for (const Ty& a : args()) {
    if (a.is_base()) {
      out += a.head();
    } else {
      out += "(" + a.str() + ")";
    }
    out += " -> ";
  }
  return out + head();
}

bool operator==(const Ty& a, const Ty& b) {
  if (a.rep_ == b.rep_) return true;
  if (!a.valid() || !b.valid()) return false;
  return a.head() == b.head() && a.args() == b.args();
}

// --- Term -------------------------------------------------------------------

std::string_view tag_name(Tag tag) {
  switch (tag) {
    case Tag::kConstant: return "constant";
    case Tag::kEigen: return "eigenvariable";
    case Tag::kNominal: return "nominal";
    case Tag::kLogic: return "logic variable";
    case Tag::kLocal: return "bound variable";
  }
  return "?";
}

Term Term::var(std::string name, Tag tag, Ty ty, std::uint32_t ts) {
  Node n{Kind::kVar};
  n.name = std::move(name);
  n.tag = tag;
  n.ty = std::move(ty);
  n.ts = ts;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::bound(int index) {
  static std::vector<Term> cache = [] {
    std::vector<Term> v;
    for (int i = 0; i < 64; ++i) {
      Node n{Kind::kBound};
      n.index = i;
      v.push_back(Term(std::make_shared<const Node>(std::move(n))));
    }
    return v;
  }();
  if (index >= 0 && index < 64) return cache[static_cast<std::size_t>(index)];
  Node n{Kind::kBound};
  n.index = index;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::app(Term head, std::vector<Term> args) {
  if (args.empty()) return head;
  Node n{Kind::kApp};
  if (head.is_app()) {
    n.children.assign(head.node_->children.begin(), head.node_->children.end());
    n.children.insert(n.children.end(), args.begin(), args.end());
  } else {
    n.children.reserve(args.size() + 1);
    n.children.push_back(std::move(head));
    for (Term& a : args) n.children.push_back(std::move(a));
  }
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::lam(std::vector<Ty> binders, Term body, std::vector<std::string> hints) {
  if (binders.empty()) return body;
  hints.resize(binders.size());
  Node n{Kind::kLam};
  if (body.is_lam()) {
    binders.insert(binders.end(), body.binders().begin(), body.binders().end());
    hints.insert(hints.end(), body.hints().begin(), body.hints().end());
    n.children.push_back(body.body());
  } else {
    n.children.push_back(std::move(body));
  }
  n.binders = std::move(binders);
  n.hints = std::move(hints);
  return Term(std::make_shared<const Node>(std::move(n)));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.valid() || !b.valid()) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::kVar:
      return a.tag() == b.tag() && a.name() == b.name();
    case Term::Kind::kBound:
      return a.index() == b.index();
    case Term::Kind::kApp:
      return a.node_->children == b.node_->children;
    case Term::Kind::kLam:
      return a.binders() == b.binders() && a.body() == b.body();
  }
  return false;
}

// --- de Bruijn plumbing -----------------------------------------------------

namespace {

Term lift_at(const Term& t, int by, int from) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      return t;
    case Term::Kind::kBound:
      return t.index() >= from ? Term::bound(t.index() + by) : t;
    case Term::Kind::kApp: {
      bool changed = false;
      Term h = lift_at(t.fn(), by, from);
      changed |= !h.same_node(t.fn());
      std::vector<Term> args;
      for (const Term& a : t.args()) {
        args.push_back(lift_at(a, by, from));
        changed |= !args.back().same_node(a);
      }
      return changed ? Term::app(h, std::move(args)) : t;
    }
    case Term::Kind::kLam: {
      int k = static_cast<int>(t.binders().size());
      Term b = lift_at(t.body(), by, from + k);
      return b.same_node(t.body()) ? t : Term::lam(t.binders(), b, t.hints());
    }
  }
  return t;
}

bool has_bound_at(const Term& t, int index) {
  switch (t.kind()) {
    case Term::Kind::kVar: return false;
    case Term::Kind::kBound: return t.index() == index;
    case Term::Kind::kApp:
      if (has_bound_at(t.fn(), index)) return true;
      for (const Term& a : t.args())
        if (has_bound_at(a, index)) return true;
      return false;
    case Term::Kind::kLam:
      return has_bound_at(t.body(), index + static_cast<int>(t.binders().size()));
  }
  return false;
}

int max_free_bound(const Term& t, int depth) {
  switch (t.kind()) {
    case Term::Kind::kVar: return -1;
    case Term::Kind::kBound: return t.index() >= depth ? t.index() - depth : -1;
    case Term::Kind::kApp: {
      int m = max_free_bound(t.fn(), depth);
      for (const Term& a : t.args()) m = std::max(m, max_free_bound(a, depth));
      return m;
    }
    case Term::Kind::kLam:
      return max_free_bound(t.body(), depth + static_cast<int>(t.binders().size()));
  }
  return -1;
}

// Instantiates the outermost `vals.size()` binders of a body that lives under
// `k` binders. Index k-1 is the outermost binder.
Term instantiate(const Term& t, int depth, int k, const std::vector<Term>& vals) {
  int m = static_cast<int>(vals.size());
  switch (t.kind()) {
    case Term::Kind::kVar:
      return t;
    case Term::Kind::kBound: {
      int i = t.index() - depth;
      if (i < 0) return t;
      if (i < k - m) return t;
      if (i < k) return lift_at(vals[static_cast<std::size_t>(k - 1 - i)], depth + (k - m), 0);
      return Term::bound(t.index() - m);
    }
    case Term::Kind::kApp: {
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(instantiate(a, depth, k, vals));
      return Term::app(instantiate(t.fn(), depth, k, vals), std::move(args));
    }
    case Term::Kind::kLam:
      return Term::lam(t.binders(),
                       instantiate(t.body(), depth + static_cast<int>(t.binders().size()), k, vals),
                       t.hints());
  }
  return t;
}

Term eta_contract(std::vector<Ty> binders, Term body, std::vector<std::string> hints) {
  hints.resize(binders.size());
  while (!binders.empty() && body.is_app()) {
    auto args = body.args();
    const Term& last = args.back();
    if (!last.is_bound() || last.index() != 0) break;
    std::vector<Term> rest(args.begin(), args.end() - 1);
    Term candidate = Term::app(body.fn(), rest);
    if (has_bound_at(candidate, 0)) break;
    body = lift_at(candidate, -1, 0);
    binders.pop_back();
    hints.pop_back();
  }
  return Term::lam(std::move(binders), std::move(body), std::move(hints));
}

using Replacer = std::function<std::optional<Term>(const Term&)>;

// Replaces atoms and renormalizes, assuming `t` is normal.
Term replace_norm(const Term& t, const Replacer& fn) {
  switch (t.kind()) {
    case Term::Kind::kVar: {
      auto r = fn(t);
      return r ? *r : t;
    }
    case Term::Kind::kBound:
      return t;
    case Term::Kind::kApp: {
      Term h = replace_norm(t.fn(), fn);
      bool changed = !h.same_node(t.fn());
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) {
        args.push_back(replace_norm(a, fn));
        changed |= !args.back().same_node(a);
      }
      if (!changed) return t;
      if (!h.same_node(t.fn())) return reduce_app(h, args);
      return Term::app(h, std::move(args));
    }
    case Term::Kind::kLam: {
      Term b = replace_norm(t.body(), fn);
      if (b.same_node(t.body())) return t;
      return eta_contract(t.binders(), b, t.hints());
    }
  }
  return t;
}

}  // namespace

Term lift(const Term& t, int by, int from) {
  if (by == 0) return t;
  return lift_at(t, by, from);
}

Term subst_bound(const Term& t, int level, const Term& value) {
  std::function<Term(const Term&, int)> go = [&](const Term& u, int depth) -> Term {
    switch (u.kind()) {
      case Term::Kind::kVar:
        return u;
      case Term::Kind::kBound: {
        int i = u.index() - depth;
        if (i < level) return u;
        if (i == level) return lift_at(value, depth, 0);
        return Term::bound(u.index() - 1);
      }
      case Term::Kind::kApp: {
        std::vector<Term> args;
        for (const Term& a : u.args()) args.push_back(go(a, depth));
        return Term::app(go(u.fn(), depth), std::move(args));
      }
      case Term::Kind::kLam:
        return Term::lam(u.binders(), go(u.body(), depth + static_cast<int>(u.binders().size())),
                         u.hints());
    }
    return u;
  };
  return go(t, 0);
}

bool has_bound(const Term& t, int index) { return has_bound_at(t, index); }

bool is_closed(const Term& t) { return max_free_bound(t, 0) < 0; }

// --- normalization ----------------------------------------------------------

Term reduce_app(const Term& head, std::span<const Term> args) {
  if (args.empty()) return head;
  if (head.is_lam()) {
    int k = static_cast<int>(head.binders().size());
    int n = static_cast<int>(args.size());
    int m = std::min(k, n);
    std::vector<Term> vals(args.begin(), args.begin() + m);
    Term body = instantiate(head.body(), 0, k, vals);
    std::vector<Ty> rest_binders(head.binders().begin() + m, head.binders().end());
    std::vector<std::string> rest_hints(head.hints().begin() + m, head.hints().end());
    Term result = normalize(Term::lam(std::move(rest_binders), body, std::move(rest_hints)));
    if (n > m) return reduce_app(result, args.subspan(static_cast<std::size_t>(m)));
    return result;
  }
  return Term::app(head, std::vector<Term>(args.begin(), args.end()));
}

Term normalize(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kVar:
    case Term::Kind::kBound:
      return t;
    case Term::Kind::kApp: {
      Term h = normalize(t.fn());
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(normalize(a));
      return reduce_app(h, args);
    }
    case Term::Kind::kLam:
      return eta_contract(t.binders(), normalize(t.body()), t.hints());
  }
  return t;
}

Term apply_subst(const Term& t, const Subst& theta) {
  if (theta.empty()) return t;
  return replace_norm(t, [&](const Term& v) -> std::optional<Term> {
    if (v.tag() != Tag::kEigen && v.tag() != Tag::kLogic) return std::nullopt;
    auto it = theta.find(v.name());
    if (it == theta.end()) return std::nullopt;
    return it->second;
  });
}

Term replace_atoms(const Term& t, Tag tag, const std::map<std::string, Term>& by_name) {
  if (by_name.empty()) return t;
  return replace_norm(t, [&](const Term& v) -> std::optional<Term> {
    if (v.tag() != tag) return std::nullopt;
    auto it = by_name.find(v.name());
    if (it == by_name.end()) return std::nullopt;
    return it->second;
  });
}

Subst compose(const Subst& theta1, const Subst& theta2) {
  Subst out;
  for (const auto& [name, value] : theta1) out[name] = apply_subst(value, theta2);
  for (const auto& [name, value] : theta2) out.emplace(name, value);
  return out;
}

// --- atoms and support ------------------------------------------------------

void collect_atoms(const Term& t, Tag tag, std::vector<Term>& out) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      if (t.tag() == tag &&
          std::none_of(out.begin(), out.end(), [&](const Term& o) { return o.name() == t.name(); }))
        out.push_back(t);
      return;
    case Term::Kind::kBound:
      return;
    case Term::Kind::kApp:
      collect_atoms(t.fn(), tag, out);
      for (const Term& a : t.args()) collect_atoms(a, tag, out);
      return;
    case Term::Kind::kLam:
      collect_atoms(t.body(), tag, out);
      return;
  }
}

std::vector<Term> atoms_of(const Term& t, Tag tag) {
  std::vector<Term> out;
  collect_atoms(t, tag, out);
  return out;
}

std::set<std::string> support(const Term& t) {
  std::set<std::string> out;
  for (const Term& a : atoms_of(t, Tag::kNominal)) out.insert(a.name());
  return out;
}

bool occurs_atom(const Term& t, Tag tag, std::string_view name) {
  switch (t.kind()) {
    case Term::Kind::kVar: return t.tag() == tag && t.name() == name;
    case Term::Kind::kBound: return false;
    case Term::Kind::kApp:
      if (occurs_atom(t.fn(), tag, name)) return true;
      for (const Term& a : t.args())
        if (occurs_atom(a, tag, name)) return true;
      return false;
    case Term::Kind::kLam: return occurs_atom(t.body(), tag, name);
  }
  return false;
}

Term permute(const Permutation& pi, const Term& t) {
  if (pi.empty()) return t;
  return replace_norm(t, [&](const Term& v) -> std::optional<Term> {
    if (v.tag() != Tag::kNominal) return std::nullopt;
    auto it = pi.find(v.name());
    if (it == pi.end() || it->second == v.name()) return std::nullopt;
    return Term::var(it->second, Tag::kNominal, v.ty());
  });
}

Permutation inverse(const Permutation& pi) {
  Permutation out;
  for (const auto& [from, to] : pi) out[to] = from;
  return out;
}

// --- typing -----------------------------------------------------------------

namespace {

Ty type_in(const Term& t, std::vector<Ty>& ctx) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      return t.ty();
    case Term::Kind::kBound: {
      if (t.index() < 0 || t.index() >= static_cast<int>(ctx.size()))
        throw TypeError(fmt::format("dangling bound variable #{}", t.index()));
      return ctx[ctx.size() - 1 - static_cast<std::size_t>(t.index())];
    }
    case Term::Kind::kApp: {
      Ty f = type_in(t.fn(), ctx);
      if (t.args().size() > f.arity())
        throw TypeError(fmt::format("term of type {} applied to {} arguments", f.str(),
                                    t.args().size()));
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        Ty a = type_in(t.args()[i], ctx);
        if (!(a == f.args()[i]))
          throw TypeError(fmt::format("argument {} has type {}, expected {}", i + 1, a.str(),
                                      f.args()[i].str()));
      }
      return f.drop(t.args().size());
    }
    case Term::Kind::kLam: {
      for (const Ty& b : t.binders()) ctx.push_back(b);
      Ty body = type_in(t.body(), ctx);
      ctx.resize(ctx.size() - t.binders().size());
      return Ty::arrows(t.binders(), body);
    }
  }
  throw TypeError("malformed term");
}

}  // namespace

Ty type_of(const Term& t) {
  std::vector<Ty> ctx;
  return type_in(t, ctx);
}

}  // namespace nabla
