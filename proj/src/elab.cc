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

#include "nabla/elab.h"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

namespace nabla {

namespace {

bool is_nominal_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'n') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_capitalized(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

Ty base_ty(const std::string& s) { return Ty::base(s); }

template <typename T>
const T* find_named(const std::vector<T>& v, const std::string& name) {
  for (auto it = v.rbegin(); it != v.rend(); ++it)
    if (it->name() == name) return &*it;
  return nullptr;
}

}  // namespace

Ty surface_type(const Ty& ty) {
  std::vector<Ty> args;
  for (const Ty& a : ty.args()) args.push_back(surface_type(a));
  Ty head = base_ty(ty.head() == "prop" ? std::string(kPropType) : ty.head());
  return Ty::arrows(args, head);
}

Term spec_pi(const Ty& ty) {
  std::string mangled;
  for (char c : ty.str()) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') mangled += c;
    else if (c == '>') mangled += "_to_";
    else if (c == '(') mangled += "_l_";
    else if (c == ')') mangled += "_r_";
  }
  Ty goal = base_ty(types::kGoal);
  return Term::var("pi_" + mangled, Tag::kConstant, Ty::arrow(Ty::arrow(ty, goal), goal));
}

bool is_spec_pi(const Term& t) {
  if (!t.is_var(Tag::kConstant) || !t.name().starts_with("pi_")) return false;
  const Ty& ty = t.ty();
  return ty.head() == types::kGoal && ty.arity() == 1 && ty.args()[0].head() == types::kGoal &&
         ty.args()[0].arity() == 1;
}

Elaborator::Elaborator(ElabScope scope) : scope_(std::move(scope)) {}

// --- type nodes ---------------------------------------------------------------

int Elaborator::fresh() {
  nodes_.push_back(TNode{});
  return static_cast<int>(nodes_.size()) - 1;
}

int Elaborator::base(const std::string& name) {
  TNode n;
  n.kind = 1;
  n.base = name;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int Elaborator::arrow(int a, int b) {
  TNode n;
  n.kind = 2;
  n.a = a;
  n.b = b;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int Elaborator::from_ty(const Ty& t) {
  int out = base(t.head());
  for (std::size_t i = t.arity(); i-- > 0;) out = arrow(from_ty(t.args()[i]), out);
  return out;
}

int Elaborator::find(int i) {
  while (nodes_[i].kind == 0 && nodes_[i].link >= 0) {
    int next = nodes_[i].link;
    if (nodes_[next].kind == 0 && nodes_[next].link >= 0) nodes_[i].link = nodes_[next].link;
    i = next;
  }
  return i;
}

bool Elaborator::occurs(int v, int t) {
  t = find(t);
  if (t == v) return true;
  if (nodes_[t].kind == 2) return occurs(v, nodes_[t].a) || occurs(v, nodes_[t].b);
  return false;
}

std::string Elaborator::show(int i) {
  i = find(i);
  const TNode& n = nodes_[i];
  if (n.kind == 0) return fmt::format("?{}", i);
  if (n.kind == 1) return n.base == kPropType ? "prop" : n.base;
  int a = find(n.a);
  std::string left = show(a);
  if (nodes_[a].kind == 2) left = "(" + left + ")";
  return left + " -> " + show(n.b);
}

void Elaborator::unify(int a, int b, Loc loc) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  TNode& x = nodes_[a];
  TNode& y = nodes_[b];
  if (x.kind == 0 || y.kind == 0) {
    int v = x.kind == 0 ? a : b;
    int t = x.kind == 0 ? b : a;
    if (occurs(v, t)) throw ParseError(loc, "cyclic type");
    nodes_[v].link = t;
    return;
  }
  if (x.kind == 1 && y.kind == 1 && x.base == y.base) return;
  if (x.kind == 2 && y.kind == 2) {
    int xa = x.a, xb = x.b, ya = y.a, yb = y.b;
    unify(xa, ya, loc);
    unify(xb, yb, loc);
    return;
  }
  throw ParseError(loc, fmt::format("type mismatch: {} versus {}", show(a), show(b)));
}

Ty Elaborator::resolve(int i, Loc loc) {
  i = find(i);
  const TNode& n = nodes_[i];
  if (n.kind == 0) throw ParseError(loc, "cannot determine the type of this expression");
  if (n.kind == 1) return base_ty(n.base);
  int a = n.a, b = n.b;
  return Ty::arrow(resolve(a, loc), resolve(b, loc));
}

// --- inference ----------------------------------------------------------------

void Elaborator::push_local(const std::string& name, std::optional<Ty> ty) {
  int t = ty ? from_ty(surface_type(*ty)) : fresh();
  local_stack_.emplace_back(name, t);
  pushed_locals_[name] = t;
}

Ty Elaborator::local_type(const std::string& name) {
  return resolve(pushed_locals_.at(name), Loc{});
}

void Elaborator::add(const Expr& e, Sort sort, std::optional<Ty> expected) {
  switch (sort) {
    case Sort::kFormula:
      infer_formula(e);
      break;
    case Sort::kGoal:
      infer_goal(e);
      break;
    case Sort::kTerm: {
      int t = infer_term(e);
      if (expected) unify(t, from_ty(*expected), e.loc);
      break;
    }
  }
}

void Elaborator::solve() {
  for (const auto& [node, name] : defaults_) {
    int r = find(node);
    if (nodes_[r].kind == 0) unify(r, base(name), Loc{});
  }
  for (const Expr* b : nabla_binders_) {
    for (std::size_t i = 0; i < b->vars.size(); ++i) {
      Ty ty = resolve(var_ty_.at({b, i}), b->loc);
      if (ty.mentions(kPropType))
        throw ParseError(b->loc, fmt::format("nabla is not allowed at type {}", ty.str()));
    }
  }
}

Elaborator::Ident& Elaborator::lookup(const Expr& e) {
  auto it = idents_.find(&e);
  if (it == idents_.end()) throw ParseError(e.loc, "internal: unresolved name " + e.name);
  return it->second;
}

void Elaborator::infer_formula(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kBinder: {
      if (e.name == "nabla") nabla_binders_.push_back(&e);
      for (std::size_t i = 0; i < e.vars.size(); ++i) {
        const auto& [name, ty] = e.vars[i];
        int t = ty ? from_ty(surface_type(*ty)) : fresh();
        var_ty_[{&e, i}] = t;
        local_stack_.emplace_back(name, t);
      }
      infer_formula(e.kids[0]);
      local_stack_.resize(local_stack_.size() - e.vars.size());
      return;
    }
    case Expr::Kind::kOp:
      if (e.name == "->" || e.name == "/\\" || e.name == "\\/") {
        infer_formula(e.kids[0]);
        infer_formula(e.kids[1]);
        return;
      }
      if (e.name == "=") {
        unify(infer_term(e.kids[0]), infer_term(e.kids[1]), e.loc);
        return;
      }
      break;
    case Expr::Kind::kObj: {
      std::size_t n = e.kids.size();
      unify(infer_term(e.kids[n - 1]), base(types::kAtom), e.kids[n - 1].loc);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        int t = infer_term(e.kids[i]);
        if (i == 0) {
          term_ty_[&e.kids[i]] = t;
          defaults_.emplace_back(t, types::kList);
        } else {
          unify(t, base(types::kAtom), e.kids[i].loc);
        }
      }
      return;
    }
    case Expr::Kind::kAnn: {
      const Expr& k = e.kids[0];
      if (k.kind == Expr::Kind::kObj) {
        infer_formula(k);
      } else {
        unify(infer_term(k), base(std::string(kPropType)), k.loc);
      }
      return;
    }
    case Expr::Kind::kIdent:
      if (e.name == "true" || e.name == "false") return;
      break;
    default:
      break;
  }
  unify(infer_term(e), base(std::string(kPropType)), e.loc);
}

int Elaborator::infer_term(const Expr& e) {
  int out = -1;
  switch (e.kind) {
    case Expr::Kind::kIdent: {
      const std::string& name = e.name;
      Ident id{Res::kConst, -1};
      auto in_stack = [&](const std::vector<std::pair<std::string, int>>& st) -> int {
        for (auto it = st.rbegin(); it != st.rend(); ++it)
          if (it->first == name) return it->second;
        return -1;
      };
      if (int t = in_stack(lam_stack_); t >= 0) {
        id = {Res::kBound, t};
      } else if (int t2 = in_stack(local_stack_); t2 >= 0) {
        id = {Res::kLocal, t2};
      } else if (int t3 = in_stack(implicit_); t3 >= 0) {
        id = {Res::kImplicit, t3};
      } else if (const Term* ev = find_named(scope_.eigen, name)) {
        id = {Res::kEigen, from_ty(ev->ty())};
      } else if (const Term* nv = find_named(scope_.nominals, name)) {
        id = {Res::kNominal, from_ty(nv->ty())};
      } else if (name == names::kName) {
        id = {Res::kName, arrow(fresh(), base(std::string(kPropType)))};
      } else if (scope_.sig != nullptr && scope_.sig->has_const(name)) {
        id = {Res::kConst, from_ty(scope_.sig->const_type(name))};
      } else if (scope_.new_nominals && is_nominal_name(name)) {
        auto it = new_nominals_.find(name);
        if (it == new_nominals_.end()) it = new_nominals_.emplace(name, fresh()).first;
        id = {Res::kNominal, it->second};
      } else if (scope_.implicit_vars && is_capitalized(name)) {
        int t = fresh();
        implicit_.emplace_back(name, t);
        id = {Res::kImplicit, t};
      } else {
        throw ParseError(e.loc, fmt::format("unknown name {}", name));
      }
      idents_[&e] = id;
      out = id.ty;
      break;
    }
    case Expr::Kind::kApp: {
      int head = infer_term(e.kids[0]);
      int r = fresh();
      int want = r;
      for (std::size_t i = e.kids.size(); i-- > 1;) want = arrow(infer_term(e.kids[i]), want);
      unify(head, want, e.loc);
      out = r;
      break;
    }
    case Expr::Kind::kLam: {
      const auto& [name, ty] = e.vars[0];
      int a = ty ? from_ty(surface_type(*ty)) : fresh();
      var_ty_[{&e, 0}] = a;
      lam_stack_.emplace_back(name, a);
      int b = infer_term(e.kids[0]);
      lam_stack_.pop_back();
      out = arrow(a, b);
      break;
    }
    case Expr::Kind::kOp:
      if (e.name == "::") {
        unify(infer_term(e.kids[0]), base(types::kAtom), e.kids[0].loc);
        unify(infer_term(e.kids[1]), base(types::kList), e.kids[1].loc);
        out = base(types::kList);
        break;
      }
      throw ParseError(e.loc, fmt::format("'{}' cannot appear inside a term", e.name));
    case Expr::Kind::kBinder:
      throw ParseError(e.loc, "quantifier inside a term");
    case Expr::Kind::kObj:
      throw ParseError(e.loc, "judgment inside a term");
    case Expr::Kind::kAnn:
      throw ParseError(e.loc, "annotation inside a term");
  }
  term_ty_[&e] = out;
  return out;
}

bool Elaborator::is_pi(const Expr& e) const {
  return e.kind == Expr::Kind::kApp && e.kids.size() == 2 &&
         e.kids[0].kind == Expr::Kind::kIdent && e.kids[0].name == "pi" &&
         e.kids[1].kind == Expr::Kind::kLam;
}

void Elaborator::infer_goal(const Expr& e) {
  if (e.kind == Expr::Kind::kOp && e.name == ",") {
    infer_goal(e.kids[0]);
    infer_goal(e.kids[1]);
    return;
  }
  if (e.kind == Expr::Kind::kOp && e.name == "=>") {
    const Expr& h = e.kids[0];
    if ((h.kind == Expr::Kind::kOp && (h.name == "," || h.name == "=>")) || is_pi(h))
      throw ParseError(h.loc, "hypotheses of '=>' must be atomic formulas");
    unify(infer_term(h), base(types::kAtom), h.loc);
    infer_goal(e.kids[1]);
    return;
  }
  if (is_pi(e)) {
    const Expr& lam = e.kids[1];
    const auto& [name, ty] = lam.vars[0];
    int a = ty ? from_ty(surface_type(*ty)) : fresh();
    var_ty_[{&lam, 0}] = a;
    lam_stack_.emplace_back(name, a);
    infer_goal(lam.kids[0]);
    lam_stack_.pop_back();
    return;
  }
  if (e.kind == Expr::Kind::kIdent && e.name == "true") return;
  unify(infer_term(e), base(types::kAtom), e.loc);
}

// --- construction -------------------------------------------------------------

Term Elaborator::build_term(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kIdent: {
      const Ident& id = lookup(e);
      switch (id.res) {
        case Res::kBound: {
          for (std::size_t i = build_lams_.size(); i-- > 0;)
            if (build_lams_[i] == e.name)
              return Term::bound(static_cast<int>(build_lams_.size() - 1 - i));
          throw ParseError(e.loc, "internal: unbound lambda variable");
        }
        case Res::kLocal:
        case Res::kImplicit:
          return Term::var(e.name, Tag::kLocal, resolve(id.ty, e.loc));
        case Res::kEigen:
          return *find_named(scope_.eigen, e.name);
        case Res::kNominal:
          if (const Term* nv = find_named(scope_.nominals, e.name)) return *nv;
          return Term::var(e.name, Tag::kNominal, resolve(id.ty, e.loc));
        case Res::kName: {
          Ty ty = resolve(id.ty, e.loc);
          if (ty.args()[0].mentions(kPropType))
            throw ParseError(e.loc, "name is not defined at this type");
          return Term::var(e.name, Tag::kConstant, ty);
        }
        case Res::kConst:
          return scope_.sig->constant(e.name);
      }
      break;
    }
    case Expr::Kind::kApp: {
      Term head = build_term(e.kids[0]);
      std::vector<Term> args;
      for (std::size_t i = 1; i < e.kids.size(); ++i) args.push_back(build_term(e.kids[i]));
      return Term::app(std::move(head), std::move(args));
    }
    case Expr::Kind::kLam: {
      Ty a = resolve(var_ty_.at({&e, 0}), e.loc);
      if (scope_.sig != nullptr) scope_.sig->check_type(a);
      build_lams_.push_back(e.vars[0].first);
      Term body = build_term(e.kids[0]);
      build_lams_.pop_back();
      return Term::lam({a}, std::move(body), {e.vars[0].first});
    }
    case Expr::Kind::kOp: {
      Ty form = base_ty(types::kAtom);
      Ty list = base_ty(types::kList);
      Term cons = Term::var(names::kCons, Tag::kConstant, Ty::arrows(std::vector<Ty>{form, list}, list));
      return Term::app(cons, {build_term(e.kids[0]), build_term(e.kids[1])});
    }
    default:
      break;
  }
  throw ParseError(e.loc, "expected a term");
}

Formula Elaborator::build_formula(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kBinder: {
      Formula::Kind q = e.name == "forall"   ? Formula::Kind::kForall
                        : e.name == "exists" ? Formula::Kind::kExists
                                             : Formula::Kind::kNabla;
      std::vector<std::pair<std::string, Ty>> vars;
      for (std::size_t i = 0; i < e.vars.size(); ++i) {
        Ty ty = resolve(var_ty_.at({&e, i}), e.loc);
        if (scope_.sig != nullptr) scope_.sig->check_type(ty);
        vars.emplace_back(e.vars[i].first, ty);
      }
      Formula body = build_formula(e.kids[0]);
      for (std::size_t i = vars.size(); i-- > 0;)
        body = Formula::binder(q, vars[i].first, vars[i].second, std::move(body));
      return body;
    }
    case Expr::Kind::kOp:
      if (e.name == "->")
        return Formula::imp(build_formula(e.kids[0]), build_formula(e.kids[1]));
      if (e.name == "/\\")
        return Formula::conj(build_formula(e.kids[0]), build_formula(e.kids[1]));
      if (e.name == "\\/")
        return Formula::disj(build_formula(e.kids[0]), build_formula(e.kids[1]));
      if (e.name == "=")
        return Formula::eq(normalize(build_term(e.kids[0])), normalize(build_term(e.kids[1])));
      break;
    case Expr::Kind::kObj: {
      std::size_t n = e.kids.size();
      Term goal = normalize(build_term(e.kids[n - 1]));
      Term ctx = Term::var(names::kNil, Tag::kConstant, base_ty(types::kList));
      std::size_t first = 0;
      if (n > 1) {
        Ty t0 = resolve(term_ty_.at(&e.kids[0]), e.kids[0].loc);
        if (t0.head() == types::kList && t0.is_base()) {
          ctx = build_term(e.kids[0]);
          first = 1;
        }
      }
      Ty form = base_ty(types::kAtom);
      Ty list = base_ty(types::kList);
      Term cons = Term::var(names::kCons, Tag::kConstant, Ty::arrows(std::vector<Ty>{form, list}, list));
      for (std::size_t i = first; i + 1 < n; ++i) ctx = Term::app(cons, {build_term(e.kids[i]), ctx});
      return Formula::obj(normalize(ctx), goal);
    }
    case Expr::Kind::kAnn: {
      Annotation ann{e.mark, e.level};
      Formula f = build_formula(e.kids[0]);
      if (!f.is(Formula::Kind::kAtom) && !f.is(Formula::Kind::kObj))
        throw ParseError(e.loc, "only atomic formulas can be annotated");
      return f.with_ann(ann);
    }
    case Expr::Kind::kIdent:
      if (e.name == "true" && !idents_.contains(&e)) return Formula::top();
      if (e.name == "false" && !idents_.contains(&e)) return Formula::bottom();
      break;
    default:
      break;
  }
  return Formula::atom(normalize(build_term(e)));
}

Term Elaborator::build_goal(const Expr& e) {
  Ty goal = base_ty(types::kGoal);
  Ty form = base_ty(types::kAtom);
  if (e.kind == Expr::Kind::kOp && e.name == ",") {
    Term c = Term::var(names::kSpecAnd, Tag::kConstant, Ty::arrows(std::vector<Ty>{goal, goal}, goal));
    return Term::app(c, {build_goal(e.kids[0]), build_goal(e.kids[1])});
  }
  if (e.kind == Expr::Kind::kOp && e.name == "=>") {
    Term c = Term::var(names::kSpecImp, Tag::kConstant, Ty::arrows(std::vector<Ty>{form, goal}, goal));
    return Term::app(c, {build_term(e.kids[0]), build_goal(e.kids[1])});
  }
  if (is_pi(e)) {
    const Expr& lam = e.kids[1];
    Ty a = resolve(var_ty_.at({&lam, 0}), lam.loc);
    if (a.mentions(kPropType)) throw ParseError(lam.loc, "pi over formulas is not allowed");
    if (scope_.sig != nullptr) scope_.sig->check_type(a);
    build_lams_.push_back(lam.vars[0].first);
    Term body = build_goal(lam.kids[0]);
    build_lams_.pop_back();
    return Term::app(spec_pi(a), {Term::lam({a}, std::move(body), {lam.vars[0].first})});
  }
  if (e.kind == Expr::Kind::kIdent && e.name == "true" && !idents_.contains(&e))
    return Term::var(names::kSpecTrue, Tag::kConstant, goal);
  Term atm = Term::var(names::kAtm, Tag::kConstant, Ty::arrow(form, goal));
  return Term::app(atm, {build_term(e)});
}

Formula Elaborator::formula(const Expr& e) { return build_formula(e); }

Term Elaborator::term(const Expr& e) { return normalize(build_term(e)); }

Term Elaborator::goal(const Expr& e) { return normalize(build_goal(e)); }

Ty Elaborator::type_of(const Expr& e) { return resolve(term_ty_.at(&e), e.loc); }

std::vector<std::pair<std::string, Ty>> Elaborator::implicit_vars() const {
  std::vector<std::pair<std::string, Ty>> out;
  auto* self = const_cast<Elaborator*>(this);
  for (const auto& [name, t] : implicit_) out.emplace_back(name, self->resolve(t, Loc{}));
  return out;
}

std::map<std::string, Ty> Elaborator::new_nominals() const {
  std::map<std::string, Ty> out;
  auto* self = const_cast<Elaborator*>(this);
  for (const auto& [name, t] : new_nominals_) out.emplace(name, self->resolve(t, Loc{}));
  return out;
}

Formula elaborate_formula(const Expr& e, const ElabScope& scope) {
  Elaborator el(scope);
  el.add(e, Elaborator::Sort::kFormula);
  el.solve();
  return el.formula(e);
}

Term elaborate_term(const Expr& e, const ElabScope& scope, std::optional<Ty> expected) {
  Elaborator el(scope);
  el.add(e, Elaborator::Sort::kTerm, std::move(expected));
  el.solve();
  return el.term(e);
}

std::vector<Definition> elaborate_define(std::string_view text, Loc loc, Signature& sig,
                                         Flavor flavor, int block) {
  Parser p(tokenize(text, loc));
  std::vector<Definition> defs;
  do {
    Loc at = p.peek().loc;
    Definition d;
    d.pred = p.ident();
    p.expect(":");
    d.ty = surface_type(p.type());
    d.flavor = flavor;
    d.block = block;
    if (d.ty.head() != kPropType)
      throw ParseError(at, fmt::format("{} must have a type ending in prop", d.pred));
    if (sig.has_const(d.pred)) throw ParseError(at, fmt::format("{} is already declared", d.pred));
    for (const Ty& a : d.ty.args())
      if (a.mentions(kPropType))
        throw ParseError(at, fmt::format("arguments of {} cannot have type prop", d.pred));
    defs.push_back(std::move(d));
  } while (p.accept(","));
  if (!p.peek().is("by")) p.fail("expected 'by'");
  p.next();
  for (const Definition& d : defs) sig.add_const(d.pred, d.ty);

  while (!p.at_end() && !p.peek().is(".")) {
    Loc at = p.peek().loc;
    std::vector<std::pair<std::string, std::optional<Ty>>> nabla_vars;
    if (p.peek().kind == Token::Kind::kIdent && p.peek().text == "nabla") {
      p.next();
      while (!p.accept(",")) {
        if (p.accept("(")) {
          std::vector<std::string> names;
          while (!p.accept(":")) names.push_back(p.ident());
          Ty ty = p.type();
          p.expect(")");
          for (auto& n : names) nabla_vars.emplace_back(n, ty);
        } else {
          nabla_vars.emplace_back(p.ident(), std::nullopt);
        }
      }
    }
    Expr head = p.formula();
    std::optional<Expr> body;
    if (p.accept(":=")) body = p.formula();

    ElabScope scope;
    scope.sig = &sig;
    scope.implicit_vars = true;
    scope.new_nominals = false;
    Elaborator el(scope);
    for (const auto& [name, ty] : nabla_vars) el.push_local(name, ty);
    el.add(head, Elaborator::Sort::kFormula);
    if (body) el.add(*body, Elaborator::Sort::kFormula);
    el.solve();
    Formula hf = el.formula(head);
    if (!hf.is(Formula::Kind::kAtom) || !hf.ann().none())
      throw ParseError(at, "clause head must be an atomic formula");
    std::string pred = pred_of(hf.term());
    auto it = std::find_if(defs.begin(), defs.end(), [&](const Definition& d) { return d.pred == pred; });
    if (it == defs.end())
      throw ParseError(at, fmt::format("clause head {} does not belong to this definition", pred));
    DefClause c;
    c.head = hf.term();
    c.body = body ? el.formula(*body) : Formula::top();
    for (const auto& [name, ty] : nabla_vars) {
      Ty t = el.local_type(name);
      if (t.mentions(kPropType)) throw ParseError(at, "nabla is not allowed at type prop");
      c.nabla_vars.emplace_back(name, t);
    }
    std::vector<std::pair<std::string, Ty>> body_only;
    for (const auto& [name, ty] : el.implicit_vars()) {
      if (ty.mentions(kPropType))
        throw ParseError(at, fmt::format("variable {} cannot have type {}", name, ty.str()));
      if (occurs_atom(c.head, Tag::kLocal, name))
        c.forall_vars.emplace_back(name, ty);
      else
        body_only.emplace_back(name, ty);
    }
    for (auto b = body_only.rbegin(); b != body_only.rend(); ++b)
      c.body = Formula::binder(Formula::Kind::kExists, b->first, b->second, c.body);
    it->clauses.push_back(std::move(c));
    if (!p.accept(";")) break;
  }
  if (!p.at_end() && !p.accept(".")) p.fail("expected ';' or '.'");
  if (!p.at_end()) p.fail("unexpected text after definition");
  return defs;
}

}  // namespace nabla
