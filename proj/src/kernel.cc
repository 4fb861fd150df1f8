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

#include "nabla/kernel.h"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

#include "nabla/elab.h"
#include "nabla/printer.h"

namespace nabla {

// --- sequents -----------------------------------------------------------------

const Hyp* Sequent::hyp(std::string_view name) const {
  for (const Hyp& h : hyps)
    if (h.name == name) return &h;
  return nullptr;
}

const Hyp* Sequent::ih(std::string_view name) const {
  for (const Hyp& h : ihs)
    if (h.name == name) return &h;
  return nullptr;
}

std::string Sequent::add(Formula f, std::string name) {
  if (name.empty()) {
    do {
      name = fmt::format("H{}", next_hyp++);
    } while (hyp(name) != nullptr);
  } else if (hyp(name) != nullptr || ih(name) != nullptr) {
    throw TacticError(fmt::format("hypothesis {} already exists", name));
  }
  hyps.push_back(Hyp{name, std::move(f)});
  return name;
}

void Sequent::remove(std::string_view name) {
  std::erase_if(hyps, [&](const Hyp& h) { return h.name == name; });
}

std::set<std::string> Sequent::support() const {
  std::set<std::string> out = nabla::support(goal);
  for (const Hyp& h : hyps) out.merge(nabla::support(h.f));
  for (const Hyp& h : ihs) out.merge(nabla::support(h.f));
  return out;
}

VarSupply make_supply(const Env& env, const Sequent& s) {
  VarSupply supply;
  if (env.sig != nullptr)
    for (const auto& [name, ty] : env.sig->constants()) supply.reserve(name);
  for (const Term& v : s.vars) supply.reserve(v.name());
  auto note = [&](const Formula& f) {
    for (const Term& v : atoms_of(f, Tag::kEigen)) supply.reserve(v.name());
    for (const Term& v : atoms_of(f, Tag::kNominal)) supply.reserve(v.name());
  };
  note(s.goal);
  for (const Hyp& h : s.hyps) note(h.f);
  for (const Hyp& h : s.ihs) note(h.f);
  return supply;
}

void refresh_vars(Sequent& s) {
  std::vector<Term> found;
  auto note = [&](const Formula& f) {
    for (const Term& v : atoms_of(f, Tag::kEigen))
      if (std::none_of(found.begin(), found.end(),
                       [&](const Term& o) { return o.name() == v.name(); }))
        found.push_back(v);
  };
  for (const Hyp& h : s.ihs) note(h.f);
  for (const Hyp& h : s.hyps) note(h.f);
  note(s.goal);
  std::vector<Term> out;
  for (const Term& v : s.vars)
    if (std::any_of(found.begin(), found.end(), [&](const Term& o) { return o.name() == v.name(); }))
      out.push_back(v);
  for (const Term& v : found)
    if (std::none_of(out.begin(), out.end(), [&](const Term& o) { return o.name() == v.name(); }))
      out.push_back(v);
  s.vars = std::move(out);
}

Sequent subst_sequent(const Sequent& s, const Subst& theta) {
  Sequent out = s;
  if (theta.empty()) return out;
  out.goal = apply_subst(s.goal, theta);
  for (Hyp& h : out.hyps) h.f = apply_subst(h.f, theta);
  for (Hyp& h : out.ihs) h.f = apply_subst(h.f, theta);
  refresh_vars(out);
  return out;
}

Term raise(const Term& h, std::span<const Term> noms, VarSupply& supply) {
  if (noms.empty()) return h;
  std::vector<Ty> tys;
  for (const Term& n : noms) tys.push_back(n.ty());
  Term fresh = supply.fresh(h.name(), Tag::kEigen, Ty::arrows(tys, h.ty()), h.ts());
  return Term::app(fresh, std::vector<Term>(noms.begin(), noms.end()));
}

namespace {

std::vector<Ty> types_of(const std::vector<Term>& ts) {
  std::vector<Ty> out;
  for (const Term& t : ts) out.push_back(t.ty());
  return out;
}

Term applied(const Term& v, const std::vector<Term>& args) {
  return args.empty() ? v : Term::app(v, args);
}

bool is_const(const Term& t, const std::string& name) {
  return t.is_var(Tag::kConstant) && t.name() == name;
}

Annotation propagate(const Annotation& a) {
  if (a.mark == Mark::kAt || a.mark == Mark::kStar) return Annotation{Mark::kStar, a.level};
  return {};
}

// Injective assignments of `slots` types to candidate nominals; -1 = fresh.
void enumerate_choices(const std::vector<Ty>& slots, const std::vector<Term>& cands,
                       const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> choice(slots.size(), -1);
  std::vector<bool> used(cands.size(), false);
  std::function<void(std::size_t)> go = [&](std::size_t j) {
    if (j == slots.size()) {
      fn(choice);
      return;
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (used[i] || !(cands[i].ty() == slots[j])) continue;
      used[i] = true;
      choice[j] = static_cast<int>(i);
      go(j + 1);
      used[i] = false;
    }
    choice[j] = -1;
    go(j + 1);
  };
  go(0);
}

}  // namespace

// --- defL --------------------------------------------------------------------

std::vector<MatchResult> match_head(const Sequent& s, const Term& atom0, const DefClause& c,
                                    VarSupply& supply, std::uint32_t& clock) {
  Term atom = normalize(atom0);
  std::vector<Term> supp = atoms_of(atom, Tag::kNominal);
  std::set<std::string> avoid = s.support();
  for (const Term& n : supp) avoid.insert(n.name());
  std::vector<Ty> slots;
  for (const auto& [name, ty] : c.nabla_vars) slots.push_back(ty);

  std::vector<MatchResult> out;
  enumerate_choices(slots, supp, [&](const std::vector<int>& choice) {
    VarSupply sup = supply;
    std::map<std::string, Term> inst;
    std::set<std::string> taken;
    std::vector<Term> fresh;
    std::set<std::string> local_avoid = avoid;
    for (std::size_t j = 0; j < choice.size(); ++j) {
      const auto& [name, ty] = c.nabla_vars[j];
      if (choice[j] >= 0) {
        const Term& n = supp[static_cast<std::size_t>(choice[j])];
        taken.insert(n.name());
        inst[name] = n;
      } else {
        Term n = fresh_nominal(ty, local_avoid);
        local_avoid.insert(n.name());
        sup.reserve(n.name());
        fresh.push_back(n);
        inst[name] = n;
      }
    }
    Subst theta;
    if (!fresh.empty())
      for (const Term& v : s.vars) theta[v.name()] = raise(v, fresh, sup);
    Term target = normalize(apply_subst(atom, theta));
    std::vector<Term> over;
    for (const Term& n : supp)
      if (!taken.contains(n.name())) over.push_back(n);
    std::vector<Ty> over_tys = types_of(over);
    for (const auto& [name, ty] : c.forall_vars) {
      Term v = sup.fresh(name, Tag::kEigen, Ty::arrows(over_tys, ty), ++clock);
      inst[name] = applied(v, over);
    }
    Term head = normalize(replace_atoms(c.head, Tag::kLocal, inst));
    Unifier u(theta, sup, UnifyMode::kEigen);
    try {
      u.unify(head, target);
    } catch (const UnifyFailure&) {
      return;
    }
    Formula body = c.body;
    for (const auto& [name, value] : inst) body = replace_local(body, name, value);
    out.push_back(MatchResult{theta, fresh, apply_subst(body, theta), sup});
  });
  return out;
}

std::optional<Definition> definition_for(const Env& env, const Term& atom) {
  std::string pred = pred_of(atom);
  if (const Definition* d = env.defs->find(pred)) return *d;
  if (pred != names::kName || atom.spine_args().size() != 1) return std::nullopt;
  const Term& head = atom.spine_head();
  Ty arg = head.ty().args()[0];
  Definition d;
  d.pred = pred;
  d.ty = head.ty();
  d.flavor = Flavor::kPlain;
  d.block = -1;
  DefClause c;
  c.nabla_vars.emplace_back("x", arg);
  c.head = Term::app(head, {Term::var("x", Tag::kLocal, arg)});
  c.body = Formula::top();
  d.clauses.push_back(std::move(c));
  return d;
}

bool coinductive(const Env& env, const Formula& atom) {
  if (!atom.is(Formula::Kind::kAtom)) return false;
  const Definition* d = env.defs->find(pred_of(atom.term()));
  return d != nullptr && d->flavor == Flavor::kCoinductive;
}

Formula mark_block(const Formula& f, const ClauseSet& defs, int block, Annotation ann) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kAtom: {
      const Definition* d = defs.find(pred_of(f.term()));
      if (d != nullptr && d->block == block) return Formula::atom(f.term(), ann);
      return f;
    }
    case K::kAnd:
      return Formula::conj(mark_block(f.left(), defs, block, ann),
                           mark_block(f.right(), defs, block, ann));
    case K::kOr:
      return Formula::disj(mark_block(f.left(), defs, block, ann),
                           mark_block(f.right(), defs, block, ann));
    case K::kImp:
      return Formula::imp(f.left(), mark_block(f.right(), defs, block, ann));
    case K::kForall:
    case K::kExists:
    case K::kNabla:
      return Formula::binder(f.kind(), f.var_name(), f.var_ty(),
                             mark_block(f.body(), defs, block, ann));
    default:
      return f;
  }
}

Formula spec_goal_formula(const Env& env, const Term& ctx, const Term& goal0, Annotation ann,
                          VarSupply& supply) {
  Term goal = normalize(goal0);
  const Term& h = goal.spine_head();
  auto args = goal.spine_args();
  if (is_const(h, names::kSpecTrue)) return Formula::top();
  if (is_const(h, names::kSpecAnd))
    return Formula::conj(spec_goal_formula(env, ctx, args[0], ann, supply),
                         spec_goal_formula(env, ctx, args[1], ann, supply));
  if (is_const(h, names::kSpecImp)) {
    Term extended = Term::app(env.sig->constant(names::kCons), {args[0], ctx});
    return spec_goal_formula(env, extended, args[1], ann, supply);
  }
  if (is_spec_pi(h) && args.size() == 1) {
    Ty ty = h.ty().args()[0].args()[0];
    const Term& abs = args[0];
    std::string hint = abs.is_lam() && !abs.hints().empty() && !abs.hints()[0].empty()
                           ? abs.hints()[0]
                           : std::string("x");
    std::string name = supply.fresh_name(hint);
    Term x = Term::var(name, Tag::kLocal, ty);
    Term body = reduce_app(abs, std::vector<Term>{x});
    return Formula::binder(Formula::Kind::kNabla, name, ty,
                           spec_goal_formula(env, ctx, body, ann, supply));
  }
  if (is_const(h, names::kAtm) && args.size() == 1) return Formula::obj(ctx, args[0], ann);
  throw TacticError(fmt::format("cannot analyze specification goal {}", show(goal)));
}

void add_decomposed(Sequent& s, const Formula& f, VarSupply& supply) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
      return;
    case K::kAnd:
      add_decomposed(s, f.left(), supply);
      add_decomposed(s, f.right(), supply);
      return;
    case K::kExists: {
      std::vector<Term> noms = nominals_of(f);
      Term v = supply.fresh(f.var_name(), Tag::kEigen,
                            Ty::arrows(types_of(noms), f.var_ty()), ++s.clock);
      add_decomposed(s, f.instantiate(applied(v, noms)), supply);
      return;
    }
    case K::kNabla: {
      Term n = fresh_nominal(f.var_ty(), support(f));
      add_decomposed(s, f.instantiate(n), supply);
      return;
    }
    default:
      s.add(f);
  }
}

namespace {

std::vector<Sequent> case_atom(const Env& env, const Sequent& base, const Formula& f,
                               VarSupply& supply) {
  std::optional<Definition> def = definition_for(env, f.term());
  if (!def) throw TacticError(fmt::format("{} is not a defined predicate", pred_of(f.term())));
  Annotation prop = propagate(f.ann());
  std::uint32_t clock = base.clock;
  std::vector<Sequent> out;
  for (const DefClause& c : def->clauses) {
    for (MatchResult& r : match_head(base, f.term(), c, supply, clock)) {
      Sequent ns = subst_sequent(base, r.theta);
      ns.clock = clock;
      Formula body = prop.none() ? r.body : mark_block(r.body, *env.defs, def->block, prop);
      add_decomposed(ns, body, r.supply);
      refresh_vars(ns);
      clock = std::max(clock, ns.clock);
      out.push_back(std::move(ns));
    }
  }
  return out;
}

std::vector<Sequent> case_obj(const Env& env, const Sequent& base, const Formula& f,
                              VarSupply& supply) {
  const Term& ctx = f.term2();
  const Term& goal = f.term();
  std::vector<Term> supp = nominals_of(f);
  std::vector<Ty> supp_tys = types_of(supp);
  Annotation prop = propagate(f.ann());
  std::uint32_t clock = base.clock;
  std::vector<Sequent> out;

  for (const DefClause& c : env.defs->get(names::kProg).clauses) {
    const Term& chead = c.head.args()[0].spine_head();
    const Term& ghead = goal.spine_head();
    if (chead.is_var(Tag::kConstant) && ghead.is_var(Tag::kConstant) && chead != ghead) continue;
    VarSupply sup = supply;
    std::map<std::string, Term> inst;
    for (const auto& [name, ty] : c.forall_vars) {
      Term v = sup.fresh(name, Tag::kEigen, Ty::arrows(supp_tys, ty), ++clock);
      inst[name] = applied(v, supp);
    }
    Term head = normalize(replace_atoms(c.head, Tag::kLocal, inst));
    Subst theta;
    Unifier u(theta, sup, UnifyMode::kEigen);
    try {
      u.unify(head.args()[0], goal);
    } catch (const UnifyFailure&) {
      continue;
    }
    Sequent ns = subst_sequent(base, theta);
    ns.clock = clock;
    Formula body = spec_goal_formula(env, apply_subst(ctx, theta), apply_subst(head.args()[1], theta),
                                     prop, sup);
    add_decomposed(ns, body, sup);
    refresh_vars(ns);
    out.push_back(std::move(ns));
  }

  Term tail;
  std::vector<Term> elems;
  split_context(ctx, tail, elems);
  for (const Term& e : elems) {
    Subst theta;
    VarSupply sup = supply;
    Unifier u(theta, sup, UnifyMode::kEigen);
    try {
      u.unify(e, goal);
    } catch (const UnifyFailure&) {
      continue;
    }
    Sequent ns = subst_sequent(base, theta);
    ns.clock = clock;
    out.push_back(std::move(ns));
  }
  if (tail.valid()) {
    Sequent ns = base;
    ns.clock = clock;
    Term member = env.sig->constant(names::kMember);
    ns.add(Formula::atom(Term::app(member, {goal, tail})));
    refresh_vars(ns);
    out.push_back(std::move(ns));
  }
  return out;
}

}  // namespace

std::vector<Sequent> case_hyp(const Env& env, const Sequent& s, std::string_view name, bool keep) {
  using K = Formula::Kind;
  const Hyp* h = s.hyp(name);
  if (h == nullptr) {
    if (s.ih(name) != nullptr) throw TacticError(fmt::format("cannot case on {}", name));
    throw TacticError(fmt::format("unknown hypothesis {}", name));
  }
  Formula f = h->f;
  Sequent base = s;
  if (!keep) base.remove(name);
  VarSupply supply = make_supply(env, s);
  std::vector<Sequent> out;
  switch (f.kind()) {
    case K::kFalse:
      return out;
    case K::kTrue:
    case K::kAnd:
    case K::kExists:
    case K::kNabla:
      add_decomposed(base, f, supply);
      refresh_vars(base);
      out.push_back(std::move(base));
      return out;
    case K::kOr: {
      Sequent a = base, b = base;
      a.add(f.left());
      b.add(f.right());
      out.push_back(std::move(a));
      out.push_back(std::move(b));
      return out;
    }
    case K::kEq: {
      Subst theta;
      Unifier u(theta, supply, UnifyMode::kEigen);
      try {
        u.unify(f.term(), f.term2());
      } catch (const UnifyFailure&) {
        return out;
      }
      out.push_back(subst_sequent(base, theta));
      return out;
    }
    case K::kAtom:
      return case_atom(env, base, f, supply);
    case K::kObj:
      return case_obj(env, base, f, supply);
    default:
      throw TacticError(fmt::format("cannot case on {}", show(f)));
  }
}

// --- right rules ---------------------------------------------------------------

Sequent intros(const Env& env, const Sequent& s, const std::vector<std::string>& names) {
  using K = Formula::Kind;
  Sequent out = s;
  VarSupply supply = make_supply(env, s);
  std::size_t next_name = 0;
  bool any = false;
  for (;;) {
    const Formula g = out.goal;
    if (g.is(K::kForall)) {
      std::vector<Term> noms = nominals_of(g);
      Term v = Term::var(supply.fresh_name(g.var_name()), Tag::kEigen,
                         Ty::arrows(types_of(noms), g.var_ty()), ++out.clock);
      out.goal = g.instantiate(applied(v, noms));
    } else if (g.is(K::kImp)) {
      std::string name = next_name < names.size() ? names[next_name++] : std::string();
      out.add(g.left(), name);
      out.goal = g.right();
    } else if (g.is(K::kNabla)) {
      Term n = fresh_nominal(g.var_ty(), out.support());
      out.goal = g.instantiate(n);
    } else {
      break;
    }
    any = true;
  }
  if (!any) throw TacticError("nothing to introduce");
  refresh_vars(out);
  return out;
}

Sequent unfold(const Env& env, const Sequent& s) {
  const Formula& g = s.goal;
  VarSupply base_supply = make_supply(env, s);
  std::uint32_t clock = s.clock;
  if (g.is(Formula::Kind::kAtom)) {
    std::optional<Definition> def = definition_for(env, g.term());
    if (!def) throw TacticError(fmt::format("{} is not a defined predicate", pred_of(g.term())));
    Annotation prop = propagate(g.ann());
    std::vector<Term> supp = atoms_of(g.term(), Tag::kNominal);
    for (const DefClause& c : def->clauses) {
      std::vector<Ty> slots;
      for (const auto& [name, ty] : c.nabla_vars) slots.push_back(ty);
      std::optional<Formula> found;
      enumerate_choices(slots, supp, [&](const std::vector<int>& choice) {
        if (found || std::count(choice.begin(), choice.end(), -1) > 0) return;
        VarSupply sup = base_supply;
        std::map<std::string, Term> inst;
        std::set<std::string> taken;
        for (std::size_t j = 0; j < choice.size(); ++j) {
          const Term& n = supp[static_cast<std::size_t>(choice[j])];
          inst[c.nabla_vars[j].first] = n;
          taken.insert(n.name());
        }
        std::vector<Term> over;
        for (const Term& n : supp)
          if (!taken.contains(n.name())) over.push_back(n);
        for (const auto& [name, ty] : c.forall_vars) {
          Term v = sup.fresh(name, Tag::kLogic, Ty::arrows(types_of(over), ty), ++clock);
          inst[name] = applied(v, over);
        }
        Subst theta;
        Unifier u(theta, sup, UnifyMode::kLogic);
        try {
          u.unify(normalize(replace_atoms(c.head, Tag::kLocal, inst)), g.term());
        } catch (const UnifyFailure&) {
          return;
        }
        Formula body = c.body;
        for (const auto& [name, value] : inst) body = replace_local(body, name, value);
        body = apply_subst(body, theta);
        if (has_logic_vars(body))
          throw TacticError("unfolding leaves uninstantiated variables");
        found = body;
      });
      if (found) {
        Sequent out = s;
        out.clock = clock;
        out.goal = prop.none() ? *found : mark_block(*found, *env.defs, def->block, prop);
        refresh_vars(out);
        return out;
      }
    }
    throw TacticError("no clause matches the goal");
  }
  if (g.is(Formula::Kind::kObj)) {
    std::vector<Term> supp = nominals_of(g);
    for (const DefClause& c : env.defs->get(names::kProg).clauses) {
      VarSupply sup = base_supply;
      std::map<std::string, Term> inst;
      for (const auto& [name, ty] : c.forall_vars) {
        Term v = sup.fresh(name, Tag::kLogic, Ty::arrows(types_of(supp), ty), ++clock);
        inst[name] = applied(v, supp);
      }
      Term head = normalize(replace_atoms(c.head, Tag::kLocal, inst));
      Subst theta;
      Unifier u(theta, sup, UnifyMode::kLogic);
      try {
        u.unify(head.args()[0], g.term());
      } catch (const UnifyFailure&) {
        continue;
      }
      Formula body = spec_goal_formula(env, g.term2(), apply_subst(head.args()[1], theta), {}, sup);
      if (has_logic_vars(body)) throw TacticError("unfolding leaves uninstantiated variables");
      Sequent out = s;
      out.clock = clock;
      out.goal = body;
      refresh_vars(out);
      return out;
    }
    throw TacticError("no clause matches the goal");
  }
  throw TacticError("the goal is not an atomic formula");
}

// --- identity -------------------------------------------------------------------

namespace {

bool included(const Term& small, const Term& large) {
  Term ts, tl;
  std::vector<Term> es, el;
  split_context(small, ts, es);
  split_context(large, tl, el);
  if (ts.valid() && !(tl.valid() && ts == tl)) return false;
  return std::all_of(es.begin(), es.end(), [&](const Term& e) {
    return std::find(el.begin(), el.end(), e) != el.end();
  });
}

}  // namespace

bool closes(const Env& env, const Formula& hyp, const Formula& goal) {
  if (hyp.ann().mark == Mark::kStar && coinductive(env, hyp) && !(goal.ann() == hyp.ann()))
    return false;
  if (hyp.kind() != goal.kind()) return false;
  if (form_equiv(hyp, goal)) return true;
  return hyp.is(Formula::Kind::kObj) && hyp.term() == goal.term() &&
         included(hyp.term2(), goal.term2());
}

bool trivially_closed(const Env& env, const Sequent& s) {
  if (s.goal.is(Formula::Kind::kTrue)) return true;
  if (s.goal.is(Formula::Kind::kEq) && normalize(s.goal.term()) == normalize(s.goal.term2()))
    return true;
  for (const Hyp& h : s.hyps) {
    if (h.f.is(Formula::Kind::kFalse)) return true;
    if (closes(env, h.f, s.goal)) return true;
  }
  return false;
}

// --- apply ------------------------------------------------------------------------

std::pair<std::vector<Binder>, Formula> strip_prefix(const Formula& f) {
  std::vector<Binder> out;
  Formula cur = f;
  while (cur.is(Formula::Kind::kForall) || cur.is(Formula::Kind::kNabla)) {
    out.push_back(Binder{cur.kind(), cur.var_name(), cur.var_ty()});
    cur = cur.body();
  }
  return {out, cur};
}

ApplyResult apply_formula(const Env& env, const Sequent& s, const Formula& target,
                          const std::vector<std::string>& args,
                          const std::vector<Witness>& withs) {
  using K = Formula::Kind;
  auto [prefix, matrix] = strip_prefix(target);
  for (const Witness& w : withs) {
    bool known = std::any_of(prefix.begin(), prefix.end(), [&](const Binder& b) {
      return b.kind == K::kForall && b.name == w.var;
    });
    if (!known) throw TacticError(fmt::format("unknown variable {}", w.var));
  }
  std::vector<std::optional<Formula>> given;
  std::vector<Term> supp;
  auto note = [&](const std::vector<Term>& noms) {
    for (const Term& n : noms)
      if (std::none_of(supp.begin(), supp.end(), [&](const Term& o) { return o.name() == n.name(); }))
        supp.push_back(n);
  };
  for (const std::string& a : args) {
    if (a == "_") {
      given.emplace_back();
      continue;
    }
    const Hyp* h = s.hyp(a);
    if (h == nullptr) throw TacticError(fmt::format("unknown hypothesis {}", a));
    given.emplace_back(h->f);
    note(nominals_of(h->f));
  }
  note(nominals_of(target));
  for (const Witness& w : withs) note(atoms_of(w.value, Tag::kNominal));

  std::vector<std::size_t> nabla_pos;
  std::vector<Ty> slots;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (prefix[i].kind == K::kNabla) {
      nabla_pos.push_back(i);
      slots.push_back(prefix[i].ty);
    }
  std::set<std::string> avoid = s.support();
  for (const Term& n : supp) avoid.insert(n.name());
  std::vector<Term> fresh;
  for (const Ty& ty : slots) {
    fresh.push_back(fresh_nominal(ty, avoid));
    avoid.insert(fresh.back().name());
  }

  std::string error = "no instantiation makes the arguments match";
  std::optional<ApplyResult> result;
  enumerate_choices(slots, supp, [&](const std::vector<int>& choice) {
    if (result) return;
    std::vector<Term> assigned;
    for (std::size_t j = 0; j < choice.size(); ++j)
      assigned.push_back(choice[j] >= 0 ? supp[static_cast<std::size_t>(choice[j])] : fresh[j]);
    VarSupply sup = make_supply(env, s);
    for (const Term& n : fresh) sup.reserve(n.name());
    std::uint32_t clock = s.clock;
    Formula cur = target;
    std::size_t seen_nabla = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      const Binder& b = prefix[i];
      Term value;
      if (b.kind == K::kNabla) {
        value = assigned[seen_nabla++];
      } else {
        auto w = std::find_if(withs.begin(), withs.end(),
                              [&](const Witness& x) { return x.var == b.name; });
        if (w != withs.end()) {
          value = w->value;
        } else {
          std::vector<Term> over;
          for (std::size_t j = 0; j < seen_nabla; ++j) over.push_back(assigned[j]);
          for (const Term& n : supp) {
            bool later = false;
            for (std::size_t j = seen_nabla; j < assigned.size(); ++j)
              later = later || assigned[j].name() == n.name();
            bool dup = std::any_of(over.begin(), over.end(),
                                   [&](const Term& o) { return o.name() == n.name(); });
            if (!later && !dup) over.push_back(n);
          }
          Term v = sup.fresh(b.name, Tag::kLogic, Ty::arrows(types_of(over), b.ty), ++clock);
          value = applied(v, over);
        }
      }
      cur = cur.instantiate(value);
    }
    std::vector<Formula> premises;
    for (std::size_t k = 0; k < given.size(); ++k) {
      if (!cur.is(K::kImp)) {
        error = "too many arguments";
        return;
      }
      premises.push_back(cur.left());
      cur = cur.right();
    }
    Subst theta;
    Unifier u(theta, sup, UnifyMode::kLogic);
    for (std::size_t k = 0; k < given.size(); ++k) {
      if (!given[k]) continue;
      const Formula& p = premises[k];
      const Formula& h = *given[k];
      if (p.ann().mark == Mark::kStar && !(h.ann() == p.ann())) {
        error = fmt::format("{} does not carry the annotation {}", args[k], p.ann().str());
        return;
      }
      try {
        unify_formulas(u, sup, p, h);
      } catch (const UnifyFailure&) {
        error = fmt::format("{} does not match {}", args[k], show(apply_subst(p, theta)));
        return;
      }
    }
    ApplyResult r;
    r.conclusion = apply_subst(cur, theta);
    bool open = has_logic_vars(r.conclusion);
    for (std::size_t k = 0; k < given.size(); ++k) {
      if (given[k]) continue;
      r.holes.push_back(apply_subst(premises[k], theta));
      open = open || has_logic_vars(r.holes.back());
    }
    if (open) {
      error = "cannot determine an instantiation; supply it with 'with'";
      return;
    }
    result = std::move(r);
  });
  if (!result) throw TacticError(error);
  return *result;
}

}  // namespace nabla
