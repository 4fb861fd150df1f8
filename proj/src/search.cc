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

#include "nabla/search.h"

#include <functional>

#include "nabla/printer.h"

namespace nabla {

namespace {

using Cont = std::function<bool(Subst&)>;
using Hyps = std::vector<Formula>;

std::vector<Ty> types_of(const std::vector<Term>& ts) {
  std::vector<Ty> out;
  for (const Term& t : ts) out.push_back(t.ty());
  return out;
}

Term applied(const Term& v, const std::vector<Term>& args) {
  return args.empty() ? v : Term::app(v, args);
}

class Searcher {
 public:
  Searcher(const Env& env, const Sequent& s) : env_(env), supply_(make_supply(env, s)), clock_(s.clock) {}

  bool prove(const Hyps& hyps, const Formula& goal0, int depth, Subst& s, const Cont& k) {
    using K = Formula::Kind;
    Formula goal = apply_subst(goal0, s);
    switch (goal.kind()) {
      case K::kTrue:
        return k(s);
      case K::kEq: {
        Subst s1 = s;
        Unifier u(s1, supply_, UnifyMode::kLogic);
        try {
          u.unify(goal.term(), goal.term2());
        } catch (const std::runtime_error&) {
          return from_false(hyps, s, k);
        }
        return k(s1);
      }
      case K::kAnd: {
        Formula right = goal.right();
        return prove(hyps, goal.left(), depth, s,
                     [&](Subst& s1) { return prove(hyps, right, depth, s1, k); });
      }
      case K::kOr:
        return prove(hyps, goal.left(), depth, s, k) || prove(hyps, goal.right(), depth, s, k);
      case K::kImp: {
        Hyps more = hyps;
        more.push_back(goal.left());
        return prove(more, goal.right(), depth, s, k);
      }
      case K::kForall: {
        std::vector<Term> noms = nominals_of(goal);
        Term v = supply_.fresh(goal.var_name(), Tag::kEigen,
                               Ty::arrows(types_of(noms), goal.var_ty()), ++clock_);
        return prove(hyps, goal.instantiate(applied(v, noms)), depth, s, k);
      }
      case K::kNabla: {
        Term n = fresh_nominal(goal.var_ty(), support(goal));
        return prove(hyps, goal.instantiate(n), depth, s, k);
      }
      case K::kExists: {
        std::vector<Term> noms = all_nominals(hyps, goal, s);
        Term v = supply_.fresh(goal.var_name(), Tag::kLogic,
                               Ty::arrows(types_of(noms), goal.var_ty()), ++clock_);
        return prove(hyps, goal.instantiate(applied(v, noms)), depth, s, k);
      }
      case K::kFalse:
        return from_false(hyps, s, k);
      case K::kAtom:
      case K::kObj:
        break;
    }
    if (close(hyps, goal, s, k)) return true;
    if (depth <= 0) return false;
    if (goal.is(K::kObj)) return prove_obj(hyps, goal, depth, s, k);
    return prove_atom(hyps, goal, depth, s, k);
  }

 private:
  bool from_false(const Hyps& hyps, Subst& s, const Cont& k) {
    for (const Formula& h : hyps)
      if (h.is(Formula::Kind::kFalse)) return k(s);
    return false;
  }

  std::vector<Term> all_nominals(const Hyps& hyps, const Formula& goal, const Subst& s) {
    std::vector<Term> out = nominals_of(goal);
    for (const Formula& h : hyps)
      for (const Term& n : nominals_of(apply_subst(h, s)))
        if (std::none_of(out.begin(), out.end(), [&](const Term& o) { return o.name() == n.name(); }))
          out.push_back(n);
    return out;
  }

  bool close(const Hyps& hyps, const Formula& goal, Subst& s, const Cont& k) {
    bool open = has_logic_vars(goal);
    for (const Formula& h0 : hyps) {
      Formula h = apply_subst(h0, s);
      if (h.is(Formula::Kind::kFalse)) return k(s);
      if (!open && !has_logic_vars(h)) {
        if (closes(env_, h, goal) && k(s)) return true;
        continue;
      }
      if (h.kind() != goal.kind()) continue;
      if (h.ann().mark == Mark::kStar && coinductive(env_, h) && !(goal.ann() == h.ann())) continue;
      Subst s1 = s;
      Unifier u(s1, supply_, UnifyMode::kLogic);
      try {
        unify_formulas(u, supply_, h, goal);
      } catch (const std::runtime_error&) {
        continue;
      }
      if (k(s1)) return true;
    }
    return false;
  }

  bool prove_atom(const Hyps& hyps, const Formula& goal, int depth, Subst& s, const Cont& k) {
    const Term& atom = goal.term();
    if (pred_of(atom) == names::kName && !env_.defs->defines(names::kName)) {
      return atom.spine_args().size() == 1 && atom.spine_args()[0].is_var(Tag::kNominal) && k(s);
    }
    std::optional<Definition> def = definition_for(env_, atom);
    if (!def) return false;
    Annotation prop;
    if (goal.ann().mark == Mark::kAt || goal.ann().mark == Mark::kStar)
      prop = Annotation{Mark::kStar, goal.ann().level};
    std::vector<Term> supp = atoms_of(atom, Tag::kNominal);
    for (const DefClause& c : def->clauses) {
      if (try_clause(hyps, atom, c, supp, *def, prop, depth, s, k)) return true;
    }
    return false;
  }

  bool try_clause(const Hyps& hyps, const Term& atom, const DefClause& c,
                  const std::vector<Term>& supp, const Definition& def, const Annotation& prop,
                  int depth, Subst& s, const Cont& k) {
    std::size_t m = c.nabla_vars.size();
    std::vector<int> choice(m, -1);
    std::vector<bool> used(supp.size(), false);
    std::function<bool(std::size_t)> go = [&](std::size_t j) -> bool {
      if (j < m) {
        for (std::size_t i = 0; i < supp.size(); ++i) {
          if (used[i] || !(supp[i].ty() == c.nabla_vars[j].second)) continue;
          used[i] = true;
          choice[j] = static_cast<int>(i);
          bool ok = go(j + 1);
          used[i] = false;
          if (ok) return true;
        }
        return false;
      }
      std::map<std::string, Term> inst;
      std::vector<Term> over;
      for (std::size_t i = 0; i < supp.size(); ++i)
        if (!used[i]) over.push_back(supp[i]);
      for (std::size_t jj = 0; jj < m; ++jj)
        inst[c.nabla_vars[jj].first] = supp[static_cast<std::size_t>(choice[jj])];
      for (const auto& [name, ty] : c.forall_vars) {
        Term v = supply_.fresh(name, Tag::kLogic, Ty::arrows(types_of(over), ty), ++clock_);
        inst[name] = applied(v, over);
      }
      Subst s1 = s;
      Unifier u(s1, supply_, UnifyMode::kLogic);
      try {
        u.unify(normalize(replace_atoms(c.head, Tag::kLocal, inst)), atom);
      } catch (const std::runtime_error&) {
        return false;
      }
      Formula body = c.body;
      for (const auto& [name, value] : inst) body = replace_local(body, name, value);
      if (!prop.none()) body = mark_block(body, *env_.defs, def.block, prop);
      return prove(hyps, body, depth - 1, s1, k);
    };
    return go(0);
  }

  bool prove_obj(const Hyps& hyps, const Formula& goal, int depth, Subst& s, const Cont& k) {
    const Term& ctx = goal.term2();
    const Term& a = goal.term();
    Term tail;
    std::vector<Term> elems;
    split_context(ctx, tail, elems);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
      Subst s1 = s;
      Unifier u(s1, supply_, UnifyMode::kLogic);
      try {
        u.unify(*it, a);
      } catch (const std::runtime_error&) {
        continue;
      }
      if (k(s1)) return true;
    }
    if (tail.valid()) {
      Formula member = Formula::atom(Term::app(env_.sig->constant(names::kMember), {a, tail}));
      if (prove(hyps, member, depth - 1, s, k)) return true;
    }
    std::vector<Term> supp = nominals_of(goal);
    const Term& ghead = a.spine_head();
    for (const DefClause& c : env_.defs->get(names::kProg).clauses) {
      const Term& chead = c.head.args()[0].spine_head();
      if (chead.is_var(Tag::kConstant) && ghead.is_var(Tag::kConstant) && chead != ghead) continue;
      std::map<std::string, Term> inst;
      for (const auto& [name, ty] : c.forall_vars) {
        Term v = supply_.fresh(name, Tag::kLogic, Ty::arrows(types_of(supp), ty), ++clock_);
        inst[name] = applied(v, supp);
      }
      Term head = normalize(replace_atoms(c.head, Tag::kLocal, inst));
      Subst s1 = s;
      Unifier u(s1, supply_, UnifyMode::kLogic);
      try {
        u.unify(head.args()[0], a);
      } catch (const std::runtime_error&) {
        continue;
      }
      Formula body = spec_goal_formula(env_, ctx, apply_subst(head.args()[1], s1), {}, supply_);
      if (prove(hyps, body, depth - 1, s1, k)) return true;
    }
    return false;
  }

  const Env& env_;
  VarSupply supply_;
  std::uint32_t clock_;
};

}  // namespace

bool search(const Env& env, const Sequent& s, int depth) {
  if (trivially_closed(env, s)) return true;
  Hyps hyps;
  for (const Hyp& h : s.hyps) hyps.push_back(h.f);
  for (int d = 1; d <= depth; ++d) {
    Searcher searcher(env, s);
    Subst subst;
    try {
      if (searcher.prove(hyps, s.goal, d, subst, [](Subst&) { return true; })) return true;
    } catch (const OutsideFragment&) {
    }
  }
  return false;
}

}  // namespace nabla
