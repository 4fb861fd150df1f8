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

#include "nabla/spec.h"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

#include "nabla/elab.h"
#include "nabla/printer.h"
#include "nabla/unify.h"

namespace nabla {

namespace {

Ty base(const std::string& s) { return Ty::base(s); }

Term constant(const Signature& sig, const std::string& name) { return sig.constant(name); }

bool reserved_kind(const std::string& name) {
  return name == types::kProp || name == types::kAtom || name == types::kGoal ||
         name == types::kList || name == types::kNat || name == "prop";
}

// `o` in specification files denotes atomic formulas.
Ty spec_type(const Ty& ty) {
  std::vector<Ty> args;
  for (const Ty& a : ty.args()) args.push_back(spec_type(a));
  return Ty::arrows(args, base(ty.head() == types::kProp ? types::kAtom : ty.head()));
}

void collect_pi_types(const Term& t, SpecProgram& p) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      if (is_spec_pi(t)) p.note_pi_type(t.ty().args()[0].args()[0]);
      return;
    case Term::Kind::kBound:
      return;
    case Term::Kind::kApp:
      collect_pi_types(t.fn(), p);
      for (const Term& a : t.args()) collect_pi_types(a, p);
      return;
    case Term::Kind::kLam:
      collect_pi_types(t.body(), p);
      return;
  }
}

bool is_const(const Term& t, const std::string& name) {
  return t.is_var(Tag::kConstant) && t.name() == name;
}

}  // namespace

Signature base_signature() {
  Signature sig;
  for (const std::string& k : {types::kProp, types::kAtom, types::kGoal, types::kList, types::kNat})
    sig.add_kind(k);
  Ty form = base(types::kAtom), goal = base(types::kGoal), list = base(types::kList),
     nat = base(types::kNat);
  sig.add_const(names::kNil, list);
  sig.add_const(names::kCons, Ty::arrows(std::vector<Ty>{form, list}, list));
  sig.add_const(names::kZero, nat);
  sig.add_const(names::kSucc, Ty::arrow(nat, nat));
  sig.add_const(names::kSpecTrue, goal);
  sig.add_const(names::kSpecAnd, Ty::arrows(std::vector<Ty>{goal, goal}, goal));
  sig.add_const(names::kSpecImp, Ty::arrows(std::vector<Ty>{form, goal}, goal));
  sig.add_const(names::kAtm, Ty::arrow(form, goal));
  return sig;
}

void SpecProgram::note_pi_type(const Ty& ty) {
  if (std::find(pi_types_.begin(), pi_types_.end(), ty) == pi_types_.end())
    pi_types_.push_back(ty);
}

void SpecProgram::load_sig(std::string_view text) {
  for (const Command& cmd : split_commands(text)) {
    Parser p(tokenize(cmd.text, cmd.loc));
    if (p.at_end()) continue;
    std::string word = p.ident();
    if (word == "sig" || word == "module") continue;
    if (word == "kind") {
      std::vector<std::pair<std::string, Loc>> names;
      do {
        Loc at = p.peek().loc;
        names.emplace_back(p.ident(), at);
      } while (p.accept(","));
      if (!p.peek().is("type")) p.fail("expected 'type'");
      p.next();
      p.expect(".");
      for (const auto& [n, at] : names) {
        if (reserved_kind(n)) throw ParseError(at, fmt::format("type {} is reserved", n));
        if (!sig_.has_kind(n)) kinds_.push_back(n);
        sig_.add_kind(n);
      }
    } else if (word == "type") {
      std::vector<std::pair<std::string, Loc>> names;
      do {
        Loc at = p.peek().loc;
        names.emplace_back(p.ident(), at);
      } while (p.accept(","));
      Loc at = p.peek().loc;
      Ty ty = spec_type(p.type());
      p.expect(".");
      try {
        sig_.check_type(ty);
      } catch (const SignatureError& e) {
        throw ParseError(at, e.what());
      }
      if (ty.head() == types::kGoal || ty.mentions(types::kGoal) || ty.mentions(types::kList))
        throw ParseError(at, "reserved type in declaration");
      for (const auto& [n, nat] : names) {
        if (sig_.has_const(n)) throw ParseError(nat, fmt::format("{} is already declared", n));
        sig_.add_const(n, ty);
        consts_.push_back(n);
      }
    } else {
      throw ParseError(cmd.loc, fmt::format("unknown signature declaration '{}'", word));
    }
  }
}

void SpecProgram::load_mod(std::string_view text) {
  for (const Command& cmd : split_commands(text)) {
    Parser p(tokenize(cmd.text, cmd.loc));
    if (p.at_end()) continue;
    if (p.peek().is("module") || p.peek().is("sig") || p.peek().is("accumulate")) continue;
    Expr head = p.spec_goal();
    std::optional<Expr> body;
    if (p.accept(":-")) body = p.spec_goal();
    if (!p.accept(".")) p.fail("expected '.' at the end of a clause");
    if (!p.at_end()) p.fail("unexpected text after clause");
    if (head.kind == Expr::Kind::kOp || head.kind == Expr::Kind::kLam)
      throw ParseError(head.loc, "clause head must be an atomic formula");

    ElabScope scope;
    scope.sig = &sig_;
    scope.implicit_vars = true;
    scope.new_nominals = false;
    Elaborator el(scope);
    el.add(head, Elaborator::Sort::kTerm, base(types::kAtom));
    if (body) el.add(*body, Elaborator::Sort::kGoal);
    el.solve();
    SpecClause c;
    c.loc = cmd.loc;
    c.head = el.term(head);
    const Term& h = c.head.spine_head();
    if (!h.is_var(Tag::kConstant))
      throw ParseError(head.loc, "clause head must start with a declared predicate");
    c.body = body ? el.goal(*body) : sig_.constant(names::kSpecTrue);
    for (const auto& [name, ty] : el.implicit_vars()) {
      if (ty.mentions(types::kAtom) || ty.mentions(types::kGoal) || ty.mentions(types::kProp))
        throw ParseError(cmd.loc, fmt::format("clause variable {} ranges over formulas", name));
      c.vars.emplace_back(name, ty);
    }
    collect_pi_types(c.body, *this);
    clauses_.push_back(std::move(c));
  }
}

void install_builtins(const SpecProgram& p, Signature& sig, ClauseSet& defs) {
  for (const Ty& ty : p.pi_types()) {
    Term pi = spec_pi(ty);
    sig.add_const(pi.name(), pi.ty());
  }
  auto define = [&](const std::string& text) {
    for (Definition& d : elaborate_define(text, Loc{}, sig, Flavor::kInductive, defs.next_block()))
      defs.add(std::move(d));
  };
  define("member : form -> olist -> prop by member A (A :: L) ; member A (B :: L) := member A L.");
  define("nat : nt -> prop by nat z ; nat (s N) := nat N.");

  Ty form = base(types::kAtom), goal = base(types::kGoal);
  Definition prog;
  prog.pred = names::kProg;
  prog.ty = Ty::arrows(std::vector<Ty>{form, goal}, base(types::kProp));
  prog.flavor = Flavor::kInductive;
  prog.block = defs.next_block();
  sig.add_const(prog.pred, prog.ty);
  Term prog_c = sig.constant(prog.pred);
  for (const SpecClause& c : p.clauses()) {
    DefClause d;
    d.forall_vars = c.vars;
    d.head = Term::app(prog_c, {c.head, c.body});
    d.body = Formula::top();
    prog.clauses.push_back(std::move(d));
  }
  defs.add(std::move(prog));

  std::string seq =
      "seq : nt -> olist -> goal -> prop by\n"
      "  seq (s N) L spec_true ;\n"
      "  seq (s N) L (spec_and G1 G2) := seq N L G1 /\\ seq N L G2 ;\n"
      "  seq (s N) L (spec_imp A G) := seq N (A :: L) G ;\n";
  for (const Ty& ty : p.pi_types())
    seq += fmt::format("  seq (s N) L ({} G) := nabla x, seq N L (G x) ;\n", spec_pi(ty).name());
  seq +=
      "  seq (s N) L (atm A) := member A L ;\n"
      "  seq (s N) L (atm A) := exists B, prog A B /\\ seq N L B.";
  define(seq);
}

// --- surface judgments ----------------------------------------------------------

Formula encode_surface(const Formula& obj) {
  Ty nt = base(types::kNat), list = base(types::kList), form = base(types::kAtom),
     goal = base(types::kGoal), o = base(types::kProp);
  Term n = Term::var("n", Tag::kLocal, nt);
  Term nat = Term::var(names::kNat, Tag::kConstant, Ty::arrow(nt, o));
  Term seq = Term::var(names::kSeq, Tag::kConstant, Ty::arrows(std::vector<Ty>{nt, list, goal}, o));
  Term atm = Term::var(names::kAtm, Tag::kConstant, Ty::arrow(form, goal));
  Formula body = Formula::conj(Formula::atom(Term::app(nat, {n})),
                               Formula::atom(Term::app(seq, {n, obj.term2(), Term::app(atm, {obj.term()})})));
  return Formula::binder(Formula::Kind::kExists, "n", nt, body);
}

std::optional<Formula> decode_surface(const Formula& f) {
  if (!f.is(Formula::Kind::kExists) || f.var_ty().head() != types::kNat) return std::nullopt;
  const Formula& b = f.body();
  if (!b.is(Formula::Kind::kAnd) || !b.left().is(Formula::Kind::kAtom) ||
      !b.right().is(Formula::Kind::kAtom))
    return std::nullopt;
  const Term& nat = b.left().term();
  const Term& seq = b.right().term();
  Term n = f.bound_var();
  if (!nat.is_app() || !is_const(nat.fn(), names::kNat) || nat.args()[0] != n) return std::nullopt;
  if (!seq.is_app() || !is_const(seq.fn(), names::kSeq) || seq.args().size() != 3 ||
      seq.args()[0] != n)
    return std::nullopt;
  const Term& g = seq.args()[2];
  if (!g.is_app() || !is_const(g.fn(), names::kAtm)) return std::nullopt;
  const Term& ctx = seq.args()[1];
  if (occurs_atom(ctx, Tag::kLocal, n.name()) || occurs_atom(g, Tag::kLocal, n.name()))
    return std::nullopt;
  return Formula::obj(ctx, g.args()[0]);
}

// --- hH² interpreter ----------------------------------------------------------------

namespace {

class HH2 {
 public:
  explicit HH2(const SpecProgram& p) : p_(p) {}

  using Cont = std::function<bool(Subst&)>;

  bool prove(const Term& ctx, const Term& goal0, int budget, Subst& s, const Cont& k) {
    if (budget <= 0) {
      bound_hit_ = true;
      return false;
    }
    Term goal = normalize(apply_subst(goal0, s));
    const Term& h = goal.spine_head();
    auto args = goal.spine_args();
    if (is_const(h, names::kSpecTrue)) return rule("true", [&] { return k(s); });
    if (is_const(h, names::kSpecAnd)) {
      Term g1 = args[0], g2 = args[1];
      return rule("and", [&] {
        return prove(ctx, g1, budget - 1, s,
                     [&](Subst& s1) { return prove(ctx, g2, budget - 1, s1, k); });
      });
    }
    if (is_const(h, names::kSpecImp)) {
      Term extended = Term::app(p_.sig().constant(names::kCons), {args[0], ctx});
      Term g = args[1];
      return rule("augment", [&] { return prove(extended, g, budget - 1, s, k); });
    }
    if (is_spec_pi(h)) {
      std::set<std::string> avoid = support(apply_subst(ctx, s));
      for (const std::string& n : support(goal)) avoid.insert(n);
      Ty ty = h.ty().args()[0].args()[0];
      Term c = fresh_nominal(ty, avoid);
      Term body = reduce_app(args[0], std::vector<Term>{c});
      return rule("generic", [&] { return prove(ctx, body, budget - 1, s, k); });
    }
    if (is_const(h, names::kAtm)) return backchain(ctx, args[0], budget, s, k);
    throw SpecError(fmt::format("not a specification goal: {}", show(goal)));
  }

  const std::vector<std::string>& trace() const { return trace_; }
  bool bound_hit() const { return bound_hit_; }
  std::vector<std::string> result;

 private:
  template <typename F>
  bool rule(const char* name, F&& body) {
    trace_.push_back(name);
    bool ok = body();
    trace_.pop_back();
    return ok;
  }

  bool backchain(const Term& ctx0, const Term& atom0, int budget, Subst& s, const Cont& k) {
    Term atom = normalize(apply_subst(atom0, s));
    Term ctx = normalize(apply_subst(ctx0, s));
    std::vector<Term> raise_over;
    {
      std::set<std::string> seen;
      std::vector<Term> noms = atoms_of(atom, Tag::kNominal);
      collect_atoms(ctx, Tag::kNominal, noms);
      for (const Term& n : noms)
        if (seen.insert(n.name()).second) raise_over.push_back(n);
    }
    for (const SpecClause& c : p_.clauses()) {
      if (c.head.spine_head() != atom.spine_head()) continue;
      std::map<std::string, Term> inst;
      for (const auto& [name, ty] : c.vars) {
        std::vector<Ty> tys;
        for (const Term& n : raise_over) tys.push_back(n.ty());
        Term v = supply_.fresh(name, Tag::kLogic, Ty::arrows(tys, ty));
        inst[name] = raise_over.empty() ? v : Term::app(v, raise_over);
      }
      Term head = normalize(replace_atoms(c.head, Tag::kLocal, inst));
      Subst s1 = s;
      Unifier u(s1, supply_, UnifyMode::kLogic);
      try {
        u.unify(head, atom);
      } catch (const UnifyFailure&) {
        continue;
      }
      Term body = normalize(replace_atoms(c.body, Tag::kLocal, inst));
      std::vector<Term> premises;
      flatten(body, premises);
      bool ok = rule("backchain", [&] { return prove_all(ctx, premises, 0, budget - 1, s1, k); });
      if (ok) return true;
    }
    Term t = ctx;
    while (t.is_app() && is_const(t.fn(), names::kCons)) {
      Term elem = t.args()[0];
      t = t.args()[1];
      Subst s1 = s;
      Unifier u(s1, supply_, UnifyMode::kLogic);
      try {
        u.unify(elem, atom);
      } catch (const UnifyFailure&) {
        continue;
      }
      if (rule("init", [&] { return k(s1); })) return true;
    }
    return false;
  }

  void flatten(const Term& g, std::vector<Term>& out) {
    if (g.is_app() && is_const(g.fn(), names::kSpecAnd)) {
      flatten(g.args()[0], out);
      flatten(g.args()[1], out);
    } else if (!is_const(g, names::kSpecTrue)) {
      out.push_back(g);
    }
  }

  bool prove_all(const Term& ctx, const std::vector<Term>& gs, std::size_t i, int budget, Subst& s,
                 const Cont& k) {
    if (i == gs.size()) return k(s);
    return prove(ctx, gs[i], budget, s,
                 [&](Subst& s1) { return prove_all(ctx, gs, i + 1, budget, s1, k); });
  }

  const SpecProgram& p_;
  VarSupply supply_;
  std::vector<std::string> trace_;
  bool bound_hit_ = false;
};

}  // namespace

HH2Result hh2_prove(const SpecProgram& p, const Term& context, const Term& goal, int bound) {
  HH2Result out;
  for (int h = 1; h <= bound; ++h) {
    HH2 engine(p);
    Subst s;
    bool ok = engine.prove(context, goal, h, s, [&](Subst&) {
      engine.result = engine.trace();
      return true;
    });
    out.bound_hit = engine.bound_hit();
    if (ok) {
      out.derivable = true;
      out.height = h;
      out.rules = engine.result;
      return out;
    }
    if (!engine.bound_hit()) break;
  }
  return out;
}

// --- meta-theorems ----------------------------------------------------------------

namespace {

void require_obj(const Formula& h, const char* what) {
  if (!h.is(Formula::Kind::kObj))
    throw SpecError(fmt::format("{} expects a specification judgment", what));
}

bool contains(const std::vector<Term>& v, const Term& t) {
  return std::find(v.begin(), v.end(), t) != v.end();
}

bool included(const Term& small, const Term& large) {
  Term ts, tl;
  std::vector<Term> es, el;
  split_context(small, ts, es);
  split_context(large, tl, el);
  if (ts.valid() && !(tl.valid() && ts == tl)) return false;
  return std::all_of(es.begin(), es.end(), [&](const Term& e) { return contains(el, e); });
}

Term build_context(const Term& tail, const std::vector<Term>& elems, const Term& cons,
                   const Term& nil) {
  Term ctx = tail.valid() ? tail : nil;
  for (const Term& e : elems) ctx = Term::app(cons, {e, ctx});
  return ctx;
}

}  // namespace

MonotoneResult spec_monotone(const Formula& h, const Term& k) {
  require_obj(h, "monotone");
  MonotoneResult out{Formula::obj(k, h.term(), h.ann()), std::nullopt};
  if (included(h.term2(), k)) return out;
  Ty form = base(types::kAtom), list = base(types::kList), o = base(types::kProp);
  Term member = Term::var(names::kMember, Tag::kConstant, Ty::arrows(std::vector<Ty>{form, list}, o));
  Term x = Term::var("X", Tag::kLocal, form);
  out.side = Formula::binder(
      Formula::Kind::kForall, "X", form,
      Formula::imp(Formula::atom(Term::app(member, {x, h.term2()})),
                   Formula::atom(Term::app(member, {x, k}))));
  return out;
}

Formula spec_inst(const Formula& h, const Term& v, const Term& t) {
  require_obj(h, "inst");
  if (!v.is_var(Tag::kNominal)) throw SpecError("inst expects a nominal constant");
  if (!(type_of(t) == v.ty()))
    throw SpecError(fmt::format("{} does not have type {}", show(t), show(v.ty())));
  std::map<std::string, Term> m{{v.name(), t}};
  return Formula::obj(normalize(replace_atoms(h.term2(), Tag::kNominal, m)),
                      normalize(replace_atoms(h.term(), Tag::kNominal, m)), h.ann());
}

Formula spec_cut(const Formula& h1, const Formula& h2) {
  require_obj(h1, "cut");
  require_obj(h2, "cut");
  Term tail1;
  std::vector<Term> elems1;
  split_context(h1.term2(), tail1, elems1);
  auto it = std::find(elems1.begin(), elems1.end(), h2.term());
  if (it == elems1.end())
    throw SpecError(fmt::format("{} does not occur in the context", show(h2.term())));
  elems1.erase(it);
  Ty form = base(types::kAtom), list = base(types::kList);
  Term cons = Term::var(names::kCons, Tag::kConstant, Ty::arrows(std::vector<Ty>{form, list}, list));
  Term nil = Term::var(names::kNil, Tag::kConstant, list);
  Term rest = build_context(tail1, elems1, cons, nil);
  if (!included(h2.term2(), rest)) throw SpecError("contexts of the two judgments do not match");
  return Formula::obj(rest, h1.term());
}

}  // namespace nabla
