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

#include <algorithm>
#include <functional>
#include <map>

#include <gtest/gtest.h>

#include "gen.h"
#include "nabla/elab.h"
#include "nabla/kernel.h"
#include "nabla/printer.h"
#include "nabla/spec.h"

namespace nabla {

void PrintTo(const Term& t, std::ostream* os) { *os << show(t); }

namespace {

using gen::Gen;
using gen::I;
using gen::II;

constexpr int kCases = 250;

// --- normalization -------------------------------------------------------------

TEST(NormalizeProperty, Idempotent) {
  Gen g(11);
  g.redexes = true;
  for (int c = 0; c < kCases; ++c) {
    Term t = g.term(g.coin() ? I() : II(), 2 + g.below(4));
    Term n = normalize(t);
    ASSERT_EQ(normalize(n), n) << show(t);
    ASSERT_EQ(type_of(n), type_of(t)) << show(t);
  }
}

TEST(NormalizeProperty, NoRedexesRemain) {
  std::function<bool(const Term&)> has_redex = [&](const Term& t) -> bool {
    switch (t.kind()) {
      case Term::Kind::kApp:
        if (t.fn().is_lam()) return true;
        if (has_redex(t.fn())) return true;
        for (const Term& a : t.args())
          if (has_redex(a)) return true;
        return false;
      case Term::Kind::kLam:
        return has_redex(t.body());
      default:
        return false;
    }
  };
  Gen g(12);
  g.redexes = true;
  for (int c = 0; c < kCases; ++c) {
    Term t = normalize(g.term(I(), 2 + g.below(4)));
    ASSERT_FALSE(has_redex(t)) << show(t);
  }
}

// --- substitution -----------------------------------------------------------

Subst random_subst(Gen& g) {
  Subst s;
  if (g.coin()) s["X"] = normalize(g.term(I(), 3));
  if (g.coin()) s["Y"] = normalize(g.term(I(), 3));
  if (g.coin()) s["F"] = normalize(g.term(II(), 3));
  return s;
}

TEST(SubstProperty, Composition) {
  Gen g(21);
  for (int c = 0; c < kCases; ++c) {
    Term t = g.term(I(), 2 + g.below(3));
    Subst t1 = random_subst(g), t2 = random_subst(g);
    ASSERT_EQ(apply_subst(apply_subst(t, t1), t2), apply_subst(t, compose(t1, t2)))
        << show(t);
  }
}

TEST(SubstProperty, EmptyIsIdentity) {
  Gen g(22);
  for (int c = 0; c < kCases; ++c) {
    Term t = normalize(g.term(I(), 4));
    ASSERT_EQ(apply_subst(t, {}), t);
  }
}

// --- permutations -------------------------------------------------------------

Permutation then(const Permutation& p1, const Permutation& p2) {
  Permutation out;
  for (const auto& [from, to] : p1) {
    auto it = p2.find(to);
    out[from] = it == p2.end() ? to : it->second;
  }
  for (const auto& [from, to] : p2)
    if (!out.contains(from)) out[from] = to;
  return out;
}

TEST(PermutationProperty, GroupAction) {
  Gen g(31);
  for (int c = 0; c < kCases; ++c) {
    Term t = normalize(g.term(I(), 2 + g.below(4)));
    Permutation p1 = g.perm(g.world()), p2 = g.perm(g.world());
    ASSERT_EQ(permute(Permutation{}, t), t);
    ASSERT_EQ(permute(p2, permute(p1, t)), permute(then(p1, p2), t)) << show(t);
    ASSERT_EQ(permute(inverse(p1), permute(p1, t)), t) << show(t);
    std::set<std::string> image;
    for (const std::string& n : support(t)) image.insert(p1.at(n));
    ASSERT_EQ(support(permute(p1, t)), image);
  }
}

// --- nominal equivalence ------------------------------------------------------

struct PredEnv {
  Signature sig = base_signature();
  ClauseSet defs;
  Env env;
  Term p;
  PredEnv() {
    sig.add_kind("i");
    sig.add_const("p", Ty::arrows(std::vector<Ty>{I(), I()}, Ty::base(types::kProp)));
    p = sig.constant("p");
    env = Env{&sig, &defs};
  }
  Formula atom(const Term& a, const Term& b) const { return Formula::atom(Term::app(p, {a, b})); }
};

std::vector<Permutation> all_perms() {
  std::vector<Permutation> all;
  std::vector<std::string> names = {"n1", "n2", "n3"};
  do {
    all.push_back({{"n1", names[0]}, {"n2", names[1]}, {"n3", names[2]}});
  } while (std::next_permutation(names.begin(), names.end()));
  return all;
}

TEST(EquivProperty, EquivalenceRelation) {
  Gen g(41);
  g.use_lambdas = false;
  for (int c = 0; c < kCases; ++c) {
    Term a = normalize(g.term(I(), 3));
    Term b = g.coin() ? permute(g.perm(g.world()), a) : normalize(g.term(I(), 3));
    Term d = g.coin() ? permute(g.perm(g.world()), b) : normalize(g.term(I(), 3));
    ASSERT_TRUE(form_equiv(a, a));
    ASSERT_EQ(form_equiv(a, b), form_equiv(b, a)) << show(a) << " / " << show(b);
    if (form_equiv(a, b) && form_equiv(b, d)) ASSERT_TRUE(form_equiv(a, d));
    ASSERT_TRUE(form_equiv(a, permute(g.perm(g.world()), a)));
  }
}

TEST(EquivProperty, AgreesWithBruteForceOverPermutations) {
  Gen g(42);
  g.use_lambdas = false;
  std::vector<Permutation> all = all_perms();
  int equivalent = 0;
  for (int c = 0; c < kCases; ++c) {
    Term a = normalize(g.term(I(), 3));
    Term b = g.coin() ? permute(g.pick(all), a) : normalize(g.term(I(), 3));
    bool brute = std::any_of(all.begin(), all.end(), [&](const Permutation& p) { return permute(p, a) == b; });
    ASSERT_EQ(form_equiv(a, b), brute) << show(a) << " / " << show(b);
    equivalent += brute ? 1 : 0;
  }
  EXPECT_GT(equivalent, kCases / 4);
  EXPECT_LT(equivalent, kCases);
}

TEST(EquivProperty, UsedByClose) {
  PredEnv pe;
  Gen g(43);
  g.use_lambdas = false;
  g.use_eigens = false;
  for (int c = 0; c < kCases; ++c) {
    Formula goal = pe.atom(normalize(g.term(I(), 3)), normalize(g.term(I(), 3)));
    Formula hyp = g.coin() ? permute(g.perm(g.world()), goal)
                           : pe.atom(normalize(g.term(I(), 3)), normalize(g.term(I(), 3)));
    bool equiv = form_equiv(hyp, goal);
    ASSERT_EQ(closes(pe.env, hyp, goal), equiv) << show(hyp) << " / " << show(goal);
    Sequent s;
    s.add(hyp);
    s.goal = goal;
    ASSERT_EQ(trivially_closed(pe.env, s), equiv) << show(hyp) << " / " << show(goal);
  }
}

// --- unification ----------------------------------------------------------------

// Problems over a, f, g, n1, n2 with logic variables ?X : i and ?F : i -> i,
// the latter applied to one nominal, so every problem is a pattern.
class UnifyGen {
 public:
  explicit UnifyGen(std::uint64_t seed) : g_(seed) {}

  Term side(int depth) {
    if (depth <= 1 || g_.coin(0.3)) {
      switch (g_.below(5)) {
        case 0: return w_.a;
        case 1: return w_.noms[0];
        case 2: return w_.noms[1];
        case 3: return x_;
        default: return Term::app(f_var_, {g_.coin() ? w_.noms[0] : w_.noms[1]});
      }
    }
    if (g_.coin()) return Term::app(w_.f, {side(depth - 1)});
    return Term::app(w_.g, {side(depth - 1), side(depth - 1)});
  }

  const Term& x() const { return x_; }
  const gen::World& world() const { return w_; }

 private:
  Gen g_;
  gen::World w_;
  Term x_ = Term::var("?X", Tag::kLogic, I());
  Term f_var_ = Term::var("?F", Tag::kLogic, II());
};

// Terms of type i over `leaves`, f and g with depth at most d.
std::vector<Term> all_terms(const gen::World& w, const std::vector<Term>& leaves, int d) {
  std::vector<Term> out = leaves;
  for (int k = 2; k <= d; ++k) {
    std::vector<Term> next = leaves;
    for (const Term& t : out) next.push_back(Term::app(w.f, {t}));
    for (const Term& t : out)
      for (const Term& u : out) next.push_back(Term::app(w.g, {t, u}));
    out = std::move(next);
  }
  return out;
}

TEST(UnifyProperty, SoundOnPatterns) {
  Gen g(51);
  Subst to_logic = {{"X", Term::var("?X", Tag::kLogic, I())},
                    {"Y", Term::var("?Y", Tag::kLogic, I())},
                    {"F", Term::var("?F", Tag::kLogic, II())}};
  int solved = 0;
  for (int c = 0; c < kCases * 2; ++c) {
    Term lhs = apply_subst(normalize(g.term(I(), 3)), to_logic);
    Term rhs = normalize(g.term(I(), 3));
    if (g.coin()) rhs = apply_subst(rhs, to_logic);
    VarSupply supply;
    try {
      Subst s = unify_terms(lhs, rhs, supply);
      ASSERT_EQ(apply_subst(lhs, s), apply_subst(rhs, s)) << show(lhs) << " = " << show(rhs);
      ++solved;
    } catch (const UnifyFailure&) {
    } catch (const OutsideFragment&) {
    }
  }
  EXPECT_GT(solved, 20);
}

TEST(UnifyProperty, CompleteAgainstBruteForce) {
  UnifyGen ug(52);
  const gen::World& w = ug.world();
  std::vector<Term> x_values = all_terms(w, {w.a}, 3);
  std::vector<Term> f_values;
  for (const Term& body : all_terms(w, {w.a, Term::bound(0)}, 3)) f_values.push_back(Term::lam({I()}, body));
  int solvable = 0;
  for (int c = 0; c < kCases; ++c) {
    Term lhs = ug.side(3), rhs = ug.side(3);
    bool uses_x = occurs_atom(lhs, Tag::kLogic, "?X") || occurs_atom(rhs, Tag::kLogic, "?X");
    bool uses_f = occurs_atom(lhs, Tag::kLogic, "?F") || occurs_atom(rhs, Tag::kLogic, "?F");
    bool brute = false;
    for (std::size_t i = 0; i < (uses_x ? x_values.size() : 1) && !brute; ++i)
      for (std::size_t j = 0; j < (uses_f ? f_values.size() : 1) && !brute; ++j) {
        Subst s;
        if (uses_x) s["?X"] = x_values[i];
        if (uses_f) s["?F"] = f_values[j];
        brute = apply_subst(lhs, s) == apply_subst(rhs, s);
      }
    bool unified = true;
    VarSupply supply;
    try {
      Subst s = unify_terms(lhs, rhs, supply);
      ASSERT_EQ(apply_subst(lhs, s), apply_subst(rhs, s)) << show(lhs) << " = " << show(rhs);
    } catch (const UnifyFailure&) {
      unified = false;
    }
    ASSERT_EQ(unified, brute) << show(lhs) << " = " << show(rhs);
    solvable += brute ? 1 : 0;
  }
  EXPECT_GT(solvable, kCases / 20);
  EXPECT_LT(solvable, kCases);
}

TEST(UnifyProperty, MostGeneral) {
  // Every ground solution for ?X is an instance of the computed unifier.
  UnifyGen ug(53);
  std::vector<Term> x_values = all_terms(ug.world(), {ug.world().a}, 3);
  int checked = 0;
  for (int c = 0; c < kCases * 2; ++c) {
    Term lhs = ug.side(3), rhs = ug.side(3);
    if (occurs_atom(lhs, Tag::kLogic, "?F") || occurs_atom(rhs, Tag::kLogic, "?F")) continue;
    VarSupply supply;
    Subst mgu;
    try {
      mgu = unify_terms(lhs, rhs, supply);
    } catch (const UnifyFailure&) {
      continue;
    }
    Term image = apply_subst(ug.x(), mgu);
    for (const Term& v : x_values) {
      Subst s{{"?X", v}};
      if (apply_subst(lhs, s) != apply_subst(rhs, s)) continue;
      VarSupply fresh;
      ASSERT_NO_THROW(unify_terms(image, v, fresh)) << show(image) << " vs " << show(v);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

// --- match_head upper sequents ----------------------------------------------

struct SpecEnv {
  SpecProgram program;
  Signature sig;
  ClauseSet defs;
  Env env;
  Ty tm = Ty::base("tm");
  Ty list = Ty::base(types::kList);
  SpecEnv() {
    program.load_sig("kind tm type. type c tm. type k tm -> tm. type p tm -> o. type q tm -> tm -> o.");
    sig = program.sig();
    install_builtins(program, sig, defs);
    for (Definition& d : elaborate_define("ctx : olist -> prop by ctx nil ; nabla x, ctx (q x A :: L) := ctx L.",
                                          Loc{}, sig, Flavor::kInductive, defs.next_block()))
      defs.add(std::move(d));
    for (Definition& d : elaborate_define("fresh : tm -> tm -> prop by nabla z, fresh z Y.", Loc{}, sig,
                                          Flavor::kInductive, defs.next_block()))
      defs.add(std::move(d));
    env = Env{&sig, &defs};
  }
  Term c(const std::string& n) const { return sig.constant(n); }
  Term cons(const Term& a, const Term& l) const { return Term::app(c(names::kCons), {a, l}); }
};

// Renames eigenvariables to V1, V2, ... by first occurrence and prints the
// hypotheses and the conclusion.
std::string canonical(const Sequent& s) {
  std::vector<Term> order;
  auto note = [&](const Formula& f) {
    for (const Term& v : atoms_of(f, Tag::kEigen))
      if (std::none_of(order.begin(), order.end(), [&](const Term& o) { return o.name() == v.name(); }))
        order.push_back(v);
  };
  for (const Hyp& h : s.hyps) note(h.f);
  note(s.goal);
  Subst ren;
  for (std::size_t i = 0; i < order.size(); ++i)
    ren[order[i].name()] = Term::var("V" + std::to_string(i + 1), Tag::kEigen, order[i].ty());
  std::string out;
  for (const Hyp& h : s.hyps) out += h.name + " : " + show(apply_subst(h.f, ren)) + "\n";
  out += "|- " + show(apply_subst(s.goal, ren)) + "\n";
  return out;
}

std::string canonical(const std::vector<Sequent>& ss) {
  std::string out;
  for (const Sequent& s : ss) out += canonical(s) + "--\n";
  return out;
}

// The sequent with hypothesis `name` removed, `theta` applied and `added`
// appended as new hypotheses.
std::vector<Sequent> upper(const Sequent& s, std::string_view name, const Subst& theta,
                           const std::vector<Formula>& added) {
  Sequent e = s;
  e.remove(name);
  e = subst_sequent(e, theta);
  for (const Formula& f : added) e.add(f);
  return {e};
}

TEST(MatchHeadProperty, MemberUpperSequents) {
  SpecEnv se;
  Gen g(61);
  Term L = Term::var("L", Tag::kEigen, se.list, 1);
  Term E = Term::var("E", Tag::kEigen, se.tm, 2);
  Term T = Term::var("T", Tag::kEigen, se.tm, 3);
  Term n1 = Term::var("n1", Tag::kNominal, se.tm);
  Term member = se.c(names::kMember);
  std::vector<Term> leaves = {E, T, se.c("c")};
  std::function<Term(int, bool)> tm_term = [&](int d, bool noms) -> Term {
    if (d <= 1 || g.coin(0.4)) {
      if (noms && g.coin(0.3)) return n1;
      return g.pick(leaves);
    }
    return Term::app(se.c("k"), {tm_term(d - 1, noms)});
  };
  Term lp = Term::var("Lp", Tag::kEigen, se.list, 20);
  Term bv = Term::var("Bv", Tag::kEigen, Ty::base(types::kAtom), 21);
  int with_nominal = 0;
  for (int c = 0; c < kCases; ++c) {
    bool noms = g.coin(0.4);
    Term x = g.coin() ? Term::app(se.c("p"), {tm_term(3, noms)})
                      : Term::app(se.c("q"), {tm_term(3, noms), tm_term(3, noms)});
    Sequent s;
    s.clock = 10;
    s.add(Formula::atom(Term::app(member, {x, L})));
    if (g.coin()) s.add(Formula::atom(Term::app(member, {Term::app(se.c("p"), {tm_term(2, false)}), L})));
    s.goal = g.coin() ? Formula::obj(L, Term::app(se.c("p"), {E}))
                      : Formula::atom(Term::app(se.c(names::kNat), {se.c(names::kZero)}));
    refresh_vars(s);

    // The first clause needs L = X :: L', impossible when X mentions a
    // nominal; the second gives L = B :: L' with member X L'.
    std::vector<Sequent> expected;
    if (support(x).empty()) expected = upper(s, "H1", {{"L", se.cons(x, lp)}}, {});
    else ++with_nominal;
    for (Sequent& e : upper(s, "H1", {{"L", se.cons(bv, lp)}}, {Formula::atom(Term::app(member, {x, lp}))}))
      expected.push_back(std::move(e));
    ASSERT_EQ(canonical(case_hyp(se.env, s, "H1")), canonical(expected)) << canonical(s);
  }
  EXPECT_GT(with_nominal, 10);
}

TEST(MatchHeadProperty, FreshNominalUpperSequents) {
  SpecEnv se;
  Gen g(62);
  Term member = se.c(names::kMember);
  Term name_tm = Term::var(names::kName, Tag::kConstant, Ty::arrow(se.tm, Ty::base(types::kProp)));
  Term X = Term::var("X", Tag::kEigen, se.tm, 1);
  Term E = Term::var("E", Tag::kEigen, se.tm, 2);
  Term L = Term::var("L", Tag::kEigen, se.list, 3);
  Term Y = Term::var("Y", Tag::kEigen, se.tm, 4);
  enum { kName, kCtx, kFresh };
  int seen[3] = {0, 0, 0};
  for (int c = 0; c < kCases; ++c) {
    // Nominals n1..nk already occur elsewhere in the sequent.
    int k = g.below(3);
    Term payload = g.coin() ? E : Term::app(se.c("k"), {E});
    for (int i = 1; i <= k; ++i)
      payload = Term::app(se.c("k"), {g.coin() ? payload : Term::var("n" + std::to_string(i), Tag::kNominal, se.tm)});
    int which = g.below(3);
    ++seen[which];
    Term head = which == kName   ? Term::app(name_tm, {X})
                : which == kCtx ? Term::app(se.c("ctx"), {L})
                                : Term::app(se.c("fresh"), {X, Y});
    Sequent s;
    s.clock = 10;
    s.add(Formula::atom(head));
    s.add(Formula::atom(Term::app(member, {Term::app(se.c("p"), {payload}), L})));
    if (g.coin()) s.add(Formula::obj(L, Term::app(se.c("q"), {which == kCtx ? E : X, Y})));
    s.goal = Formula::obj(L, Term::app(se.c("q"), {which == kCtx ? E : X, payload}));
    refresh_vars(s);

    Term fresh = fresh_nominal(se.tm, s.support());
    ASSERT_EQ(s.support().count(fresh.name()), 0u);
    // X (or L) takes the fresh nominal; Y of the fresh clause cannot depend
    // on it; every other eigenvariable is raised over it.
    Subst theta;
    for (const Term& v : s.vars) {
      if (v.name() == (which == kCtx ? "L" : "X")) continue;
      if (which == kFresh && v.name() == "Y") continue;
      Term raised = Term::var(v.name() + "r", Tag::kEigen, Ty::arrow(se.tm, v.ty()), 30);
      theta[v.name()] = Term::app(raised, {fresh});
    }
    std::vector<Sequent> expected;
    if (which != kCtx) {
      theta["X"] = fresh;
      expected = upper(s, "H1", theta, {});
    } else {
      expected = upper(s, "H1", {{"L", se.c(names::kNil)}}, {});
      Term a = Term::var("Av", Tag::kEigen, se.tm, 31);
      Term l = Term::var("Lv", Tag::kEigen, se.list, 32);
      theta["L"] = se.cons(Term::app(se.c("q"), {fresh, a}), l);
      for (Sequent& e : upper(s, "H1", theta, {Formula::atom(Term::app(se.c("ctx"), {l}))}))
        expected.push_back(std::move(e));
    }
    ASSERT_EQ(canonical(case_hyp(se.env, s, "H1")), canonical(expected)) << canonical(s);
  }
  for (int n : seen) EXPECT_GT(n, kCases / 5);
}

}  // namespace
}  // namespace nabla
