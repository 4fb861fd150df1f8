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

#include "nabla/prover.h"

#include <algorithm>

#include <fmt/format.h>

#include "nabla/printer.h"
#include "nabla/search.h"
#include "nabla/spec.h"

namespace nabla {

namespace {

using K = Formula::Kind;

bool inductive_target(const Env& env, const Formula& f) {
  if (f.is(K::kObj)) return true;
  if (!f.is(K::kAtom)) return false;
  const Definition* d = env.defs->find(pred_of(f.term()));
  return d != nullptr && d->flavor == Flavor::kInductive;
}

Formula annotate_premise(const Env& env, const Formula& f, int n, Annotation a) {
  if (f.is(K::kForall) || f.is(K::kNabla))
    return Formula::binder(f.kind(), f.var_name(), f.var_ty(),
                           annotate_premise(env, f.body(), n, a));
  if (!f.is(K::kImp)) throw TacticError("the goal has too few premises");
  if (n > 1) return Formula::imp(f.left(), annotate_premise(env, f.right(), n - 1, a));
  if (!inductive_target(env, f.left()))
    throw TacticError(fmt::format("cannot induct on {}", show(f.left())));
  return Formula::imp(f.left().with_ann(a), f.right());
}

Formula annotate_conclusion(const Env& env, const Formula& f, Annotation a) {
  if (f.is(K::kForall) || f.is(K::kNabla))
    return Formula::binder(f.kind(), f.var_name(), f.var_ty(), annotate_conclusion(env, f.body(), a));
  if (f.is(K::kImp)) return Formula::imp(f.left(), annotate_conclusion(env, f.right(), a));
  if (!coinductive(env, f)) throw TacticError("the conclusion is not coinductively defined");
  return f.with_ann(a);
}

std::string fresh_ih_name(const Sequent& s, const std::string& base) {
  std::string name = base;
  for (int k = 1; s.ih(name) != nullptr || s.hyp(name) != nullptr; ++k)
    name = fmt::format("{}{}", base, k);
  return name;
}

void expect_end(Parser& p) {
  if (!p.at_end()) p.fail(fmt::format("unexpected '{}'", p.peek().text));
}

}  // namespace

Prover::Prover(Env env, const LemmaTable* lemmas, std::string name, Formula statement, int depth)
    : env_(env), lemmas_(lemmas), name_(std::move(name)), statement_(std::move(statement)),
      depth_(depth) {
  Sequent s;
  s.goal = statement_;
  goals_.push_back(std::move(s));
}

Sequent& Prover::focus() {
  if (goals_.empty()) throw TacticError("there are no subgoals");
  return goals_.front();
}

void Prover::replace_focus(std::vector<Sequent> with) {
  goals_.erase(goals_.begin());
  goals_.insert(goals_.begin(), std::make_move_iterator(with.begin()),
                std::make_move_iterator(with.end()));
}

ElabScope Prover::scope(const Sequent& s) const {
  ElabScope sc;
  sc.sig = env_.sig;
  sc.eigen = s.vars;
  std::vector<Term> noms = nominals_of(s.goal);
  for (const Hyp& h : s.hyps)
    for (const Term& n : nominals_of(h.f))
      if (std::none_of(noms.begin(), noms.end(), [&](const Term& o) { return o.name() == n.name(); }))
        noms.push_back(n);
  sc.nominals = noms;
  sc.implicit_vars = false;
  sc.new_nominals = true;
  return sc;
}

Formula Prover::lookup(const Sequent& s, const std::string& name) const {
  if (const Hyp* h = s.hyp(name)) return h->f;
  if (const Hyp* h = s.ih(name)) return h->f;
  for (auto it = lemmas_->rbegin(); it != lemmas_->rend(); ++it)
    if (it->first == name) return it->second;
  throw TacticError(fmt::format("unknown lemma or hypothesis {}", name));
}

void Prover::run(const std::string& text, Loc loc) {
  Parser p(tokenize(text, loc));
  if (p.at_end()) p.fail("empty command");
  std::string tactic = p.ident();
  if (tactic == "undo") {
    expect_end(p);
    if (history_.empty()) throw TacticError("nothing to undo");
    goals_ = std::move(history_.back().goals);
    admitted_ = history_.back().admitted;
    tactics_ = history_.back().tactics;
    history_.pop_back();
    return;
  }
  Snapshot snap{goals_, admitted_, tactics_};
  try {
    step(p, tactic);
  } catch (const OutsideFragment& e) {
    goals_ = snap.goals;
    admitted_ = snap.admitted;
    throw TacticError(fmt::format("outside the pattern fragment: {}", e.what()));
  } catch (...) {
    goals_ = snap.goals;
    admitted_ = snap.admitted;
    throw;
  }
  history_.push_back(std::move(snap));
  ++tactics_;
}

void Prover::step(Parser& p, const std::string& tactic) {
  if (tactic == "intros") {
    std::vector<std::string> names;
    while (!p.at_end()) names.push_back(p.ident());
    Sequent s = intros(env_, focus(), names);
    replace_focus({std::move(s)});
  } else if (tactic == "induction") {
    induction(p);
  } else if (tactic == "coinduction") {
    expect_end(p);
    coinduction();
  } else if (tactic == "case") {
    std::string h = p.ident();
    bool keep = false;
    if (p.accept("(")) {
      if (p.ident() != "keep") p.fail("expected 'keep'");
      p.expect(")");
      keep = true;
    }
    expect_end(p);
    replace_focus(case_hyp(env_, focus(), h, keep));
  } else if (tactic == "search") {
    int depth = p.at_end() ? depth_ : p.number();
    expect_end(p);
    if (!search(env_, focus(), depth)) throw TacticError("search failed");
    replace_focus({});
  } else if (tactic == "apply") {
    apply(p);
  } else if (tactic == "exists" || tactic == "witness") {
    Expr e = p.term();
    expect_end(p);
    Sequent s = focus();
    if (!s.goal.is(K::kExists)) throw TacticError("the goal is not existential");
    Term t = elaborate_term(e, scope(s), s.goal.var_ty());
    s.goal = s.goal.instantiate(t);
    refresh_vars(s);
    replace_focus({std::move(s)});
  } else if (tactic == "split") {
    expect_end(p);
    Sequent s = focus();
    if (!s.goal.is(K::kAnd)) throw TacticError("the goal is not a conjunction");
    Sequent a = s, b = s;
    a.goal = s.goal.left();
    b.goal = s.goal.right();
    replace_focus({std::move(a), std::move(b)});
  } else if (tactic == "left" || tactic == "right") {
    expect_end(p);
    Sequent s = focus();
    if (!s.goal.is(K::kOr)) throw TacticError("the goal is not a disjunction");
    s.goal = tactic == "left" ? s.goal.left() : s.goal.right();
    replace_focus({std::move(s)});
  } else if (tactic == "unfold") {
    expect_end(p);
    Sequent s = unfold(env_, focus());
    replace_focus({std::move(s)});
  } else if (tactic == "assert") {
    Expr e = p.formula();
    expect_end(p);
    Sequent s = focus();
    Formula f = elaborate_formula(e, scope(s));
    Sequent side = s;
    side.goal = f;
    s.add(f);
    refresh_vars(side);
    refresh_vars(s);
    replace_focus({std::move(side), std::move(s)});
  } else if (tactic == "clear") {
    Sequent s = focus();
    while (!p.at_end()) {
      std::string h = p.ident();
      if (s.hyp(h) == nullptr) throw TacticError(fmt::format("unknown hypothesis {}", h));
      s.remove(h);
    }
    refresh_vars(s);
    replace_focus({std::move(s)});
  } else if (tactic == "inst") {
    std::string h = p.ident();
    if (p.ident() != "with") p.fail("expected 'with'");
    std::string n = p.ident();
    p.expect("=");
    Expr e = p.term();
    expect_end(p);
    Sequent s = focus();
    Formula f = lookup(s, h);
    std::vector<Term> noms = nominals_of(f);
    auto it = std::find_if(noms.begin(), noms.end(), [&](const Term& t) { return t.name() == n; });
    if (it == noms.end()) throw TacticError(fmt::format("{} does not occur in {}", n, h));
    Term t = elaborate_term(e, scope(s), it->ty());
    s.add(spec_inst(f, *it, t));
    refresh_vars(s);
    replace_focus({std::move(s)});
  } else if (tactic == "cut") {
    std::string h1 = p.ident();
    if (p.ident() != "with") p.fail("expected 'with'");
    std::string h2 = p.ident();
    expect_end(p);
    Sequent s = focus();
    s.add(spec_cut(lookup(s, h1), lookup(s, h2)));
    replace_focus({std::move(s)});
  } else if (tactic == "monotone") {
    std::string h = p.ident();
    if (p.ident() != "with") p.fail("expected 'with'");
    Expr e = p.term();
    expect_end(p);
    Sequent s = focus();
    Term k = elaborate_term(e, scope(s), Ty::base(types::kList));
    MonotoneResult r = spec_monotone(lookup(s, h), k);
    std::vector<Sequent> out;
    if (r.side) {
      Sequent side = s;
      side.goal = *r.side;
      refresh_vars(side);
      out.push_back(std::move(side));
    }
    s.add(r.judgment);
    refresh_vars(s);
    out.push_back(std::move(s));
    replace_focus(std::move(out));
  } else if (tactic == "skip") {
    expect_end(p);
    focus();
    replace_focus({});
    admitted_ = true;
  } else {
    p.fail(fmt::format("unknown tactic '{}'", tactic));
  }
}

void Prover::induction(Parser& p) {
  if (p.ident() != "on") p.fail("expected 'on'");
  int n = p.number();
  expect_end(p);
  Sequent s = focus();
  Annotation at{Mark::kAt, static_cast<int>(s.ihs.size()) + 1};
  Annotation star{Mark::kStar, at.level};
  Formula ih = annotate_premise(env_, s.goal, n, star);
  s.goal = annotate_premise(env_, s.goal, n, at);
  s.ihs.push_back(Hyp{fresh_ih_name(s, "IH"), ih});
  replace_focus({std::move(s)});
}

void Prover::coinduction() {
  Sequent s = focus();
  Annotation at{Mark::kAt, static_cast<int>(s.ihs.size()) + 1};
  Annotation star{Mark::kStar, at.level};
  Formula ch = annotate_conclusion(env_, s.goal, star);
  s.goal = annotate_conclusion(env_, s.goal, at);
  s.ihs.push_back(Hyp{fresh_ih_name(s, "CH"), ch});
  replace_focus({std::move(s)});
}

void Prover::apply(Parser& p) {
  std::string name = p.ident();
  std::vector<std::string> args;
  if (p.peek().is("to")) {
    p.next();
    while (!p.at_end() && !p.peek().is("with")) args.push_back(p.ident());
  }
  std::vector<std::pair<std::string, Expr>> raw;
  if (p.peek().is("with")) {
    p.next();
    do {
      std::string v = p.ident();
      p.expect("=");
      raw.emplace_back(v, p.term());
    } while (p.accept(","));
  }
  expect_end(p);
  Sequent s = focus();
  Formula target = lookup(s, name);
  auto prefix = strip_prefix(target).first;
  std::vector<Witness> withs;
  for (const auto& [v, e] : raw) {
    auto b = std::find_if(prefix.begin(), prefix.end(),
                          [&](const Binder& x) { return x.kind == K::kForall && x.name == v; });
    if (b == prefix.end()) throw TacticError(fmt::format("unknown variable {}", v));
    withs.push_back(Witness{v, elaborate_term(e, scope(s), b->ty)});
  }
  ApplyResult r = apply_formula(env_, s, target, args, withs);
  std::vector<Sequent> out;
  for (const Formula& hole : r.holes) {
    Sequent side = s;
    side.goal = hole;
    refresh_vars(side);
    out.push_back(std::move(side));
  }
  s.add(r.conclusion);
  refresh_vars(s);
  out.push_back(std::move(s));
  replace_focus(std::move(out));
}

std::string show_sequent(const Sequent& s) {
  std::string out;
  if (!s.vars.empty()) {
    std::vector<std::string> names;
    for (const Term& v : s.vars) names.push_back(v.name());
    out += fmt::format("Variables: {}\n", fmt::join(names, " "));
  }
  for (const Hyp& h : s.ihs) out += fmt::format("{} : {}\n", h.name, show(h.f));
  for (const Hyp& h : s.hyps) out += fmt::format("{} : {}\n", h.name, show(h.f));
  out += "============================\n";
  out += fmt::format(" {}\n", show(s.goal));
  return out;
}

std::string Prover::show() const {
  if (goals_.empty()) return "";
  std::string out;
  if (goals_.size() > 1) out += "Subgoal 1:\n\n";
  out += show_sequent(goals_.front());
  for (std::size_t i = 1; i < goals_.size(); ++i)
    out += fmt::format("\nSubgoal {} is:\n {}\n", i + 1, nabla::show(goals_[i].goal));
  return out;
}

}  // namespace nabla
