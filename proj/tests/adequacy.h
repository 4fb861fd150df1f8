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

// Generated typing goals over the simply typed lambda calculus, checked by
// the specification interpreter and by search on the encoded judgment.

#ifndef NABLA_TESTS_ADEQUACY_H_
#define NABLA_TESTS_ADEQUACY_H_

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "nabla/kernel.h"
#include "nabla/printer.h"
#include "nabla/search.h"
#include "nabla/session.h"
#include "nabla/spec.h"

namespace nabla {

struct AdequacyReport {
  int goals = 0;
  int agree = 0;
  int derivable = 0;
  int max_height = 0;
  std::vector<std::string> mismatches;
};

class StlcGoals {
 public:
  StlcGoals(const Signature& sig, std::uint64_t seed) : sig_(sig), rng_(seed) {}

  Term type(int depth) {
    if (depth <= 1 || coin(0.5)) return sig_.constant("i");
    return Term::app(sig_.constant("arr"), {type(depth - 1), type(depth - 1)});
  }

  /// A term intended to have type `ty` under `ctx` (nominal, type) pairs and
  /// `bound` binder types; with `noise`, sometimes a wrong subterm.
  Term term(const Term& ty, int depth, const std::vector<std::pair<Term, Term>>& ctx,
            std::vector<Term>& bound, bool noise) {
    std::vector<Term> vars;
    for (std::size_t k = 0; k < bound.size(); ++k)
      if (bound[k] == ty || (noise && coin(0.2))) vars.push_back(Term::bound(static_cast<int>(bound.size() - 1 - k)));
    for (const auto& [n, t] : ctx)
      if (t == ty || (noise && coin(0.2))) vars.push_back(n);
    bool is_arr = ty.is_app();
    if (!vars.empty() && (depth <= 1 || coin(0.4))) return vars[below(vars.size())];
    if (depth <= 1 && !is_arr) {
      // Nothing of this type in scope: any variable, or an identity function.
      for (std::size_t k = 0; k < bound.size(); ++k) vars.push_back(Term::bound(static_cast<int>(k)));
      for (const auto& entry : ctx) vars.push_back(entry.first);
      if (!vars.empty()) return vars[below(vars.size())];
      return Term::app(sig_.constant("lam"), {sig_.constant("i"), Term::lam({Ty::base("tm")}, Term::bound(0))});
    }
    if (is_arr && (depth <= 1 || coin(0.6))) {
      Term a = ty.args()[0], b = ty.args()[1];
      if (noise && coin(0.15)) a = type(2);
      bound.push_back(a);
      Term body = term(b, depth - 1, ctx, bound, noise);
      bound.pop_back();
      return Term::app(sig_.constant("lam"), {a, Term::lam({Ty::base("tm")}, body)});
    }
    Term a = type(2);
    Term fn_ty = Term::app(sig_.constant("arr"), {a, ty});
    Term fn = term(fn_ty, depth - 1, ctx, bound, noise);
    Term arg = term(noise && coin(0.15) ? type(2) : a, depth - 1, ctx, bound, noise);
    return Term::app(sig_.constant("app"), {fn, arg});
  }

  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  const Signature& sig_;
  std::mt19937_64 rng_;
};

/// Runs `count` goals; each is kept only when the interpreter either derives
/// it within height 6 or fails without reaching its bound.
inline AdequacyReport run_adequacy(const std::filesystem::path& proofs, int count, std::uint64_t seed,
                                   int search_depth = 16) {
  SpecProgram program;
  program.load_sig(read_file(proofs / "stlc.sig"));
  program.load_mod(read_file(proofs / "stlc.mod"));
  Signature sig = program.sig();
  ClauseSet defs;
  install_builtins(program, sig, defs);
  Env env{&sig, &defs};
  StlcGoals gen(sig, seed);
  Ty tm = Ty::base("tm");
  Term nil = sig.constant(names::kNil), cons = sig.constant(names::kCons), of = sig.constant("of"),
       atm = sig.constant(names::kAtm);

  AdequacyReport r;
  int attempts = 0;
  while (r.goals < count && attempts < count * 50) {
    ++attempts;
    // Context of typed nominals.
    std::vector<std::pair<Term, Term>> ctx;
    int nctx = static_cast<int>(gen.below(3));
    for (int k = 1; k <= nctx; ++k)
      ctx.emplace_back(Term::var(fmt::format("n{}", k), Tag::kNominal, tm), gen.type(2));
    Term context = nil;
    for (const auto& [n, t] : ctx) context = Term::app(cons, {Term::app(of, {n, t}), context});
    Term ty = gen.type(3);
    std::vector<Term> bound;
    bool noise = gen.coin(0.5);
    Term m = normalize(gen.term(ty, 1 + static_cast<int>(gen.below(3)), ctx, bound, noise));
    Term asked = noise && gen.coin(0.3) ? gen.type(3) : ty;
    Term atom = Term::app(of, {m, asked});

    HH2Result h = hh2_prove(program, context, Term::app(atm, {atom}), 6);
    if (!h.derivable) {
      HH2Result deep = hh2_prove(program, context, Term::app(atm, {atom}), 14);
      if (deep.derivable || deep.bound_hit) continue;  // height beyond the corpus limit
    }
    Sequent s;
    s.goal = encode_surface(Formula::obj(context, atom));
    bool found = search(env, s, search_depth);
    ++r.goals;
    if (h.derivable) {
      ++r.derivable;
      r.max_height = std::max(r.max_height, h.height);
    }
    if (found == h.derivable) {
      ++r.agree;
    } else {
      r.mismatches.push_back(fmt::format("{}: interpreter {}, search {}", show(Formula::obj(context, atom)),
                                         h.derivable ? "derivable" : "not derivable",
                                         found ? "proved" : "failed"));
    }
  }
  return r;
}

}  // namespace nabla

#endif  // NABLA_TESTS_ADEQUACY_H_
