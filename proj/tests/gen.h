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

// Random term generators shared by the property suites.

#ifndef NABLA_TESTS_GEN_H_
#define NABLA_TESTS_GEN_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nabla/term.h"

namespace nabla::gen {

inline Ty I() { return Ty::base("i"); }
inline Ty II() { return Ty::arrow(I(), I()); }

/// A small first-order world: a, b : i; f : i -> i; g : i -> i -> i;
/// h : (i -> i) -> i; nominals n1..n3; eigenvariables X, Y : i, F : i -> i.
struct World {
  Term a = Term::var("a", Tag::kConstant, I());
  Term b = Term::var("b", Tag::kConstant, I());
  Term f = Term::var("f", Tag::kConstant, II());
  Term g = Term::var("g", Tag::kConstant, Ty::arrows(std::vector<Ty>{I(), I()}, I()));
  Term h = Term::var("h", Tag::kConstant, Ty::arrow(II(), I()));
  std::vector<Term> noms = {Term::var("n1", Tag::kNominal, I()), Term::var("n2", Tag::kNominal, I()),
                            Term::var("n3", Tag::kNominal, I())};
  std::vector<Term> eigens = {Term::var("X", Tag::kEigen, I(), 1), Term::var("Y", Tag::kEigen, I(), 2),
                              Term::var("F", Tag::kEigen, II(), 3)};
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))]; }

  bool redexes = false;
  bool use_noms = true;
  bool use_eigens = true;
  bool use_lambdas = true;

  /// A well-typed term of type `ty` whose nesting depth is at most `depth`.
  Term term(const Ty& ty, int depth) {
    std::vector<Ty> ctx;
    return at(ty, depth, ctx);
  }

  /// A permutation of n1..n3.
  Permutation perm(const World& w) {
    std::vector<std::string> names;
    for (const Term& n : w.noms) names.push_back(n.name());
    std::vector<std::string> shuffled = names;
    std::shuffle(shuffled.begin(), shuffled.end(), rng_);
    Permutation p;
    for (std::size_t i = 0; i < names.size(); ++i) p[names[i]] = shuffled[i];
    return p;
  }

  const World& world() const { return w_; }

 private:
  Term at(const Ty& ty, int depth, std::vector<Ty>& ctx) {
    if (!ty.is_base()) {
      std::size_t base = ctx.size();
      for (const Ty& a : ty.args()) ctx.push_back(a);
      Term body = at(Ty::base(ty.head()), depth, ctx);
      ctx.resize(base);
      return Term::lam(ty.args(), body);
    }
    std::vector<Term> leaves, nodes;
    leaves.push_back(w_.a);
    leaves.push_back(w_.b);
    if (use_noms)
      for (const Term& n : w_.noms) leaves.push_back(n);
    for (std::size_t k = 0; k < ctx.size(); ++k) {
      Term bv = Term::bound(static_cast<int>(ctx.size() - 1 - k));
      if (ctx[k].is_base()) leaves.push_back(bv);
      else nodes.push_back(bv);
    }
    if (use_eigens) {
      leaves.push_back(w_.eigens[0]);
      leaves.push_back(w_.eigens[1]);
      nodes.push_back(w_.eigens[2]);
    }
    nodes.push_back(w_.f);
    nodes.push_back(w_.g);
    if (use_lambdas) nodes.push_back(w_.h);
    if (depth <= 1 || coin(0.3)) return pick(leaves);
    if (redexes && coin(0.15)) {
      // (\x. body) arg
      ctx.push_back(I());
      Term body = at(I(), depth - 1, ctx);
      ctx.pop_back();
      return Term::app(Term::lam({I()}, body), {at(I(), depth - 1, ctx)});
    }
    Term head = pick(nodes);
    Ty hty = head.is_bound() ? ctx[ctx.size() - 1 - static_cast<std::size_t>(head.index())] : head.ty();
    std::vector<Term> args;
    for (const Ty& a : hty.args()) args.push_back(at(a, depth - 1, ctx));
    return Term::app(head, std::move(args));
  }

  std::mt19937_64 rng_;
  World w_;
};

}  // namespace nabla::gen

#endif  // NABLA_TESTS_GEN_H_
