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

#include "nabla/printer.h"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "nabla/defs.h"

namespace nabla {

namespace {

constexpr int kPrecCons = 0;
constexpr int kPrecApp = 1;
constexpr int kPrecAtom = 2;

bool is_cons(const Term& t) {
  return t.is_app() && t.fn().is_var(Tag::kConstant) && t.fn().name() == names::kCons &&
         t.args().size() == 2;
}

bool is_nil(const Term& t) { return t.is_var(Tag::kConstant) && t.name() == names::kNil; }

void names_in(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      out.insert(t.name());
      return;
    case Term::Kind::kBound:
      return;
    case Term::Kind::kApp:
      names_in(t.fn(), out);
      for (const Term& a : t.args()) names_in(a, out);
      return;
    case Term::Kind::kLam:
      names_in(t.body(), out);
      return;
  }
}

class TermPrinter {
 public:
  explicit TermPrinter(const Term& root) { names_in(root, taken_); }

  std::string print(const Term& t, int prec) {
    switch (t.kind()) {
      case Term::Kind::kVar:
        return t.name();
      case Term::Kind::kBound: {
        std::size_t i = scope_.size() - 1 - static_cast<std::size_t>(t.index());
        return i < scope_.size() ? scope_[i] : fmt::format("#{}", t.index());
      }
      case Term::Kind::kLam: {
        std::string out;
        std::size_t pushed = 0;
        for (std::size_t i = 0; i < t.binders().size(); ++i) {
          std::string hint = i < t.hints().size() && !t.hints()[i].empty() ? t.hints()[i] : "x";
          std::string name = pick(hint);
          scope_.push_back(name);
          ++pushed;
          out += name + "\\ ";
        }
        out += print(t.body(), kPrecCons);
        for (std::size_t i = 0; i < pushed; ++i) {
          in_scope_.erase(scope_.back());
          scope_.pop_back();
        }
        return prec > kPrecCons ? "(" + out + ")" : out;
      }
      case Term::Kind::kApp:
        break;
    }
    if (is_cons(t)) {
      std::string out = print(t.args()[0], kPrecApp) + " :: " + print(t.args()[1], kPrecCons);
      return prec > kPrecCons ? "(" + out + ")" : out;
    }
    std::string out = print(t.fn(), kPrecAtom);
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      const Term& a = t.args()[i];
      bool last = i + 1 == t.args().size();
      // A trailing abstraction needs no parentheses.
      if (last && a.is_lam() && prec <= kPrecCons)
        out += " " + print(a, kPrecCons);
      else
        out += " " + print(a, kPrecAtom);
    }
    return prec > kPrecApp ? "(" + out + ")" : out;
  }

 private:
  std::string pick(const std::string& hint) {
    std::string name = hint;
    for (int k = 1; taken_.contains(name) || in_scope_.contains(name); ++k)
      name = fmt::format("{}{}", hint, k);
    in_scope_.insert(name);
    return name;
  }

  std::set<std::string> taken_;
  std::set<std::string> in_scope_;
  std::vector<std::string> scope_;
};

std::string show_term(const Term& t, int prec) {
  TermPrinter p(t);
  return p.print(t, prec);
}

std::string ann_suffix(const Annotation& a, bool spaced) {
  if (a.none()) return "";
  return (spaced ? " " : "") + a.str();
}

constexpr int kFBinder = 0;
constexpr int kFImp = 1;
constexpr int kFOr = 2;
constexpr int kFAnd = 3;
constexpr int kFAtom = 4;

std::string show_formula(const Formula& f, int prec) {
  using K = Formula::Kind;
  auto wrap = [&](int mine, std::string s) { return prec > mine ? "(" + s + ")" : s; };
  switch (f.kind()) {
    case K::kTrue:
      return "true";
    case K::kFalse:
      return "false";
    case K::kAtom:
      return wrap(kFAtom, show_term(f.term(), f.ann().none() ? kPrecCons : kPrecApp) +
                             ann_suffix(f.ann(), true));
    case K::kObj: {
      Term tail;
      std::vector<Term> elems;
      split_context(f.term2(), tail, elems);
      std::vector<std::string> parts;
      if (tail.valid()) parts.push_back(show_term(tail, kPrecApp));
      for (const Term& e : elems) parts.push_back(show_term(e, kPrecApp));
      std::string goal = show_term(f.term(), kPrecCons);
      std::string body = parts.empty() ? goal : fmt::format("{} |- {}", fmt::join(parts, ", "), goal);
      return "{" + body + "}" + ann_suffix(f.ann(), false);
    }
    case K::kEq:
      return wrap(kFAtom, show_term(f.term(), kPrecCons) + " = " + show_term(f.term2(), kPrecCons));
    case K::kAnd:
      return wrap(kFAnd, show_formula(f.left(), kFAnd) + " /\\ " + show_formula(f.right(), kFAtom));
    case K::kOr:
      return wrap(kFOr, show_formula(f.left(), kFOr) + " \\/ " + show_formula(f.right(), kFAnd));
    case K::kImp:
      return wrap(kFImp, show_formula(f.left(), kFOr) + " -> " + show_formula(f.right(), kFImp));
    case K::kForall:
    case K::kExists:
    case K::kNabla: {
      std::string word = f.is(K::kForall) ? "forall" : f.is(K::kExists) ? "exists" : "nabla";
      std::vector<std::string> vars{f.var_name()};
      Formula body = f.body();
      while (body.kind() == f.kind()) {
        vars.push_back(body.var_name());
        body = body.body();
      }
      return wrap(kFBinder,
                  fmt::format("{} {}, {}", word, fmt::join(vars, " "), show_formula(body, kFBinder)));
    }
  }
  return "?";
}

}  // namespace

void split_context(const Term& ctx, Term& tail, std::vector<Term>& elems) {
  std::vector<Term> outer;
  Term t = ctx;
  while (is_cons(t)) {
    outer.push_back(t.args()[0]);
    t = t.args()[1];
  }
  tail = is_nil(t) ? Term() : t;
  elems.assign(outer.rbegin(), outer.rend());
}

std::string show(const Term& t) { return show_term(t, kPrecCons); }

std::string show(const Formula& f) { return show_formula(f, kFBinder); }

std::string show(const Ty& ty) {
  std::string out;
  for (const Ty& a : ty.args()) out += (a.is_base() ? show(a) : "(" + show(a) + ")") + " -> ";
  return out + (ty.head() == kPropType ? std::string("prop") : ty.head());
}

}  // namespace nabla
