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

#include "nabla/defs.h"

#include <algorithm>

#include <fmt/format.h>

namespace nabla {

void Signature::add_kind(const std::string& name) {
  if (kinds_.insert(name).second) kind_order_.push_back(name);
}

void Signature::add_const(const std::string& name, const Ty& ty) {
  auto it = consts_.find(name);
  if (it != consts_.end() && !(it->second == ty))
    throw SignatureError(fmt::format("constant {} redeclared with a different type", name));
  check_type(ty);
  consts_[name] = ty;
}

const Ty& Signature::const_type(const std::string& name) const {
  auto it = consts_.find(name);
  if (it == consts_.end()) throw SignatureError(fmt::format("unknown constant {}", name));
  return it->second;
}

Term Signature::constant(const std::string& name) const {
  return Term::var(name, Tag::kConstant, const_type(name));
}

bool Signature::nominal_type(const Ty& ty) const {
  return !ty.mentions(types::kProp);
}

void Signature::check_type(const Ty& ty) const {
  if (!kinds_.contains(ty.head()))
    throw SignatureError(fmt::format("unknown type {}", ty.head()));
  for (const Ty& a : ty.args()) check_type(a);
}

std::string pred_of(const Term& atom) {
  const Term& h = atom.spine_head();
  return h.is_var() ? h.name() : std::string();
}

ClauseInstance instantiate_clause(const DefClause& c, const std::map<std::string, Term>& sigma) {
  std::set<std::string> forall_support;
  for (const auto& [name, ty] : c.forall_vars) {
    auto it = sigma.find(name);
    if (it != sigma.end())
      for (const std::string& n : support(it->second)) forall_support.insert(n);
  }
  std::set<std::string> seen;
  for (const auto& [name, ty] : c.nabla_vars) {
    auto it = sigma.find(name);
    if (it == sigma.end() || !it->second.is_var(Tag::kNominal))
      throw std::invalid_argument(fmt::format("{} must be mapped to a nominal constant", name));
    if (!seen.insert(it->second.name()).second)
      throw std::invalid_argument("nabla variables must map to distinct nominal constants");
    if (forall_support.contains(it->second.name()))
      throw std::invalid_argument(
          fmt::format("{} occurs in the instance of a universal variable", it->second.name()));
  }
  ClauseInstance out{replace_atoms(c.head, Tag::kLocal, sigma), c.body};
  for (const auto& [name, value] : sigma) out.body = replace_local(out.body, name, value);
  return out;
}

void ClauseSet::add(Definition def) {
  if (defs_.contains(def.pred))
    throw SignatureError(fmt::format("predicate {} is already defined", def.pred));
  order_.push_back(def.pred);
  defs_.emplace(def.pred, std::move(def));
}

const Definition* ClauseSet::find(const std::string& pred) const {
  auto it = defs_.find(pred);
  return it == defs_.end() ? nullptr : &it->second;
}

const Definition& ClauseSet::get(const std::string& pred) const {
  const Definition* d = find(pred);
  if (d == nullptr) throw SignatureError(fmt::format("{} is not a defined predicate", pred));
  return *d;
}

int formula_level(const Formula& f, const std::map<std::string, int>& levels) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
    case K::kFalse:
    case K::kEq:
      return 0;
    case K::kAtom: {
      std::string p = pred_of(f.term());
      auto it = levels.find(p);
      if (it == levels.end()) return 0;  // undefined predicates are opaque constants
      return it->second;
    }
    case K::kObj: {
      auto it = levels.find("seq");
      return it == levels.end() ? 0 : it->second;
    }
    case K::kAnd:
    case K::kOr:
      return std::max(formula_level(f.left(), levels), formula_level(f.right(), levels));
    case K::kImp:
      return std::max(formula_level(f.left(), levels) + 1, formula_level(f.right(), levels));
    default:
      return formula_level(f.body(), levels);
  }
}

StratificationReport ClauseSet::check_stratified() const {
  StratificationReport report;
  for (const std::string& p : order_) report.levels[p] = 0;
  int bound = static_cast<int>(order_.size()) + 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const std::string& p : order_) {
      const Definition& d = defs_.at(p);
      for (std::size_t i = 0; i < d.clauses.size(); ++i) {
        int need = formula_level(d.clauses[i].body, report.levels);
        if (need <= report.levels[p]) continue;
        for (const std::string& q : order_)
          if (defs_.at(q).block == d.block) report.levels[q] = std::max(report.levels[q], need);
        changed = true;
        if (need > bound) {
          report.ok = false;
          report.pred = p;
          report.clause_index = static_cast<int>(i);
          report.message = fmt::format(
              "definition of {} is not stratified: clause {} depends negatively on {}", p,
              i + 1, p);
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace nabla
