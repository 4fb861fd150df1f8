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

#ifndef NABLA_UNIFY_H_
#define NABLA_UNIFY_H_

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nabla/term.h"

namespace nabla {

class UnifyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an equation leaves the higher-order pattern fragment.
class OutsideFragment : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic source of fresh variable names.
class VarSupply {
 public:
  VarSupply() = default;

  /// Marks a name as taken.
  void reserve(const std::string& name) { used_.insert(name); }
  bool taken(const std::string& name) const { return used_.contains(name); }

  /// `base` followed by the smallest numeric suffix not yet taken.
  std::string fresh_name(const std::string& base);

  /// A fresh variable; logic variables are named `?k`.
  Term fresh(const std::string& base, Tag tag, const Ty& ty, std::uint32_t ts = 0);

 private:
  std::set<std::string> used_;
  int logic_counter_ = 0;
};

/// Strips a trailing numeric suffix: "L12" -> "L".
std::string name_base(const std::string& name);

/// Which variables the unifier may instantiate.
enum class UnifyMode {
  kLogic,  // only logic variables (apply, search)
  kEigen,  // logic and eigenvariables (case analysis)
};

/// Higher-order pattern unification. Nominal constants and formula-bound
/// atoms are rigid and can only enter a flexible variable's instance through
/// its arguments. Bindings accumulate in an idempotent substitution.
class Unifier {
 public:
  Unifier(Subst& subst, VarSupply& supply, UnifyMode mode)
      : subst_(subst), supply_(supply), mode_(mode) {}

  /// Throws UnifyFailure or OutsideFragment.
  void unify(const Term& a, const Term& b);

  bool flexible(const Term& v) const;

  /// Binds `name` to `value` (assumed resolved) keeping the substitution idempotent.
  void bind(const std::string& name, const Term& value);

 private:
  void unify_in(const Term& a, const Term& b, std::vector<Ty>& ctx);
  Term deref(const Term& t) const;
  void flex_rigid(const Term& flex, const Term& rigid, std::vector<Ty>& ctx);
  void flex_flex(const Term& a, const Term& b, std::vector<Ty>& ctx);
  bool pattern_args(std::span<const Term> args, std::size_t depth) const;

  Subst& subst_;
  VarSupply& supply_;
  UnifyMode mode_;
};

/// Convenience: unifies and returns the resulting substitution.
Subst unify_terms(const Term& a, const Term& b, VarSupply& supply,
                  UnifyMode mode = UnifyMode::kLogic, Subst start = {});

}  // namespace nabla

#endif  // NABLA_UNIFY_H_
