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

#ifndef NABLA_PROVER_H_
#define NABLA_PROVER_H_

#include <string>
#include <utility>
#include <vector>

#include "nabla/elab.h"
#include "nabla/kernel.h"
#include "nabla/syntax.h"

namespace nabla {

/// Proved theorems in declaration order.
using LemmaTable = std::vector<std::pair<std::string, Formula>>;

/// The proof of one theorem: a stack of subgoals (first is focused) and the
/// history needed by undo.
class Prover {
 public:
  Prover(Env env, const LemmaTable* lemmas, std::string name, Formula statement, int depth);

  /// Runs one tactic (text without the final period). Throws TacticError,
  /// ParseError or SpecError and leaves the state unchanged on failure.
  void run(const std::string& text, Loc loc = {});

  bool done() const { return goals_.empty(); }
  bool admitted() const { return admitted_; }
  int tactic_count() const { return tactics_; }
  const std::string& name() const { return name_; }
  const Formula& statement() const { return statement_; }
  const std::vector<Sequent>& goals() const { return goals_; }

  /// Focused subgoal in full, the others by their conclusions.
  std::string show() const;

 private:
  struct Snapshot {
    std::vector<Sequent> goals;
    bool admitted;
    int tactics;
  };

  void step(Parser& p, const std::string& tactic);
  Sequent& focus();
  void replace_focus(std::vector<Sequent> with);
  Formula lookup(const Sequent& s, const std::string& name) const;
  ElabScope scope(const Sequent& s) const;

  void induction(Parser& p);
  void coinduction();
  void apply(Parser& p);

  Env env_;
  const LemmaTable* lemmas_;
  std::string name_;
  Formula statement_;
  int depth_;
  std::vector<Sequent> goals_;
  std::vector<Snapshot> history_;
  bool admitted_ = false;
  int tactics_ = 0;
};

/// Display of one sequent: variables, hypotheses, separator and conclusion.
std::string show_sequent(const Sequent& s);

}  // namespace nabla

#endif  // NABLA_PROVER_H_
