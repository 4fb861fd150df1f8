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

#ifndef NABLA_SYNTAX_H_
#define NABLA_SYNTAX_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nabla/formula.h"
#include "nabla/term.h"

namespace nabla {

struct Loc {
  int line = 1;
  int col = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(Loc loc, const std::string& msg);
  Loc loc() const { return loc_; }

 private:
  Loc loc_;
};

struct Token {
  enum class Kind { kIdent, kNumber, kString, kSymbol, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  Loc loc;

  bool is(std::string_view sym) const {
    return (kind == Kind::kSymbol || kind == Kind::kIdent) && text == sym;
  }
};

/// Tokenizes; `%` starts a line comment, `/* */` delimits block comments.
std::vector<Token> tokenize(std::string_view text, Loc start = {});

/// A period-terminated command with its source position.
struct Command {
  std::string text;
  Loc loc;
};

/// Splits text into period-terminated commands (periods inside brackets or
/// strings do not terminate). A trailing fragment without a period is
/// returned as a final command.
std::vector<Command> split_commands(std::string_view text);

/// Untyped syntax tree shared by terms, formulas and specification goals.
struct Expr {
  enum class Kind {
    kIdent,   // name
    kApp,     // kids[0] applied to kids[1..]
    kLam,     // vars[0] \ kids[0]
    kBinder,  // name ∈ {forall, exists, nabla, pi}; vars; kids[0]
    kOp,      // name ∈ {->, =>, /\, \/, =, ::, ","}; kids[0], kids[1]
    kObj,     // kids[0..n-2] context entries, kids[n-1] goal
    kAnn,     // kids[0] annotated with mark/level
  };
  Kind kind = Kind::kIdent;
  std::string name;
  std::vector<Expr> kids;
  std::vector<std::pair<std::string, std::optional<Ty>>> vars;
  Mark mark = Mark::kNone;
  int level = 0;
  Loc loc;
};

/// Recursive-descent parser over a token vector.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }
  bool accept(std::string_view sym);
  void expect(std::string_view sym);
  std::string ident();
  int number();
  [[noreturn]] void fail(const std::string& msg) const;

  /// Reasoning-logic formula or term.
  Expr formula();
  /// Term of the object language (no connectives except `::`).
  Expr term();
  /// Specification goal: `,` conjunction, `=>` implication, `pi x\`.
  Expr spec_goal();
  /// Type `a -> b -> c` with parentheses.
  Ty type();

 private:
  Expr binder_or_imp(bool spec);
  Expr imp(bool spec);
  Expr spec_imp();
  Expr disj();
  Expr conj();
  Expr eqn();
  Expr cons(bool spec);
  Expr app(bool spec);
  std::optional<Expr> prim(bool spec);
  Expr judgment();
  Expr annotations(Expr e);

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace nabla

#endif  // NABLA_SYNTAX_H_
