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

#include "nabla/syntax.h"

#include <array>
#include <cctype>

#include <fmt/format.h>

namespace nabla {

ParseError::ParseError(Loc loc, const std::string& msg)
    : std::runtime_error(fmt::format("{}:{}: {}", loc.line, loc.col, msg)), loc_(loc) {}

namespace {

constexpr std::array<std::string_view, 24> kSymbols = {
    ":-", ":=", "::", "|-", "->", "=>", "/\\", "\\/", "\\", "(", ")", "{",
    "}",  ",",  ".",  ":",  "=",  "*",  "@",   "+",   "#",  ";", "[", "]"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, Loc start) {
  std::vector<Token> out;
  Loc loc = start;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++loc.line;
        loc.col = 1;
      } else {
        ++loc.col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      Loc begin = loc;
      advance(2);
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) advance(1);
      if (i + 1 >= text.size()) throw ParseError(begin, "unterminated comment");
      advance(2);
      continue;
    }
    Token tok;
    tok.loc = loc;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.kind = Token::Kind::kIdent;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Token::Kind::kNumber;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') throw ParseError(loc, "unterminated string");
      tok.kind = Token::Kind::kString;
      tok.text = std::string(text.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
      out.push_back(std::move(tok));
      continue;
    }
    bool matched = false;
    for (std::string_view sym : kSymbols) {
      if (text.substr(i, sym.size()) == sym) {
        tok.kind = Token::Kind::kSymbol;
        tok.text = std::string(sym);
        advance(sym.size());
        out.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(loc, fmt::format("unexpected character '{}'", c));
  }
  Token end;
  end.loc = loc;
  out.push_back(end);
  return out;
}

std::vector<Command> split_commands(std::string_view text) {
  std::vector<Command> out;
  std::vector<Token> toks = tokenize(text);
  // Recover command text by source offsets: rebuild from line/col map.
  std::vector<std::size_t> line_start{0};
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == '\n') line_start.push_back(i + 1);
  auto offset = [&](Loc l) {
    return line_start[static_cast<std::size_t>(l.line - 1)] + static_cast<std::size_t>(l.col - 1);
  };
  int depth = 0;
  std::optional<Loc> begin;
  for (const Token& t : toks) {
    if (t.kind == Token::Kind::kEnd) break;
    if (!begin) begin = t.loc;
    if (t.kind == Token::Kind::kSymbol) {
      if (t.text == "(" || t.text == "{" || t.text == "[") ++depth;
      if (t.text == ")" || t.text == "}" || t.text == "]") --depth;
      if (t.text == "." && depth <= 0) {
        std::size_t a = offset(*begin);
        std::size_t b = offset(t.loc) + 1;
        out.push_back(Command{std::string(text.substr(a, b - a)), *begin});
        begin.reset();
        depth = 0;
      }
    }
  }
  if (begin) {
    std::size_t a = offset(*begin);
    std::string rest(text.substr(a));
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
    out.push_back(Command{rest, *begin});
  }
  return out;
}

// --- Parser -----------------------------------------------------------------

const Token& Parser::peek(std::size_t ahead) const {
  std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[i];
}

Token Parser::next() {
  Token t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool Parser::accept(std::string_view sym) {
  if (peek().kind == Token::Kind::kSymbol && peek().text == sym) {
    next();
    return true;
  }
  return false;
}

void Parser::expect(std::string_view sym) {
  if (!accept(sym)) {
    const Token& t = peek();
    fail(fmt::format("expected '{}' but found '{}'", sym,
                     t.kind == Token::Kind::kEnd ? "end of input" : t.text));
  }
}

std::string Parser::ident() {
  if (peek().kind != Token::Kind::kIdent)
    fail(fmt::format("expected a name but found '{}'",
                     peek().kind == Token::Kind::kEnd ? "end of input" : peek().text));
  return next().text;
}

int Parser::number() {
  if (peek().kind != Token::Kind::kNumber) fail("expected a number");
  return std::stoi(next().text);
}

void Parser::fail(const std::string& msg) const { throw ParseError(peek().loc, msg); }

Ty Parser::type() {
  std::vector<Ty> parts;
  while (true) {
    Ty t;
    if (accept("(")) {
      t = type();
      expect(")");
    } else {
      t = Ty::base(ident());
    }
    parts.push_back(t);
    if (!accept("->")) break;
  }
  Ty out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) out = Ty::arrow(parts[i], out);
  return out;
}

namespace {

Expr make_op(const std::string& op, Expr a, Expr b) {
  Expr e;
  e.kind = Expr::Kind::kOp;
  e.name = op;
  e.loc = a.loc;
  e.kids = {std::move(a), std::move(b)};
  return e;
}

bool is_binder_word(const Token& t) {
  return t.kind == Token::Kind::kIdent &&
         (t.text == "forall" || t.text == "exists" || t.text == "nabla");
}

}  // namespace

Expr Parser::formula() { return binder_or_imp(false); }

Expr Parser::spec_goal() { return binder_or_imp(true); }

Expr Parser::term() { return cons(false); }

Expr Parser::binder_or_imp(bool spec) {
  if (!spec && is_binder_word(peek())) {
    Expr e;
    e.kind = Expr::Kind::kBinder;
    e.loc = peek().loc;
    e.name = next().text;
    while (!accept(",")) {
      if (accept("(")) {
        std::vector<std::string> names;
        while (!accept(":")) names.push_back(ident());
        Ty ty = type();
        expect(")");
        for (auto& n : names) e.vars.emplace_back(n, ty);
      } else {
        e.vars.emplace_back(ident(), std::nullopt);
      }
    }
    if (e.vars.empty()) fail("binder without variables");
    e.kids.push_back(binder_or_imp(spec));
    return e;
  }
  return imp(spec);
}

Expr Parser::imp(bool spec) {
  if (spec) {
    Expr lhs = spec_imp();
    while (accept(",")) lhs = make_op(",", std::move(lhs), spec_imp());
    return lhs;
  }
  Expr lhs = disj();
  if (accept("->") || accept("=>")) {
    Expr rhs = binder_or_imp(false);
    return make_op("->", std::move(lhs), std::move(rhs));
  }
  return lhs;
}

Expr Parser::spec_imp() {
  Expr lhs = cons(true);
  if (accept("=>")) return make_op("=>", std::move(lhs), spec_imp());
  return lhs;
}

Expr Parser::disj() {
  Expr lhs = conj();
  while (accept("\\/")) {
    Expr rhs = is_binder_word(peek()) ? binder_or_imp(false) : conj();
    lhs = make_op("\\/", std::move(lhs), std::move(rhs));
  }
  return lhs;
}

Expr Parser::conj() {
  Expr lhs = eqn();
  while (accept("/\\")) {
    Expr rhs = is_binder_word(peek()) ? binder_or_imp(false) : eqn();
    lhs = make_op("/\\", std::move(lhs), std::move(rhs));
  }
  return lhs;
}

Expr Parser::eqn() {
  Expr lhs = cons(false);
  if (accept("=")) return make_op("=", std::move(lhs), cons(false));
  return lhs;
}

Expr Parser::cons(bool spec) {
  Expr lhs = app(spec);
  if (accept("::")) return make_op("::", std::move(lhs), cons(spec));
  return lhs;
}

Expr Parser::annotations(Expr e) {
  static const std::array<std::pair<std::string_view, Mark>, 4> marks = {
      {{"*", Mark::kStar}, {"@", Mark::kAt}, {"+", Mark::kPlus}, {"#", Mark::kHash}}};
  for (const auto& [sym, mark] : marks) {
    if (peek().is(sym) && peek().kind == Token::Kind::kSymbol) {
      int level = 0;
      while (accept(sym)) ++level;
      Expr a;
      a.kind = Expr::Kind::kAnn;
      a.loc = e.loc;
      a.mark = mark;
      a.level = level;
      a.kids.push_back(std::move(e));
      return a;
    }
  }
  return e;
}

Expr Parser::app(bool spec) {
  Loc loc = peek().loc;
  std::vector<Expr> items;
  while (true) {
    // A lambda `x\ body` extends as far right as possible.
    if (peek().kind == Token::Kind::kIdent && peek(1).is("\\") &&
        peek(1).kind == Token::Kind::kSymbol && !is_binder_word(peek())) {
      Expr lam;
      lam.kind = Expr::Kind::kLam;
      lam.loc = peek().loc;
      lam.vars.emplace_back(next().text, std::nullopt);
      next();
      lam.kids.push_back(spec ? imp(true) : cons(false));
      items.push_back(std::move(lam));
      break;
    }
    auto p = prim(spec);
    if (!p) break;
    items.push_back(std::move(*p));
  }
  if (items.empty()) {
    const Token& t = peek();
    fail(fmt::format("unexpected '{}'", t.kind == Token::Kind::kEnd ? "end of input" : t.text));
  }
  Expr out;
  if (items.size() == 1) {
    out = std::move(items[0]);
  } else {
    out.kind = Expr::Kind::kApp;
    out.loc = loc;
    out.kids = std::move(items);
  }
  if (!spec) out = annotations(std::move(out));
  return out;
}

std::optional<Expr> Parser::prim(bool spec) {
  const Token& t = peek();
  if (t.kind == Token::Kind::kIdent) {
    if (!spec && is_binder_word(t)) return std::nullopt;
    Expr e;
    e.kind = Expr::Kind::kIdent;
    e.loc = t.loc;
    e.name = next().text;
    return e;
  }
  if (t.kind == Token::Kind::kSymbol && t.text == "(") {
    next();
    Expr e = spec ? imp(true) : binder_or_imp(false);
    expect(")");
    return e;
  }
  if (!spec && t.kind == Token::Kind::kSymbol && t.text == "{") return judgment();
  return std::nullopt;
}

Expr Parser::judgment() {
  Expr e;
  e.kind = Expr::Kind::kObj;
  e.loc = peek().loc;
  expect("{");
  std::vector<Expr> parts;
  parts.push_back(cons(false));
  while (accept(",")) parts.push_back(cons(false));
  if (accept("|-")) {
    e.kids = std::move(parts);
    e.kids.push_back(cons(false));
  } else {
    if (parts.size() != 1) fail("expected '|-' in judgment");
    e.kids = std::move(parts);
  }
  expect("}");
  return annotations(std::move(e));
}

}  // namespace nabla
