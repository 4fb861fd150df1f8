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

#include "nabla/session.h"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "nabla/printer.h"

namespace nabla {

namespace {

Reply error_at(Loc loc, const std::string& msg) {
  Reply r;
  r.kind = Reply::Kind::kError;
  r.loc = loc;
  r.text = fmt::format("{}:{}: {}", loc.line, loc.col, msg);
  return r;
}

Reply ok(std::string text = {}) {
  Reply r;
  r.text = std::move(text);
  return r;
}

void expect_final(Parser& p) {
  p.expect(".");
  if (!p.at_end()) p.fail(fmt::format("unexpected '{}'", p.peek().text));
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Session::Session(std::filesystem::path root, int depth)
    : root_(std::move(root)), depth_(depth), sig_(program_.sig()) {}

std::string Session::prompt() const { return prover_ ? prover_->name() : "Nabla"; }

void Session::abort() {
  if (!prover_) return;
  records_.push_back(TheoremRecord{prover_->name(), false, prover_->admitted(), prover_->tactic_count()});
  prover_.reset();
}

void Session::ensure_builtins() {
  if (started_) return;
  sig_ = program_.sig();
  install_builtins(program_, sig_, defs_);
  started_ = true;
}

Reply Session::execute(const std::string& text) { return execute(Command{text, Loc{}}); }

Reply Session::execute(const Command& cmd) {
  try {
    return run(cmd);
  } catch (const ParseError& e) {
    Reply r = error_at(e.loc(), "");
    r.text = e.what();
    r.parse_error = true;
    return r;
  } catch (const OutsideFragment& e) {
    return error_at(cmd.loc, fmt::format("outside the pattern fragment: {}", e.what()));
  } catch (const std::exception& e) {
    return error_at(cmd.loc, e.what());
  }
}

Reply Session::run(const Command& cmd) {
  Parser p(tokenize(cmd.text, cmd.loc));
  if (p.at_end() || p.peek().is(".")) return ok();
  std::string word = p.peek().text;
  if (word == "Specification") {
    p.next();
    return specification(p);
  }
  if (word == "Kind" || word == "Type") {
    p.next();
    return declare(p, word == "Kind");
  }
  if (word == "Define") return define(cmd, Flavor::kInductive, word.size());
  if (word == "CoDefine") return define(cmd, Flavor::kCoinductive, word.size());
  if (word == "Theorem" || word == "Lemma") {
    p.next();
    return theorem(p);
  }
  if (word == "Qed") {
    p.next();
    expect_final(p);
    if (prover_) return error_at(cmd.loc, "the proof is not complete");
    return ok();
  }
  if (word == "abort") {
    p.next();
    expect_final(p);
    if (!prover_) return error_at(cmd.loc, "no theorem in progress");
    abort();
    return ok("Proof aborted.");
  }
  std::string body = cmd.text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
  if (body.empty() || body.back() != '.') throw ParseError(cmd.loc, "missing final '.'");
  body.pop_back();
  return tactic(cmd, body);
}

Reply Session::specification(Parser& p) {
  if (p.peek().kind != Token::Kind::kString) p.fail("expected a quoted specification name");
  Token name = p.next();
  expect_final(p);
  if (started_) throw ParseError(name.loc, "Specification must come first");
  std::filesystem::path base = root_ / name.text;
  std::filesystem::path sig_path = base, mod_path = base;
  sig_path += ".sig";
  mod_path += ".mod";
  try {
    program_.load_sig(read_file(sig_path));
    program_.load_mod(read_file(mod_path));
  } catch (const ParseError& e) {
    program_ = SpecProgram();
    throw ParseError(name.loc, fmt::format("in specification {}: {}", name.text, e.what()));
  } catch (const std::exception&) {
    program_ = SpecProgram();
    throw;
  }
  ensure_builtins();
  return ok(fmt::format("Loaded specification {}.", name.text));
}

Reply Session::declare(Parser& p, bool kind) {
  ensure_builtins();
  std::vector<std::pair<std::string, Loc>> names;
  do {
    Loc at = p.peek().loc;
    names.emplace_back(p.ident(), at);
  } while (p.accept(","));
  if (kind) {
    if (!p.peek().is("type")) p.fail("expected 'type'");
    p.next();
    expect_final(p);
    for (const auto& [n, at] : names) {
      if (sig_.has_kind(n)) throw ParseError(at, fmt::format("type {} is already declared", n));
      sig_.add_kind(n);
    }
    return ok();
  }
  Loc at = p.peek().loc;
  Ty ty = surface_type(p.type());
  expect_final(p);
  try {
    sig_.check_type(ty);
  } catch (const SignatureError& e) {
    throw ParseError(at, e.what());
  }
  for (const auto& [n, nat] : names) {
    if (sig_.has_const(n)) throw ParseError(nat, fmt::format("{} is already declared", n));
    sig_.add_const(n, ty);
  }
  return ok();
}

Reply Session::define(const Command& cmd, Flavor flavor, std::size_t keyword_len) {
  ensure_builtins();
  if (prover_) return error_at(cmd.loc, "finish the current proof first");
  std::string text = cmd.text;
  text.replace(0, keyword_len, std::string(keyword_len, ' '));
  Signature sig = sig_;
  ClauseSet defs = defs_;
  std::vector<Definition> out = elaborate_define(text, cmd.loc, sig, flavor, defs.next_block());
  std::vector<std::string> preds;
  for (Definition& d : out) {
    preds.push_back(d.pred);
    defs.add(std::move(d));
  }
  StratificationReport rep = defs.check_stratified();
  if (!rep.ok) return error_at(cmd.loc, rep.message);
  sig_ = std::move(sig);
  defs_ = std::move(defs);
  return ok(fmt::format("Defined {}.", fmt::join(preds, ", ")));
}

Reply Session::theorem(Parser& p) {
  ensure_builtins();
  Loc at = p.peek().loc;
  std::string name = p.ident();
  p.expect(":");
  Expr e = p.formula();
  expect_final(p);
  if (prover_) throw ParseError(at, "finish the current proof first");
  for (const auto& [n, f] : lemmas_)
    if (n == name) throw ParseError(at, fmt::format("{} is already proved", name));
  ElabScope scope;
  scope.sig = &sig_;
  scope.implicit_vars = false;
  scope.new_nominals = false;
  Formula f = elaborate_formula(e, scope);
  prover_ = std::make_unique<Prover>(Env{&sig_, &defs_}, &lemmas_, name, f, depth_);
  Reply r;
  r.kind = Reply::Kind::kState;
  r.text = prover_->show();
  return r;
}

Reply Session::tactic(const Command& cmd, const std::string& body) {
  if (!prover_) return error_at(cmd.loc, "no theorem in progress");
  prover_->run(body, cmd.loc);
  Reply r;
  if (prover_->done()) {
    records_.push_back(TheoremRecord{prover_->name(), true, prover_->admitted(), prover_->tactic_count()});
    lemmas_.emplace_back(prover_->name(), prover_->statement());
    prover_.reset();
    r.kind = Reply::Kind::kProved;
    r.text = "Proof completed.";
    return r;
  }
  r.kind = Reply::Kind::kState;
  r.text = prover_->show();
  return r;
}

}  // namespace nabla
