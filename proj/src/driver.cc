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

#include "nabla/driver.h"

#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace nabla {

namespace {

void print_reply(std::ostream& out, const Reply& r) {
  if (r.text.empty()) return;
  out << '\n' << r.text;
  if (r.text.back() != '\n') out << '\n';
}

bool complete(const std::string& buffer) {
  std::vector<Command> cmds = split_commands(buffer);
  if (cmds.empty()) return false;
  const std::string& last = cmds.back().text;
  return !last.empty() && last.back() == '.';
}

}  // namespace

int replay(Session& session, const std::string& text, const std::string& label, std::ostream& out,
           std::ostream& err) {
  std::vector<Command> cmds;
  try {
    cmds = split_commands(text);
  } catch (const ParseError& e) {
    err << label << ':' << e.what() << '\n';
    return kExitUsage;
  }
  for (const Command& cmd : cmds) {
    out << '\n' << session.prompt() << " < " << cmd.text << '\n';
    Reply r = session.execute(cmd);
    if (r.kind == Reply::Kind::kError) {
      err << label << ':' << r.text << '\n';
      return r.parse_error ? kExitUsage : kExitProofFailure;
    }
    print_reply(out, r);
  }
  if (session.prover() != nullptr) {
    err << fmt::format("{}: theorem {} is not completed\n", label, session.prover()->name());
    return kExitProofFailure;
  }
  return kExitOk;
}

int repl(Session& session, std::istream& in, std::ostream& out, bool strict) {
  std::string buffer, line;
  out << "\n" << session.prompt() << " < " << std::flush;
  while (std::getline(in, line)) {
    buffer += line;
    buffer += '\n';
    bool quit = false;
    try {
      if (!complete(buffer)) continue;
      for (const Command& cmd : split_commands(buffer)) {
        if (cmd.text == "quit." || cmd.text == "#quit.") {
          quit = true;
          break;
        }
        Reply r = session.execute(cmd);
        if (r.kind == Reply::Kind::kError)
          out << "\nError: " << r.text << '\n';
        else
          print_reply(out, r);
      }
    } catch (const ParseError& e) {
      out << "\nError: " << e.what() << '\n';
    }
    buffer.clear();
    if (quit) break;
    out << "\n" << session.prompt() << " < " << std::flush;
  }
  out << '\n';
  if (session.prover() != nullptr) {
    out << fmt::format("Warning: theorem {} is not completed\n", session.prover()->name());
    if (strict) return kExitProofFailure;
  }
  return kExitOk;
}

std::string summary(const Session& session) {
  std::string out;
  for (const TheoremRecord& r : session.records()) {
    const char* status = !r.proved ? "open" : r.admitted ? "admitted" : "proved";
    out += fmt::format("{}\t{}\t{}\n", r.name, status, r.tactics);
  }
  if (const Prover* p = session.prover()) out += fmt::format("{}\topen\t{}\n", p->name(), p->tactic_count());
  return out;
}

}  // namespace nabla
