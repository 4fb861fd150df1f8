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

#ifndef NABLA_SESSION_H_
#define NABLA_SESSION_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nabla/prover.h"
#include "nabla/search.h"
#include "nabla/spec.h"

namespace nabla {

struct Reply {
  enum class Kind { kOk, kState, kProved, kError };
  Kind kind = Kind::kOk;
  std::string text;
  Loc loc;
  bool parse_error = false;
};

struct TheoremRecord {
  std::string name;
  bool proved = false;
  bool admitted = false;
  int tactics = 0;
};

/// One top-level session: the loaded specification, definitions, proved
/// lemmas and at most one theorem under construction.
class Session {
 public:
  explicit Session(std::filesystem::path root = ".", int depth = kDefaultSearchDepth);

  /// Runs one period-terminated command. Never throws for user errors.
  Reply execute(const Command& cmd);
  /// Convenience for a command string; its location is (1, 1).
  Reply execute(const std::string& text);

  /// "Nabla" outside proofs, the theorem name inside.
  std::string prompt() const;
  const Prover* prover() const { return prover_.get(); }
  const LemmaTable& lemmas() const { return lemmas_; }
  const std::vector<TheoremRecord>& records() const { return records_; }
  const Signature& sig() const { return sig_; }
  const ClauseSet& defs() const { return defs_; }
  const SpecProgram& program() const { return program_; }

  /// Drops the unfinished theorem, if any.
  void abort();

 private:
  Reply run(const Command& cmd);
  void ensure_builtins();
  Reply specification(Parser& p);
  Reply declare(Parser& p, bool kind);
  Reply define(const Command& cmd, Flavor flavor, std::size_t keyword_len);
  Reply theorem(Parser& p);
  Reply tactic(const Command& cmd, const std::string& body);

  std::filesystem::path root_;
  int depth_;
  SpecProgram program_;
  Signature sig_;
  ClauseSet defs_;
  bool started_ = false;
  LemmaTable lemmas_;
  std::vector<TheoremRecord> records_;
  std::unique_ptr<Prover> prover_;
};

/// Text of a file; throws std::runtime_error when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace nabla

#endif  // NABLA_SESSION_H_
