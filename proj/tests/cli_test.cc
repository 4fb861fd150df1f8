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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "nabla/driver.h"

namespace nabla {
namespace {

namespace fs = std::filesystem;

const fs::path kProofs = NABLA_PROOFS_DIR;
const std::string kCli = NABLA_CLI;

const std::vector<std::string> kScripts = {"stlc.thm", "stlc_unique.thm", "pcf.thm", "path.thm",
                                           "member_prune.thm", "stream.thm"};

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / fmt::format("nabla_cli_{}_{}", ::getpid(), counter_++);
    fs::create_directories(path_);
    for (const char* f : {"stlc.sig", "stlc.mod"}) fs::copy_file(kProofs / f, path_ / f);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run_cli(const std::string& args, const std::string& stdin_text = "") {
  TempDir tmp;
  fs::path in = tmp.write("stdin.txt", stdin_text);
  fs::path out = tmp.path() / "out.txt", err = tmp.path() / "err.txt";
  std::string cmd = fmt::format("{} {} < {} > {} 2> {}", kCli, args, in.string(), out.string(), err.string());
  int raw = std::system(cmd.c_str());
  CliRun r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

TEST(Cli, BatchProvesPreservation) {
  CliRun r = run_cli(fmt::format("--batch --summary {}", (kProofs / "stlc.thm").string()));
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out, "type_preserve\tproved\t11\n");
}

TEST(Cli, EveryShippedScriptReplays) {
  for (const std::string& s : kScripts) {
    CliRun r = run_cli(fmt::format("--batch {}", (kProofs / s).string()));
    EXPECT_EQ(r.status, kExitOk) << s << "\n" << r.err;
    EXPECT_NE(r.out.find("Proof completed."), std::string::npos) << s;
  }
}

TEST(Cli, FailingApplyReportsLine) {
  TempDir tmp;
  fs::path script = tmp.write("bad.thm",
                              "Specification \"stlc\".\n"
                              "Theorem t : forall E V A, {eval E V} -> {of E A} -> {of V A}.\n"
                              "induction on 1. intros.\n"
                              "apply IH to H2 H1.\n");
  CliRun r = run_cli(fmt::format("--batch {}", script.string()));
  EXPECT_EQ(r.status, kExitProofFailure);
  EXPECT_NE(r.err.find(script.string() + ":4:1:"), std::string::npos) << r.err;
}

TEST(Cli, ParseErrorIsUsageError) {
  TempDir tmp;
  fs::path script = tmp.write("bad.thm", "Specification \"stlc\".\nTheorem t : forall E, .\n");
  CliRun r = run_cli(fmt::format("--batch {}", script.string()));
  EXPECT_EQ(r.status, kExitUsage) << r.err;
  EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
}

TEST(Cli, UnfinishedTheoremFails) {
  TempDir tmp;
  fs::path script = tmp.write("open.thm", "Specification \"stlc\".\nTheorem t : forall E, {eval E E} -> true.\n");
  CliRun r = run_cli(fmt::format("--batch --summary {}", script.string()));
  EXPECT_EQ(r.status, kExitProofFailure);
  EXPECT_EQ(r.out, "t\topen\t0\n");
  EXPECT_NE(r.err.find("theorem t is not completed"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli("--batch").status, kExitUsage);
  EXPECT_EQ(run_cli("--batch /nonexistent/file.thm").status, kExitUsage);
  EXPECT_EQ(run_cli("--no-such-flag").status, kExitUsage);
  EXPECT_EQ(run_cli("--help").status, kExitOk);
}

TEST(Cli, ReplRecoversFromErrors) {
  CliRun r = run_cli(fmt::format("--root {}", kProofs.string()),
                  "Specification \"stlc\".\n"
                  "Theorem t : forall E, {eval E E} -> true.\n"
                  "intros\n"
                  "  junk junk.\n"
                  "intros.\n"
                  "search.\n");
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Error: "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Proof completed."), std::string::npos) << r.out;
}

TEST(Cli, QuitWithOpenGoalsWarns) {
  std::string input = "Specification \"stlc\".\nTheorem t : forall E, {eval E E} -> true.\nquit.\n";
  CliRun lax = run_cli(fmt::format("--root {}", kProofs.string()), input);
  EXPECT_EQ(lax.status, kExitOk);
  EXPECT_NE(lax.out.find("Warning: theorem t is not completed"), std::string::npos) << lax.out;
  CliRun strict = run_cli(fmt::format("--strict --root {}", kProofs.string()), input);
  EXPECT_EQ(strict.status, kExitProofFailure);
}

TEST(Cli, InteractiveReplayOfStlcScript) {
  // Feeding the script line by line to the REPL ends with a completed proof.
  CliRun r = run_cli(fmt::format("--root {}", kProofs.string()), slurp(kProofs / "stlc.thm"));
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("Proof completed."), std::string::npos);
  EXPECT_EQ(r.out.find("Error"), std::string::npos) << r.out;
}

// --- determinism and REPL/batch agreement -----------------------------------

std::string transcript(const std::string& script, int* rc = nullptr) {
  Session s(kProofs);
  std::ostringstream out, err;
  int code = replay(s, slurp(kProofs / script), script, out, err);
  if (rc != nullptr) *rc = code;
  return out.str() + err.str() + summary(s);
}

TEST(Determinism, ReplayTwiceIsByteIdentical) {
  for (const std::string& s : kScripts) {
    int rc1 = -1, rc2 = -1;
    std::string a = transcript(s, &rc1), b = transcript(s, &rc2);
    EXPECT_EQ(rc1, kExitOk) << s;
    EXPECT_EQ(a, b) << s;
  }
}

TEST(Determinism, CliTranscriptsAreByteIdentical) {
  for (const std::string& s : kScripts) {
    CliRun a = run_cli(fmt::format("--batch {}", (kProofs / s).string()));
    CliRun b = run_cli(fmt::format("--batch {}", (kProofs / s).string()));
    EXPECT_EQ(a.out, b.out) << s;
    EXPECT_EQ(a.status, b.status) << s;
  }
}

TEST(Determinism, ReplVerdictsMatchBatch) {
  for (const std::string& s : kScripts) {
    Session batch(kProofs);
    std::ostringstream sink;
    int batch_rc = replay(batch, slurp(kProofs / s), s, sink, sink);
    Session interactive(kProofs);
    std::istringstream in(slurp(kProofs / s));
    std::ostringstream out;
    int repl_rc = repl(interactive, in, out, true);
    EXPECT_EQ(batch_rc, repl_rc) << s;
    EXPECT_EQ(summary(batch), summary(interactive)) << s;
    ASSERT_EQ(batch.lemmas().size(), interactive.lemmas().size()) << s;
    for (std::size_t i = 0; i < batch.lemmas().size(); ++i)
      EXPECT_EQ(batch.lemmas()[i].first, interactive.lemmas()[i].first) << s;
  }
}

TEST(Determinism, UndoInterleavingsGiveSameFinalState) {
  // Each tactic is followed by undo and redo; the transcript of the final
  // theorem table must not change.
  for (const std::string& s : {"stlc.thm", "member_prune.thm"}) {
    Session plain(kProofs);
    std::ostringstream sink;
    ASSERT_EQ(replay(plain, slurp(kProofs / s), s, sink, sink), kExitOk);
    Session noisy(kProofs);
    for (const Command& cmd : split_commands(slurp(kProofs / s))) {
      Reply r = noisy.execute(cmd);
      ASSERT_NE(r.kind, Reply::Kind::kError) << cmd.text;
      if (r.kind == Reply::Kind::kState && noisy.prover() != nullptr && noisy.prover()->tactic_count() > 0) {
        std::string before = noisy.prover()->show();
        ASSERT_NE(noisy.execute("undo.").kind, Reply::Kind::kError);
        ASSERT_NE(noisy.execute(cmd).kind, Reply::Kind::kError);
        ASSERT_EQ(noisy.prover()->show(), before) << cmd.text;
      }
    }
    EXPECT_EQ(summary(plain), summary(noisy));
  }
}

}  // namespace
}  // namespace nabla
