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

// nabla: batch replay, REPL and session server.

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nabla/driver.h"
#include "nabla/server.h"

int main(int argc, char** argv) {
  CLI::App app{"nabla: a two-level theorem prover"};
  std::string file;
  std::string root;
  bool batch = false, strict = false, show_summary = false;
  int port = -1;
  int depth = nabla::kDefaultSearchDepth;
  app.add_option("file", file, "Theorem script (.thm)");
  app.add_flag("--batch", batch, "Replay the script and exit");
  app.add_option("--serve", port, "Serve the JSON protocol on PORT");
  app.add_option("--root", root, "Directory holding specifications (default: the script's directory)");
  app.add_option("--depth", depth, "Default search depth")->check(CLI::PositiveNumber);
  app.add_flag("--strict", strict, "Fail when a theorem is left open");
  app.add_flag("--summary", show_summary, "Print one line per theorem");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : nabla::kExitUsage;
  }

  if (root.empty())
    root = file.empty() ? "." : std::filesystem::path(file).parent_path().string();
  if (root.empty()) root = ".";

  if (port >= 0) {
    try {
      nabla::Server server(root, depth);
      int bound = server.listen(port);
      std::cerr << "serving on 127.0.0.1:" << bound << std::endl;
      server.run();
    } catch (const std::exception& e) {
      std::cerr << "nabla: " << e.what() << '\n';
      return nabla::kExitUsage;
    }
    return nabla::kExitOk;
  }

  nabla::Session session(root, depth);
  int rc = nabla::kExitOk;
  if (!file.empty()) {
    std::string text;
    try {
      text = nabla::read_file(file);
    } catch (const std::exception& e) {
      std::cerr << "nabla: " << e.what() << '\n';
      return nabla::kExitUsage;
    }
    if (batch) {
      std::ostringstream sink;
      rc = nabla::replay(session, text, file, show_summary ? sink : std::cout, std::cerr);
    } else {
      rc = nabla::replay(session, text, file, std::cout, std::cerr);
      if (rc == nabla::kExitOk || rc == nabla::kExitProofFailure)
        rc = std::max(rc, nabla::repl(session, std::cin, std::cout, strict));
    }
  } else if (batch) {
    std::cerr << "nabla: --batch needs a script\n";
    return nabla::kExitUsage;
  } else {
    rc = nabla::repl(session, std::cin, std::cout, strict);
  }
  if (show_summary) std::cout << nabla::summary(session);
  return rc;
}
