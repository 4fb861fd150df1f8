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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <thread>

#include <gtest/gtest.h>
#include <json.hpp>

#include "nabla/server.h"
#include "nabla/session.h"
#include "nabla/syntax.h"

namespace nabla {
namespace {

using json = nlohmann::json;

const std::filesystem::path kProofs = NABLA_PROOFS_DIR;

json ask(Channel& c, const json& req) { return json::parse(c.handle(req.dump())); }

const char* kOpening =
    "Specification \"stlc\".\n"
    "Theorem type_preserve : forall E V A, {eval E V} -> {of E A} -> {of V A}.\n";

TEST(Protocol, LoadThenIntros) {
  Channel c(kProofs, 5);
  json r = ask(c, {{"v", 1}, {"id", 1}, {"kind", "load"}, {"text", kOpening}});
  EXPECT_EQ(r["kind"], "state");
  EXPECT_EQ(r["v"], 1);
  EXPECT_EQ(r["id"], 1);
  EXPECT_EQ(r["theorem"], "type_preserve");
  r = ask(c, {{"id", 2}, {"kind", "command"}, {"text", "intros."}});
  ASSERT_EQ(r["kind"], "state") << r.dump();
  ASSERT_EQ(r["subgoals"].size(), 1u);
  EXPECT_EQ(r["remaining"], 1);
  const json& g = r["subgoals"][0];
  ASSERT_EQ(g["hyps"].size(), 2u);
  EXPECT_EQ(g["hyps"][0]["name"], "H1");
  EXPECT_EQ(g["hyps"][0]["formula"], "{eval E V}");
  EXPECT_EQ(g["hyps"][1]["formula"], "{of E A}");
  EXPECT_EQ(g["goal"], "{of V A}");
  EXPECT_EQ(g["variables"], json::array({"E", "V", "A"}));
  EXPECT_EQ(r["id"], 2);
}

TEST(Protocol, LoadByPath) {
  Channel c(kProofs, 5);
  json r = ask(c, {{"kind", "load"}, {"path", "stlc.thm"}});
  EXPECT_EQ(r["kind"], "proved") << r.dump();
  EXPECT_EQ(r["theorem"], "type_preserve");
  EXPECT_EQ(r["remaining"], 0);
}

TEST(Protocol, CommandWithoutTheoremIsError) {
  Channel c(kProofs, 5);
  json r = ask(c, {{"id", "x"}, {"kind", "command"}, {"text", "intros."}});
  EXPECT_EQ(r["kind"], "error");
  EXPECT_EQ(r["id"], "x");
  EXPECT_NE(r["message"].get<std::string>().find("no theorem in progress"), std::string::npos);
}

TEST(Protocol, MalformedRequests) {
  Channel c(kProofs, 5);
  EXPECT_EQ(json::parse(c.handle("not json"))["kind"], "error");
  EXPECT_EQ(ask(c, {{"kind", "dance"}})["kind"], "error");
  EXPECT_EQ(ask(c, {{"v", 2}, {"kind", "state"}})["kind"], "error");
  EXPECT_EQ(ask(c, {{"kind", "command"}, {"text", "intros. intros."}})["kind"], "error");
  json r = ask(c, {{"kind", "load"}, {"text", kOpening}});
  r = ask(c, {{"kind", "command"}, {"text", "case H9."}});
  EXPECT_EQ(r["kind"], "error");
  EXPECT_EQ(r["line"], 1);
}

TEST(Protocol, UndoAndState) {
  Channel c(kProofs, 5);
  json opened = ask(c, {{"kind", "load"}, {"text", kOpening}});
  ask(c, {{"kind", "command"}, {"text", "intros."}});
  json undone = ask(c, {{"kind", "undo"}});
  EXPECT_EQ(undone["display"], opened["display"]);
  json state = ask(c, {{"kind", "state"}});
  EXPECT_EQ(state["subgoals"], opened["subgoals"]);
}

TEST(Protocol, ReplayComplete) {
  // Re-sending the recorded command messages of a successful session
  // reproduces the proved verdict.
  std::vector<json> recorded;
  for (const Command& cmd : split_commands(read_file(kProofs / "stlc.thm")))
    recorded.push_back({{"kind", "command"}, {"text", cmd.text}});
  json last;
  for (int round = 0; round < 2; ++round) {
    Channel c(kProofs, 5);
    json final;
    for (const json& req : recorded) {
      final = ask(c, req);
      ASSERT_NE(final["kind"], "error") << final.dump();
    }
    EXPECT_EQ(final["kind"], "proved");
    if (round == 1) EXPECT_EQ(final, last);
    last = final;
  }
}

// --- sockets -----------------------------------------------------------------

class Client {
 public:
  explicit Client(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<uint16_t>(port));
    ok_ = ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0;
  }
  ~Client() { ::close(fd_); }
  bool ok() const { return ok_; }

  json ask(const json& req) {
    std::string line = req.dump() + "\n";
    ::send(fd_, line.data(), line.size(), MSG_NOSIGNAL);
    while (buffer_.find('\n') == std::string::npos) {
      char chunk[4096];
      ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0) return json();
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
    std::size_t nl = buffer_.find('\n');
    std::string reply = buffer_.substr(0, nl);
    buffer_.erase(0, nl + 1);
    return json::parse(reply);
  }

 private:
  int fd_ = -1;
  bool ok_ = false;
  std::string buffer_;
};

TEST(Server, IndependentConnections) {
  Server server(kProofs, 5);
  int port = server.listen(0);
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.run(); });
  {
    Client a(port), b(port);
    ASSERT_TRUE(a.ok());
    ASSERT_TRUE(b.ok());
    EXPECT_EQ(a.ask({{"kind", "load"}, {"text", kOpening}})["kind"], "state");
    json ra = a.ask({{"kind", "command"}, {"text", "intros."}});
    EXPECT_EQ(ra["subgoals"].size(), 1u);
    // b has no theorem loaded.
    EXPECT_EQ(b.ask({{"kind", "command"}, {"text", "intros."}})["kind"], "error");
    EXPECT_EQ(b.ask({{"kind", "state"}})["theorem"], nullptr);
    EXPECT_EQ(a.ask({{"kind", "state"}})["theorem"], "type_preserve");
  }
  server.stop();
  loop.join();
}

}  // namespace
}  // namespace nabla
