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

#include "nabla/server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "nabla/printer.h"

namespace nabla {

using json = nlohmann::json;

namespace {

json hyp_list(const std::vector<Hyp>& hs) {
  json out = json::array();
  for (const Hyp& h : hs) out.push_back({{"name", h.name}, {"formula", show(h.f)}});
  return out;
}

json state_of(const Session& s) {
  json j;
  const Prover* p = s.prover();
  if (p == nullptr) {
    j["theorem"] = nullptr;
    j["subgoals"] = json::array();
    j["remaining"] = 0;
    return j;
  }
  j["theorem"] = p->name();
  j["statement"] = show(p->statement());
  json goals = json::array();
  for (const Sequent& g : p->goals()) {
    json vars = json::array();
    for (const Term& v : g.vars) vars.push_back(v.name());
    goals.push_back({{"variables", vars},
                     {"ihs", hyp_list(g.ihs)},
                     {"hyps", hyp_list(g.hyps)},
                     {"goal", show(g.goal)}});
  }
  j["subgoals"] = goals;
  j["remaining"] = p->goals().size();
  j["display"] = p->show();
  return j;
}

json reply_json(const Session& s, const Reply& r) {
  json j;
  switch (r.kind) {
    case Reply::Kind::kError:
      j["kind"] = "error";
      j["message"] = r.text;
      j["line"] = r.loc.line;
      j["col"] = r.loc.col;
      return j;
    case Reply::Kind::kProved:
      j = state_of(s);
      j["kind"] = "proved";
      j["theorem"] = s.records().empty() ? json(nullptr) : json(s.records().back().name);
      j["message"] = r.text;
      return j;
    default:
      j = state_of(s);
      j["kind"] = "state";
      j["message"] = r.text;
      return j;
  }
}

json error_json(const std::string& msg) { return {{"kind", "error"}, {"message", msg}}; }

}  // namespace

Channel::Channel(std::filesystem::path root, int depth)
    : root_(std::move(root)), depth_(depth) {}

std::string Channel::handle(const std::string& line) {
  json reply;
  json id = nullptr;
  try {
    json req = json::parse(line);
    if (!req.is_object()) throw std::invalid_argument("request must be an object");
    if (req.contains("id")) id = req["id"];
    if (req.contains("v") && req["v"] != kProtocolVersion)
      throw std::invalid_argument("unsupported protocol version");
    std::string kind = req.at("kind").get<std::string>();
    if (kind == "load") {
      std::string text;
      if (req.contains("path")) {
        std::filesystem::path path = req["path"].get<std::string>();
        if (path.is_relative()) path = root_ / path;
        text = read_file(path);
      } else {
        text = req.at("text").get<std::string>();
      }
      session_ = std::make_unique<Session>(root_, depth_);
      Reply last;
      for (const Command& cmd : split_commands(text)) {
        last = session_->execute(cmd);
        if (last.kind == Reply::Kind::kError) break;
      }
      reply = reply_json(*session_, last);
    } else if (kind == "command" || kind == "undo" || kind == "state") {
      if (!session_) session_ = std::make_unique<Session>(root_, depth_);
      if (kind == "state") {
        reply = state_of(*session_);
        reply["kind"] = "state";
      } else {
        std::string text = kind == "undo" ? "undo." : req.at("text").get<std::string>();
        std::vector<Command> cmds = split_commands(text);
        if (cmds.size() != 1) throw std::invalid_argument("expected exactly one command");
        reply = reply_json(*session_, session_->execute(cmds.front()));
      }
    } else {
      throw std::invalid_argument("unknown message kind '" + kind + "'");
    }
  } catch (const std::exception& e) {
    reply = error_json(e.what());
  }
  reply["v"] = kProtocolVersion;
  reply["id"] = id;
  return reply.dump();
}

Server::Server(std::filesystem::path root, int depth) : root_(std::move(root)), depth_(depth) {}

Server::~Server() {
  if (fd_ >= 0) ::close(fd_);
}

int Server::listen(int port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw std::runtime_error(std::strerror(errno));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 16) < 0)
    throw std::runtime_error(std::strerror(errno));
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

void Server::run() {
  while (!stopping_) {
    int conn = ::accept(fd_, nullptr, nullptr);
    if (conn < 0) {
      if (stopping_ || errno == EBADF || errno == EINVAL) return;
      continue;
    }
    std::thread([conn, root = root_, depth = depth_] {
      Channel channel(root, depth);
      std::string buffer;
      char chunk[4096];
      for (;;) {
        ssize_t n = ::recv(conn, chunk, sizeof chunk, 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t nl;
        while ((nl = buffer.find('\n')) != std::string::npos) {
          std::string line = buffer.substr(0, nl);
          buffer.erase(0, nl + 1);
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          std::string out = channel.handle(line) + "\n";
          const char* p = out.data();
          std::size_t left = out.size();
          while (left > 0) {
            ssize_t w = ::send(conn, p, left, MSG_NOSIGNAL);
            if (w <= 0) break;
            p += w;
            left -= static_cast<std::size_t>(w);
          }
        }
      }
      ::close(conn);
    }).detach();
  }
}

void Server::stop() {
  stopping_ = true;
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

}  // namespace nabla
