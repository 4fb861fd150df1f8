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

#ifndef NABLA_SERVER_H_
#define NABLA_SERVER_H_

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>

#include "nabla/session.h"

namespace nabla {

inline constexpr int kProtocolVersion = 1;

/// Per-connection protocol state: a session, replaced on every load.
class Channel {
 public:
  Channel(std::filesystem::path root, int depth);

  /// Handles one request line and returns one reply line (no newline).
  std::string handle(const std::string& line);

 private:
  std::filesystem::path root_;
  int depth_;
  std::unique_ptr<Session> session_;
};

/// TCP server on the loopback interface, one thread per connection.
class Server {
 public:
  Server(std::filesystem::path root, int depth);
  ~Server();

  /// Binds and listens; port 0 picks a free port. Returns the bound port.
  int listen(int port);
  /// Accepts connections until stop() is called.
  void run();
  void stop();

 private:
  std::filesystem::path root_;
  int depth_;
  int fd_ = -1;
  std::atomic<bool> stopping_{false};
};

}  // namespace nabla

#endif  // NABLA_SERVER_H_
