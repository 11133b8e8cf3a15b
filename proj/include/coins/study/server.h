// Copyright 2026 The Coins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COINS_STUDY_SERVER_H_
#define COINS_STUDY_SERVER_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "coins/study/config.h"

namespace coins {

struct ServerOptions {
  std::string address = "0.0.0.0";
  uint16_t port = 8080;     // 0 picks a free port
  std::string log_dir = "logs";
  std::string static_dir;   // empty: no static files
  uint64_t seed = 0;
  int threads = 2;
  // Zero means 1000 / tick_hz milliseconds.
  std::chrono::milliseconds tick_period{0};
};

// Websocket study service plus a small HTTP endpoint on the same port:
//   GET  /ws             websocket upgrade speaking the study protocol
//   POST /api/sessions   creates a session, returns the bootstrap blob
//   GET  /healthz        liveness probe
//   GET  /<path>         files under static_dir (index.html for "/")
// Each session's events are serialized on its own strand; sessions share
// nothing but the log directory.
class ServerState;

class StudyServer {
 public:
  StudyServer(StudyConfig config, ServerOptions options);
  ~StudyServer();
  StudyServer(const StudyServer&) = delete;
  StudyServer& operator=(const StudyServer&) = delete;

  // Binds and starts the worker threads; returns the bound port. Throws
  // ConfigError when the address cannot be bound or the log directory
  // cannot be created.
  uint16_t Start();
  // Blocks until Stop() is called from another thread or a signal handler.
  void Wait();
  void Stop();

  size_t session_count() const;

 private:
  std::shared_ptr<ServerState> impl_;
};

}  // namespace coins

#endif  // COINS_STUDY_SERVER_H_
