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

#ifndef COINS_STUDY_STORE_H_
#define COINS_STUDY_STORE_H_

#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "coins/study/session.h"
#include "json.hpp"

namespace coins {

// One line of a session log:
//   {"seq": n, "ts": <unix ms>, "type": "...", "payload": {...}}
// Record 0 has type "session_start" and carries the SessionInit; every later
// record is an accepted ClientEvent.
struct EventRecord {
  int64_t seq = 0;
  int64_t ts_ms = 0;
  std::string type;
  nlohmann::json payload;
};

nlohmann::json EventRecordToJson(const EventRecord& r);

std::string SessionLogPath(const std::string& log_dir, const std::string& session_id);

// Append-only JSON-lines writer, flushed after every record.
class SessionLogWriter {
 public:
  // Creates the file, or continues an existing one after its last record.
  // Throws ConfigError when the file cannot be opened.
  explicit SessionLogWriter(const std::string& path);
  int64_t Append(const std::string& type, const nlohmann::json& payload);
  int64_t next_seq() const { return next_seq_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  int64_t next_seq_ = 0;
};

// Reads and checks a log: every line must be a well-formed record with
// consecutive sequence numbers. Throws ValidationError naming the sequence
// number of the first bad record.
std::vector<EventRecord> ReadSessionLog(const std::string& path);

// Rebuilds a session from its records. Throws ValidationError when a record
// is rejected by the state machine.
Session ReplaySession(std::span<const EventRecord> records);

// A session bound to its log: accepted events are appended, rejected ones
// are not.
class LoggedSession {
 public:
  // Starts a new session and writes its session_start record.
  LoggedSession(SessionInit init, const std::string& log_dir);
  // Resumes from an existing log file.
  explicit LoggedSession(const std::string& log_path);

  std::vector<nlohmann::json> Apply(const ClientEvent& event);
  const Session& session() const { return session_; }
  int64_t last_ts_ms() const { return last_ts_ms_; }

 private:
  Session session_;
  SessionLogWriter writer_;
  int64_t last_ts_ms_ = 0;
};

int64_t NowUnixMs();

}  // namespace coins

#endif  // COINS_STUDY_STORE_H_
