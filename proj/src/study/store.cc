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

#include "coins/study/store.h"

#include <chrono>
#include <filesystem>

#include "coins/errors.h"

namespace coins {

using nlohmann::json;

int64_t NowUnixMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

json EventRecordToJson(const EventRecord& r) {
  return {{"seq", r.seq}, {"ts", r.ts_ms}, {"type", r.type}, {"payload", r.payload}};
}

std::string SessionLogPath(const std::string& log_dir, const std::string& session_id) {
  return (std::filesystem::path(log_dir) / (session_id + ".jsonl")).string();
}

SessionLogWriter::SessionLogWriter(const std::string& path) : path_(path) {
  if (std::filesystem::exists(path)) next_seq_ = ReadSessionLog(path).size();
  out_.open(path, std::ios::app);
  if (!out_) throw ConfigError("cannot open session log '" + path + "'");
}

int64_t SessionLogWriter::Append(const std::string& type, const json& payload) {
  const EventRecord r{next_seq_, NowUnixMs(), type, payload};
  out_ << EventRecordToJson(r).dump() << '\n';
  out_.flush();
  if (!out_) throw ConfigError("write to session log '" + path_ + "' failed");
  return next_seq_++;
}

std::vector<EventRecord> ReadSessionLog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read session log '" + path + "'");
  std::vector<EventRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    const int64_t expected = static_cast<int64_t>(records.size());
    auto corrupt = [&](const std::string& why) {
      return ValidationError("corrupt record at sequence " + std::to_string(expected) +
                             " in '" + path + "': " + why);
    };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw corrupt("not valid JSON");
    }
    EventRecord r;
    try {
      r.seq = j.at("seq").get<int64_t>();
      r.ts_ms = j.at("ts").get<int64_t>();
      r.type = j.at("type").get<std::string>();
      r.payload = j.at("payload");
    } catch (const json::exception&) {
      throw corrupt("missing or mistyped field");
    }
    if (r.seq != expected) throw corrupt("sequence number " + std::to_string(r.seq));
    if ((expected == 0) != (r.type == "session_start")) {
      throw corrupt("session_start must be the first record, and only the first");
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ValidationError("empty session log '" + path + "'");
  return records;
}

Session ReplaySession(std::span<const EventRecord> records) {
  if (records.empty() || records[0].type != "session_start") {
    throw ValidationError("a session log starts with session_start");
  }
  Session s(SessionInitFromJson(records[0].payload));
  for (size_t i = 1; i < records.size(); ++i) {
    try {
      s.Handle({records[i].type, records[i].payload});
    } catch (const std::exception& e) {
      throw ValidationError("record " + std::to_string(records[i].seq) +
                            " does not replay: " + e.what());
    }
  }
  return s;
}

LoggedSession::LoggedSession(SessionInit init, const std::string& log_dir)
    : session_(init), writer_(SessionLogPath(log_dir, init.session_id)) {
  if (writer_.next_seq() != 0) {
    throw ConfigError("session log for '" + init.session_id + "' already exists");
  }
  writer_.Append("session_start", SessionInitToJson(session_.init()));
  last_ts_ms_ = NowUnixMs();
}

namespace {

Session ReplayFile(const std::string& path, int64_t* last_ts) {
  const auto records = ReadSessionLog(path);
  *last_ts = records.back().ts_ms;
  return ReplaySession(records);
}

}  // namespace

LoggedSession::LoggedSession(const std::string& log_path)
    : session_(ReplayFile(log_path, &last_ts_ms_)), writer_(log_path) {}

std::vector<json> LoggedSession::Apply(const ClientEvent& event) {
  std::vector<json> out = session_.Handle(event);
  writer_.Append(event.type, event.payload);
  last_ts_ms_ = NowUnixMs();
  return out;
}

}  // namespace coins
