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

#ifndef COINS_STUDY_EXPORT_H_
#define COINS_STUDY_EXPORT_H_

#include <string>

#include "coins/study/session.h"
#include "coins/util/csv.h"

namespace coins {

// Flat analysis tables, one row per observation; column lists are in
// docs/tables.md.
struct StudyTables {
  CsvTable ratings;
  CsvTable preferences;
  CsvTable choices;
  CsvTable scores;
  CsvTable impressions;
  CsvTable sessions;
};

StudyTables EmptyStudyTables();
void AppendSession(const Session& session, StudyTables& tables);

// Replays every *.jsonl log in `log_dir` (in file name order) and flattens
// the sessions. Throws ValidationError naming the file and sequence number
// of the first corrupt or non-replayable record.
StudyTables ExportSessions(const std::string& log_dir);

// Writes ratings.csv, preferences.csv, choices.csv, scores.csv,
// impressions.csv and sessions.csv into `dir` (created if needed).
void WriteStudyTables(const StudyTables& tables, const std::string& dir);
// Reads the tables back; missing files are an error.
StudyTables ReadStudyTables(const std::string& dir);

}  // namespace coins

#endif  // COINS_STUDY_EXPORT_H_
