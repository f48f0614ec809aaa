// Copyright 2026 The sQueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQUEEZE_QSERVER_HPP
#define SQUEEZE_QSERVER_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "squeeze/library.hpp"

namespace squeeze {

class ParamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamRecord {
  std::string kind;  // "rx" or "zx"
  std::string key;   // "3" for a qubit, "0-1" for a directed pair
  nlohmann::json payload;
  double timestamp = 0.0;
  int64_t version = 0;

  nlohmann::json to_json() const;
  static ParamRecord from_json(const nlohmann::json& j);
};

// Validates key format and payload schema for a record kind; throws
// std::invalid_argument on violation.
void validate_param(const std::string& kind, const std::string& key,
                    const nlohmann::json& payload);

// The parameter store behind the query server: last-writer-wins records
// with a write-ahead JSONL log that is flushed before a put returns.
// Reads run concurrently; a snapshot sees each record whole.
class ParamStore {
 public:
  explicit ParamStore(const std::string& data_dir);

  int64_t put(const std::string& kind, const std::string& key,
              const nlohmann::json& payload, double timestamp);
  std::optional<ParamRecord> get(const std::string& kind,
                                 const std::string& key) const;
  PulseLibrary snapshot() const;
  nlohmann::json health() const;

 private:
  mutable std::shared_mutex mu_;
  std::mutex write_mu_;
  std::map<std::pair<std::string, std::string>, ParamRecord> records_;
  std::ofstream wal_;
};

// Library view of a set of current records (rx and zx entries only).
PulseLibrary library_from_records(const std::vector<ParamRecord>& records);

// HTTP front for a ParamStore.
//   GET  /v1/params/{kind}/{key}   -> record json or 404
//   PUT  /v1/params/{kind}/{key}   -> {"version": n}, 400 on bad payload
//   GET  /v1/snapshot              -> PulseLibrary json
//   GET  /v1/health                -> counts and last-update timestamp
class QueryServer {
 public:
  explicit QueryServer(const std::string& data_dir);
  ~QueryServer();

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port.
  int start(int port = 0);
  void stop();
  ParamStore& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class QueryClient {
 public:
  QueryClient(const std::string& host, int port);
  ~QueryClient();

  // Returns nullopt on 404; throws ParamError on transport failure.
  std::optional<ParamRecord> get(const std::string& kind,
                                 const std::string& key);
  int64_t put(const std::string& kind, const std::string& key,
              const nlohmann::json& payload, double timestamp);
  PulseLibrary snapshot();
  bool healthy();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Splits "http://host:port" or "host:port" into a host and port pair.
// Throws std::invalid_argument when no port is present.
std::pair<std::string, int> parse_endpoint(const std::string& url);

}  // namespace squeeze

#endif  // SQUEEZE_QSERVER_HPP
