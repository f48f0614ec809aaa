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

#include "squeeze/qserver.hpp"

#include <chrono>
#include <filesystem>
#include <thread>
#include <vector>

#include <httplib.h>

namespace squeeze {

nlohmann::json ParamRecord::to_json() const {
  return {{"kind", kind},
          {"key", key},
          {"payload", payload},
          {"timestamp", timestamp},
          {"version", version}};
}

ParamRecord ParamRecord::from_json(const nlohmann::json& j) {
  ParamRecord r;
  r.kind = j.at("kind").get<std::string>();
  r.key = j.at("key").get<std::string>();
  r.payload = j.at("payload");
  r.timestamp = j.at("timestamp").get<double>();
  r.version = j.at("version").get<int64_t>();
  return r;
}

namespace {

bool parse_qubit_key(const std::string& key, int& q) {
  try {
    size_t pos = 0;
    q = std::stoi(key, &pos);
    return pos == key.size() && q >= 0;
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_pair_key(const std::string& key, int& a, int& b) {
  size_t dash = key.find('-');
  if (dash == std::string::npos) return false;
  return parse_qubit_key(key.substr(0, dash), a) &&
         parse_qubit_key(key.substr(dash + 1), b) && a != b;
}

}  // namespace

void validate_param(const std::string& kind, const std::string& key,
                    const nlohmann::json& payload) {
  int a = 0, b = 0;
  if (kind == "rx") {
    if (!parse_qubit_key(key, a))
      throw std::invalid_argument("rx key must be a qubit index");
    try {
      RxEntry::from_json(payload);
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("bad rx payload: ") + e.what());
    }
  } else if (kind == "zx") {
    if (!parse_pair_key(key, a, b))
      throw std::invalid_argument("zx key must look like \"0-1\"");
    try {
      ZxEntry::from_json(payload);
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("bad zx payload: ") + e.what());
    }
  } else {
    throw std::invalid_argument("unknown parameter kind '" + kind + "'");
  }
}

ParamStore::ParamStore(const std::string& data_dir) {
  std::filesystem::create_directories(data_dir);
  std::filesystem::path log = std::filesystem::path(data_dir) / "params.jsonl";
  if (std::filesystem::exists(log)) {
    std::ifstream in(log);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ParamRecord r = ParamRecord::from_json(nlohmann::json::parse(line));
      records_[{r.kind, r.key}] = std::move(r);
    }
  }
  wal_.open(log, std::ios::app);
  if (!wal_) throw std::runtime_error("cannot open " + log.string());
}

int64_t ParamStore::put(const std::string& kind, const std::string& key,
                        const nlohmann::json& payload, double timestamp) {
  validate_param(kind, key, payload);
  std::lock_guard<std::mutex> writer(write_mu_);
  ParamRecord r;
  r.kind = kind;
  r.key = key;
  r.payload = payload;
  r.timestamp = timestamp;
  {
    std::shared_lock<std::shared_mutex> lock(mu_);
    auto it = records_.find({kind, key});
    r.version = it == records_.end() ? 1 : it->second.version + 1;
  }
  wal_ << r.to_json().dump() << '\n';
  wal_.flush();
  if (!wal_) throw std::runtime_error("parameter log write failed");
  {
    std::unique_lock<std::shared_mutex> lock(mu_);
    records_[{kind, key}] = r;
  }
  return r.version;
}

std::optional<ParamRecord> ParamStore::get(const std::string& kind,
                                           const std::string& key) const {
  std::shared_lock<std::shared_mutex> lock(mu_);
  auto it = records_.find({kind, key});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

PulseLibrary library_from_records(const std::vector<ParamRecord>& records) {
  PulseLibrary lib;
  for (const ParamRecord& r : records) {
    int a = 0, b = 0;
    if (r.kind == "rx" && parse_qubit_key(r.key, a)) {
      lib.rx[a] = RxEntry::from_json(r.payload);
    } else if (r.kind == "zx" && parse_pair_key(r.key, a, b)) {
      lib.zx[{a, b}] = ZxEntry::from_json(r.payload);
    }
  }
  return lib;
}

PulseLibrary ParamStore::snapshot() const {
  std::vector<ParamRecord> rs;
  {
    std::shared_lock<std::shared_mutex> lock(mu_);
    rs.reserve(records_.size());
    for (const auto& [k, r] : records_) rs.push_back(r);
  }
  return library_from_records(rs);
}

nlohmann::json ParamStore::health() const {
  std::shared_lock<std::shared_mutex> lock(mu_);
  int64_t rx = 0, zx = 0;
  double last = 0.0;
  for (const auto& [k, r] : records_) {
    (r.kind == "rx" ? rx : zx)++;
    last = std::max(last, r.timestamp);
  }
  return {{"status", "ok"},
          {"records", records_.size()},
          {"rx", rx},
          {"zx", zx},
          {"last_update", last}};
}

struct QueryServer::Impl {
  ParamStore store;
  httplib::Server srv;
  std::thread worker;
  int port = 0;

  explicit Impl(const std::string& dir) : store(dir) {}
};

QueryServer::QueryServer(const std::string& data_dir)
    : impl_(std::make_unique<Impl>(data_dir)) {
  auto& srv = impl_->srv;
  auto* store = &impl_->store;
  const std::string pattern = R"(/v1/params/([a-z]+)/([0-9]+(?:-[0-9]+)?))";
  srv.Get(pattern, [store](const httplib::Request& req,
                           httplib::Response& res) {
    auto rec = store->get(req.matches[1], req.matches[2]);
    if (!rec) {
      res.status = 404;
      res.set_content(R"({"error":"not found"})", "application/json");
      return;
    }
    res.set_content(rec->to_json().dump(), "application/json");
  });
  srv.Put(pattern, [store](const httplib::Request& req,
                           httplib::Response& res) {
    double ts = req.has_param("ts") ? std::stod(req.get_param_value("ts"))
                                    : std::chrono::duration<double>(
                                          std::chrono::system_clock::now()
                                              .time_since_epoch())
                                          .count();
    try {
      nlohmann::json payload = nlohmann::json::parse(req.body);
      int64_t v = store->put(req.matches[1], req.matches[2], payload, ts);
      res.set_content(nlohmann::json{{"version", v}}.dump(),
                      "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(),
                      "application/json");
    }
  });
  srv.Get("/v1/snapshot",
          [store](const httplib::Request&, httplib::Response& res) {
            res.set_content(store->snapshot().to_json().dump(),
                            "application/json");
          });
  srv.Get("/v1/health",
          [store](const httplib::Request&, httplib::Response& res) {
            res.set_content(store->health().dump(), "application/json");
          });
}

QueryServer::~QueryServer() { stop(); }

int QueryServer::start(int port) {
  if (port == 0) {
    impl_->port = impl_->srv.bind_to_any_port("127.0.0.1");
  } else {
    if (!impl_->srv.bind_to_port("127.0.0.1", port))
      throw std::runtime_error("cannot bind port " + std::to_string(port));
    impl_->port = port;
  }
  impl_->worker = std::thread([this] { impl_->srv.listen_after_bind(); });
  impl_->srv.wait_until_ready();
  return impl_->port;
}

void QueryServer::stop() {
  if (impl_->worker.joinable()) {
    impl_->srv.stop();
    impl_->worker.join();
  }
}

ParamStore& QueryServer::store() { return impl_->store; }

struct QueryClient::Impl {
  httplib::Client cli;
  explicit Impl(const std::string& host, int port) : cli(host, port) {
    cli.set_connection_timeout(5);
    cli.set_read_timeout(10);
  }
};

QueryClient::QueryClient(const std::string& host, int port)
    : impl_(std::make_unique<Impl>(host, port)) {}

QueryClient::~QueryClient() = default;

std::optional<ParamRecord> QueryClient::get(const std::string& kind,
                                            const std::string& key) {
  auto res = impl_->cli.Get("/v1/params/" + kind + "/" + key);
  if (!res) throw ParamError("query server unreachable");
  if (res->status == 404) return std::nullopt;
  if (res->status != 200)
    throw ParamError("get failed with status " + std::to_string(res->status));
  return ParamRecord::from_json(nlohmann::json::parse(res->body));
}

int64_t QueryClient::put(const std::string& kind, const std::string& key,
                         const nlohmann::json& payload, double timestamp) {
  std::string path = "/v1/params/" + kind + "/" + key +
                     "?ts=" + std::to_string(timestamp);
  auto res = impl_->cli.Put(path, payload.dump(), "application/json");
  if (!res) throw ParamError("query server unreachable");
  if (res->status == 400)
    throw std::invalid_argument(
        nlohmann::json::parse(res->body).value("error", "bad payload"));
  if (res->status != 200)
    throw ParamError("put failed with status " + std::to_string(res->status));
  return nlohmann::json::parse(res->body).at("version").get<int64_t>();
}

PulseLibrary QueryClient::snapshot() {
  auto res = impl_->cli.Get("/v1/snapshot");
  if (!res || res->status != 200) throw ParamError("snapshot failed");
  return PulseLibrary::from_json(nlohmann::json::parse(res->body));
}

bool QueryClient::healthy() {
  auto res = impl_->cli.Get("/v1/health");
  return res && res->status == 200;
}

std::pair<std::string, int> parse_endpoint(const std::string& url) {
  std::string rest = url;
  auto scheme = rest.find("://");
  if (scheme != std::string::npos) rest = rest.substr(scheme + 3);
  while (!rest.empty() && rest.back() == '/') rest.pop_back();
  auto colon = rest.rfind(':');
  if (colon == std::string::npos || colon + 1 == rest.size())
    throw std::invalid_argument("endpoint needs host:port, got '" + url + "'");
  int port = 0;
  try {
    port = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad port in endpoint '" + url + "'");
  }
  if (port <= 0 || port > 65535)
    throw std::invalid_argument("bad port in endpoint '" + url + "'");
  return {rest.substr(0, colon), port};
}

}  // namespace squeeze
