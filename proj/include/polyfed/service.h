// Copyright 2026 The polyfed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP/JSON surface. Service::handle is a plain dispatcher so it can be
// exercised without sockets; serve() binds it to an HTTP listener.
//
//   POST /schema/gcs | /schema/lcs | /schema/alias          201 / 400 / 409 / 422
//   POST /provenance/workflows                              201
//   POST /provenance/executions                             201 {"id"}
//   POST /provenance/executions/{id}/transformations        201 / 404 / 409
//   POST /provenance/executions/{id}/end                    200 / 404 / 409
//   GET  /provenance/executions/{id}                        200 / 404
//   POST /query {"text", "explain"}                         200 / 400 / 422
//   GET  /health                                            200
//
// Errors are {"error": <code name>, "message": ...}; query syntax errors add
// "line", "column", "expected" and "found".

#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "polyfed/catalog.h"
#include "polyfed/error.h"
#include "polyfed/federation.h"

namespace polyfed {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> catalog_path;  // persisted after every mutation
  std::optional<std::filesystem::path> fixture_dir;   // loaded at startup when the catalog is new
  int verbosity = 1;                                  // 0 quiet, 1 requests, 2 bodies
};

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

int http_status_for(ErrorCode code);

class Service {
 public:
  // Loads the catalog from config.catalog_path when it exists, otherwise
  // from config.fixture_dir when given. Throws on unreadable inputs.
  explicit Service(ServiceConfig config);
  // For tests and embedding: start from an existing catalog and stores.
  Service(ServiceConfig config, CatalogGraph catalog, AdapterMap adapters);

  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body);

  // Consistent read-only copy of the current catalog.
  std::shared_ptr<const CatalogGraph> catalog() const;
  const ServiceConfig& config() const { return config_; }

 private:
  struct State {
    CatalogGraph catalog;
    AdapterMap adapters;
  };

  std::shared_ptr<const State> snapshot() const;
  // Runs `fn` on a private copy, persists it and publishes it.
  template <class Fn>
  HttpResponse mutate(Fn&& fn);
  void publish(std::shared_ptr<const State> next);

  HttpResponse query(const std::string& body) const;

  ServiceConfig config_;
  mutable std::shared_mutex state_mutex_;  // guards state_ (the pointer)
  std::mutex writer_mutex_;                // serializes mutations
  std::shared_ptr<const State> state_;
};

// Blocks serving HTTP until the process is stopped. Returns non-zero when the
// listener cannot bind.
int serve(Service& service);

}  // namespace polyfed
