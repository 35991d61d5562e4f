// Copyright 2026 The srtr Authors.
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

// Repair reports and the local HTTP service used by the annotator.
//
//   GET    /api/rsm                 source, states, inputs, params
//   GET    /api/trace?from=&to=     trace elements with from <= t < to
//   GET    /api/params              current parameter map
//   POST   /api/params              replace the parameter map
//   GET    /api/corrections         pending corrections
//   POST   /api/corrections         append {t, expected}
//   DELETE /api/corrections/{i}     remove the i-th correction
//   POST   /api/repair              {penalty, epsilon, bounds, backend} -> report
//   GET    /api/history             reports of earlier repairs
//   POST   /api/replay              {params} -> replayed next state per step
//
// Errors come back as {"error": {"kind": ..., "detail": ...}} with status 400
// for malformed requests, 404 for unknown timesteps or indices, 409 for a
// correction outside the trace, 422 when the program cannot be repaired.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "srtr/io.hpp"
#include "srtr/repair.hpp"

namespace srtr {

/// {deltas, objective, params, satisfied, solver_ms}. Keys are sorted, so the
/// text is identical for identical results apart from solver_ms.
nlohmann::json repair_report(const RepairResult& r);
std::string format_report(const RepairResult& r);

/// Reads `--bound`-style "name=lo,hi". Throws ConfigError.
std::pair<std::string, std::pair<double, double>> parse_bound(const std::string& text);

struct Session {
  std::string source;
  TransitionFn fn;
  ParamMap params;
  Trace trace;
  std::vector<Correction> corrections;
  std::vector<RepairResult> history;
};

/// Loads and validates the files; `corrections_path` may be empty. Throws
/// IndexError when a correction is outside the trace.
Session load_session(const std::string& rsm_path, const std::string& params_path,
                     const std::string& trace_path, const std::string& corrections_path = "");

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// The HTTP API without the transport. Reads may run concurrently; requests
/// that change the session are serialized.
class Service {
 public:
  /// `solver_command` is used when a repair request selects the smtlib
  /// backend.
  explicit Service(Session session, std::string solver_command = "z3");

  ApiResponse handle(const ApiRequest& request);
  Session snapshot() const;

 private:
  ApiResponse get_trace(const ApiRequest& request) const;
  ApiResponse add_correction(const std::string& body);
  ApiResponse delete_correction(const std::string& index);
  ApiResponse set_params(const std::string& body);
  ApiResponse repair(const std::string& body);
  ApiResponse replay(const std::string& body) const;

  mutable std::shared_mutex mu_;
  Session s_;
  std::string solver_command_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string static_dir;
};

/// httplib front end for a Service.
class HttpServer {
 public:
  HttpServer(Service& service, ServeOptions options);
  ~HttpServer();

  /// Binds the socket and returns the port. Throws IoError.
  int bind();
  /// Serves until stop() is called from another thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace srtr
