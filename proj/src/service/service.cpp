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

#include "srtr/service.hpp"

#include <charconv>
#include <mutex>

#include "srtr/dsl.hpp"
#include "srtr/error.hpp"
#include "srtr/interp.hpp"
#include "srtr/peval.hpp"

namespace srtr {
namespace {

using nlohmann::json;

json error_json(ErrorKind kind, const std::string& detail) {
  return {{"error", {{"kind", std::string(error_kind_name(kind))}, {"detail", detail}}}};
}

ApiResponse reply(int status, const json& body) { return {status, body.dump(2) + "\n"}; }

ApiResponse fail(int status, ErrorKind kind, const std::string& detail) {
  return reply(status, error_json(kind, detail));
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSchemaError:
    case ErrorKind::kSignatureMismatch:
    case ErrorKind::kConfigError:
    case ErrorKind::kKeyError:
    case ErrorKind::kUnknownState:
    case ErrorKind::kParseError:
      return 400;
    case ErrorKind::kIndexError:
      return 409;
    case ErrorKind::kNonAffine:
      return 422;
    default:
      return 500;
  }
}

json parse_body(const std::string& body, bool allow_empty) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) {
    if (allow_empty) return json::object();
    throw Error(ErrorKind::kSchemaError, "request body is empty");
  }
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kSchemaError, "request body is not valid JSON");
  return j;
}

std::optional<int> to_int(const std::string& s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

double number_field(const json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) {
    throw Error(ErrorKind::kSchemaError, std::string("'") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

RepairOptions repair_options(const json& j, const std::string& solver_command) {
  if (!j.is_object()) throw Error(ErrorKind::kSchemaError, "repair request must be a JSON object");
  RepairOptions o;
  o.solver_command = solver_command;
  o.penalty = number_field(j, "penalty", o.penalty);
  o.epsilon = number_field(j, "epsilon", o.epsilon);
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    if (!b.is_object()) throw Error(ErrorKind::kSchemaError, "'bounds' must map names to [lo, hi]");
    for (const auto& [name, v] : b.items()) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw Error(ErrorKind::kSchemaError, "bound for '" + name + "' must be [lo, hi]");
      }
      o.bounds[name] = {v[0].get<double>(), v[1].get<double>()};
    }
  }
  if (j.contains("backend")) {
    const json& b = j.at("backend");
    if (b == "internal") {
      o.backend = Backend::kInternal;
    } else if (b == "smtlib") {
      o.backend = Backend::kSmtlib;
    } else {
      throw Error(ErrorKind::kSchemaError, "'backend' must be \"internal\" or \"smtlib\"");
    }
  }
  return o;
}

bool in_trace(const Trace& trace, int t) {
  return !trace.empty() && t >= trace.front().t && t <= trace.back().t;
}

}  // namespace

json repair_report(const RepairResult& r) {
  json deltas = json::object();
  for (const auto& [name, d] : r.deltas) deltas[name] = d;
  return {{"deltas", deltas},
          {"objective", r.objective},
          {"params", params_to_json(r.params)},
          {"satisfied", r.satisfied},
          {"solver_ms", r.stats.millis}};
}

std::string format_report(const RepairResult& r) { return repair_report(r).dump(2) + "\n"; }

std::pair<std::string, std::pair<double, double>> parse_bound(const std::string& text) {
  auto eq = text.find('=');
  auto comma = text.find(',', eq == std::string::npos ? 0 : eq);
  auto bad = [&] {
    return Error(ErrorKind::kConfigError, "bound '" + text + "' must look like name=lo,hi");
  };
  if (eq == std::string::npos || eq == 0 || comma == std::string::npos) throw bad();
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != s.size()) throw bad();
    return v;
  };
  return {text.substr(0, eq),
          {num(text.substr(eq + 1, comma - eq - 1)), num(text.substr(comma + 1))}};
}

Session load_session(const std::string& rsm_path, const std::string& params_path,
                     const std::string& trace_path, const std::string& corrections_path) {
  Session s;
  s.source = read_file(rsm_path);
  s.fn = parse_rsm(s.source);
  s.params = parse_params(read_file(params_path));
  validate_params(s.fn.sig, s.params);
  s.trace = parse_trace(read_file(trace_path));
  validate_trace(s.fn.sig, s.trace);
  if (!corrections_path.empty()) {
    s.corrections = parse_corrections(read_file(corrections_path));
    validate_corrections(s.fn.sig, s.corrections);
    for (const auto& c : s.corrections) {
      if (!in_trace(s.trace, c.t)) {
        throw Error(ErrorKind::kIndexError,
                    "correction at t=" + std::to_string(c.t) + " is outside the trace");
      }
    }
  }
  return s;
}

Service::Service(Session session, std::string solver_command)
    : s_(std::move(session)), solver_command_(std::move(solver_command)) {}

Session Service::snapshot() const {
  std::shared_lock lock(mu_);
  return s_;
}

ApiResponse Service::handle(const ApiRequest& req) {
  try {
    const std::string& m = req.method;
    const std::string& p = req.path;
    if (p == "/api/rsm" && m == "GET") {
      std::shared_lock lock(mu_);
      const Signature& sig = s_.fn.sig;
      json inputs = json::object();
      for (const auto& d : sig.inputs) inputs[d.name] = type_name(d.type);
      Classification cls = classify_params(s_.fn);
      return reply(200, {{"source", s_.source},
                         {"repairable", cls.rep},
                         {"unrepairable", cls.unrep},
                         {"states", sig.states},
                         {"start", sig.start},
                         {"end", sig.end},
                         {"inputs", inputs},
                         {"params", sig.params}});
    }
    if (p == "/api/trace" && m == "GET") return get_trace(req);
    if (p == "/api/params" && m == "GET") {
      std::shared_lock lock(mu_);
      return reply(200, params_to_json(s_.params));
    }
    if (p == "/api/params" && m == "POST") return set_params(req.body);
    if (p == "/api/corrections" && m == "GET") {
      std::shared_lock lock(mu_);
      return reply(200, corrections_to_json(s_.corrections));
    }
    if (p == "/api/corrections" && m == "POST") return add_correction(req.body);
    const std::string prefix = "/api/corrections/";
    if (p.rfind(prefix, 0) == 0 && m == "DELETE") return delete_correction(p.substr(prefix.size()));
    if (p == "/api/repair" && m == "POST") return repair(req.body);
    if (p == "/api/history" && m == "GET") {
      std::shared_lock lock(mu_);
      json h = json::array();
      for (const auto& r : s_.history) h.push_back(repair_report(r));
      return reply(200, h);
    }
    if (p == "/api/replay" && m == "POST") return replay(req.body);
    return fail(404, ErrorKind::kKeyError, "no endpoint " + m + " " + p);
  } catch (const Error& e) {
    return fail(status_for(e.kind()), e.kind(), e.what());
  }
}

ApiResponse Service::get_trace(const ApiRequest& req) const {
  std::shared_lock lock(mu_);
  const Trace& tr = s_.trace;
  int lo = tr.empty() ? 0 : tr.front().t;
  int hi = tr.empty() ? 0 : tr.back().t + 1;
  int from = lo, to = hi;
  for (auto [key, target] : {std::pair{"from", &from}, std::pair{"to", &to}}) {
    auto it = req.query.find(key);
    if (it == req.query.end()) continue;
    auto v = to_int(it->second);
    if (!v) return fail(400, ErrorKind::kSchemaError, std::string("'") + key + "' must be an integer");
    *target = *v;
  }
  if (req.query.count("from") && !in_trace(tr, from)) {
    return fail(404, ErrorKind::kIndexError, "no timestep " + std::to_string(from) + " in the trace");
  }
  if (from > to) return fail(400, ErrorKind::kSchemaError, "'from' is after 'to'");
  json out = json::array();
  for (const auto& e : tr) {
    if (e.t >= from && e.t < to) out.push_back(trace_element_to_json(e));
  }
  return reply(200, out);
}

ApiResponse Service::set_params(const std::string& body) {
  ParamMap p = params_from_json(parse_body(body, false));
  std::unique_lock lock(mu_);
  validate_params(s_.fn.sig, p);
  s_.params = std::move(p);
  return reply(200, params_to_json(s_.params));
}

ApiResponse Service::add_correction(const std::string& body) {
  Correction c = correction_from_json(parse_body(body, false));
  std::unique_lock lock(mu_);
  validate_corrections(s_.fn.sig, {c});
  if (!in_trace(s_.trace, c.t)) {
    return fail(409, ErrorKind::kIndexError,
                "correction at t=" + std::to_string(c.t) + " is outside the trace");
  }
  s_.corrections.push_back(c);
  return reply(201, {{"index", s_.corrections.size() - 1},
                     {"corrections", corrections_to_json(s_.corrections)}});
}

ApiResponse Service::delete_correction(const std::string& index) {
  std::unique_lock lock(mu_);
  auto i = to_int(index);
  if (!i) return fail(400, ErrorKind::kSchemaError, "correction index must be an integer");
  if (*i < 0 || *i >= static_cast<int>(s_.corrections.size())) {
    return fail(404, ErrorKind::kIndexError, "no correction " + index);
  }
  s_.corrections.erase(s_.corrections.begin() + *i);
  return reply(200, corrections_to_json(s_.corrections));
}

ApiResponse Service::repair(const std::string& body) {
  RepairOptions o = repair_options(parse_body(body, true), solver_command_);
  std::unique_lock lock(mu_);
  RepairResult r = srtr::srtr(s_.fn, s_.params, s_.trace, s_.corrections, o);
  s_.history.push_back(r);
  return {200, format_report(r)};
}

ApiResponse Service::replay(const std::string& body) const {
  json j = parse_body(body, true);
  if (!j.is_object()) return fail(400, ErrorKind::kSchemaError, "replay request must be a JSON object");
  std::shared_lock lock(mu_);
  ParamMap params = s_.params;
  if (j.contains("params")) {
    params = params_from_json(j.at("params"));
    validate_params(s_.fn.sig, params);
  }
  json steps = json::array();
  for (const auto& e : s_.trace) {
    json step = {{"t", e.t}, {"state", e.state}};
    try {
      step["next"] = step_transition(s_.fn, e, params);
    } catch (const Error& err) {
      step["next"] = nullptr;
      step["error"] = error_json(err.kind(), err.what())["error"];
    }
    steps.push_back(step);
  }
  return reply(200, {{"params", params_to_json(params)}, {"steps", steps}});
}

}  // namespace srtr
