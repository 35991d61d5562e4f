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

#include "srtr/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "srtr/error.hpp"

namespace srtr {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(ErrorKind::kSchemaError, msg);
}

json parse_json(std::string_view source, const std::string& what) {
  try {
    return json::parse(source);
  } catch (const json::parse_error& e) {
    schema_error(what + " is not valid JSON: " + e.what());
  }
}

double finite_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where + " must be a number");
  double d = j.get<double>();
  if (!std::isfinite(d)) schema_error(where + " must be finite");
  return d;
}

Value value_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return finite_number(j, where);
  if (j.is_array() && j.size() == 2) {
    return Vec2{finite_number(j[0], where + "[0]"),
                finite_number(j[1], where + "[1]")};
  }
  schema_error(where + " must be a number or a [x, y] pair");
}

ValueMap value_map_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where + " must be an object");
  ValueMap out;
  for (const auto& [k, v] : j.items()) out[k] = value_from_json(v, where + "." + k);
  return out;
}

int timestep_from_json(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0 ||
      j.get<long long>() > std::numeric_limits<int>::max()) {
    schema_error(where + " must be a nonnegative integer");
  }
  return j.get<int>();
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(where + " is missing \"" + key + "\"");
  return *it;
}

template <class Declared>
void check_names(const ValueMap& got, const std::vector<Declared>& declared,
                 const std::string& ns, const std::string& where) {
  std::set<std::string> names;
  for (const auto& d : declared) {
    names.insert(d.name);
    auto it = got.find(d.name);
    if (it == got.end()) {
      throw Error(ErrorKind::kSignatureMismatch,
                  where + ": missing " + ns + ":" + d.name);
    }
    if (type_of(it->second) != d.type) {
      schema_error(where + ": " + ns + ":" + d.name + " must be " +
                   type_name(d.type) + ", found " +
                   type_name(type_of(it->second)));
    }
  }
  for (const auto& [k, v] : got) {
    if (!names.count(k)) {
      throw Error(ErrorKind::kSignatureMismatch,
                  where + ": undeclared " + ns + ":" + k);
    }
  }
}

}  // namespace

ParamMap params_from_json(const json& j) {
  if (!j.is_object()) schema_error("params must be a JSON object");
  ParamMap out;
  for (const auto& [k, v] : j.items()) out[k] = finite_number(v, "params." + k);
  return out;
}

TraceElement trace_element_from_json(const json& j) {
  if (!j.is_object()) schema_error("trace element must be a JSON object");
  TraceElement e;
  e.t = timestep_from_json(field(j, "t", "trace element"), "t");
  std::string where = "trace element t=" + std::to_string(e.t);
  const json& s = field(j, "state", where);
  if (!s.is_string()) schema_error(where + ": state must be a string");
  e.state = s.get<std::string>();
  e.ins = value_map_from_json(field(j, "in", where), where + ": in");
  e.vars = value_map_from_json(field(j, "var", where), where + ": var");
  return e;
}

Correction correction_from_json(const json& j) {
  if (!j.is_object()) schema_error("correction must be a JSON object");
  Correction c;
  c.t = timestep_from_json(field(j, "t", "correction"), "correction.t");
  const json& s = field(j, "expected", "correction");
  if (!s.is_string()) schema_error("correction.expected must be a string");
  c.expected = s.get<std::string>();
  return c;
}

ParamMap parse_params(std::string_view source) {
  return params_from_json(parse_json(source, "params"));
}

Trace parse_trace(std::string_view source) {
  Trace out;
  std::istringstream in{std::string(source)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = parse_json(line, "trace line " + std::to_string(lineno));
    out.push_back(trace_element_from_json(j));
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k].t != static_cast<int>(k)) {
      schema_error("trace timesteps must be consecutive from 0; element " +
                   std::to_string(k) + " has t=" + std::to_string(out[k].t));
    }
  }
  return out;
}

std::vector<Correction> parse_corrections(std::string_view source) {
  json j = parse_json(source, "corrections");
  if (!j.is_array()) schema_error("corrections must be a JSON array");
  std::vector<Correction> out;
  for (const auto& c : j) out.push_back(correction_from_json(c));
  return out;
}

void validate_params(const Signature& sig, const ParamMap& params) {
  for (const auto& p : sig.params) {
    if (!params.count(p)) {
      throw Error(ErrorKind::kSignatureMismatch, "params: missing " + p);
    }
  }
  for (const auto& [k, v] : params) {
    if (!sig.has_param(k)) {
      throw Error(ErrorKind::kSignatureMismatch, "params: undeclared " + k);
    }
  }
}

void validate_trace_element(const Signature& sig, const TraceElement& e) {
  std::string where = "trace element t=" + std::to_string(e.t);
  if (!sig.has_state(e.state)) {
    schema_error(where + ": state \"" + e.state + "\" is not declared");
  }
  check_names(e.ins, sig.inputs, "in", where);
  check_names(e.vars, sig.vars, "var", where);
}

void validate_trace(const Signature& sig, const Trace& trace) {
  for (const auto& e : trace) validate_trace_element(sig, e);
}

void validate_corrections(const Signature& sig,
                          const std::vector<Correction>& corrections) {
  for (const auto& c : corrections) {
    if (!sig.has_state(c.expected)) {
      throw Error(ErrorKind::kUnknownState,
                  "correction at t=" + std::to_string(c.t) + " expects undeclared state \"" +
                      c.expected + "\"");
    }
  }
}

json value_to_json(const Value& v) {
  switch (type_of(v)) {
    case Type::kNum: return std::get<double>(v);
    case Type::kBool: return std::get<bool>(v);
    case Type::kVec2: return json::array({std::get<Vec2>(v).x, std::get<Vec2>(v).y});
    case Type::kState: return std::get<StateName>(v).name;
  }
  return nullptr;
}

json params_to_json(const ParamMap& params) {
  json j = json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

json trace_element_to_json(const TraceElement& e) {
  json ins = json::object();
  for (const auto& [k, v] : e.ins) ins[k] = value_to_json(v);
  json vars = json::object();
  for (const auto& [k, v] : e.vars) vars[k] = value_to_json(v);
  return {{"t", e.t}, {"state", e.state}, {"in", ins}, {"var", vars}};
}

json correction_to_json(const Correction& c) {
  return {{"t", c.t}, {"expected", c.expected}};
}

json corrections_to_json(const std::vector<Correction>& cs) {
  json j = json::array();
  for (const auto& c : cs) j.push_back(correction_to_json(c));
  return j;
}

std::string format_trace(const Trace& trace) {
  std::string out;
  for (const auto& e : trace) out += trace_element_to_json(e).dump() + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::kIoError, "error writing " + path);
}

}  // namespace srtr
