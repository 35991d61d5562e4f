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

#include "srtr/solver/smtlib.hpp"

#include <unistd.h>

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>

#include "srtr/error.hpp"
#include "srtr/value.hpp"

namespace srtr {
namespace {

std::string real(double v) {
  std::string s = format_number_fixed(std::fabs(v));
  if (s.find('.') == std::string::npos) s += ".0";
  return v < 0 ? "(- " + s + ")" : s;
}

std::string row_term(const DeltaRow& r, const std::vector<std::string>& names) {
  std::vector<std::string> terms;
  for (std::size_t j = 0; j < r.coef.size(); ++j) {
    if (r.coef[j] == 0) continue;
    terms.push_back("(* " + real(r.coef[j]) + " d_" + names[j] + ")");
  }
  std::string lhs;
  if (terms.empty()) {
    lhs = "0.0";
  } else if (terms.size() == 1) {
    lhs = terms[0];
  } else {
    lhs = "(+";
    for (const auto& t : terms) lhs += " " + t;
    lhs += ")";
  }
  return "(" + std::string(r.equality ? "=" : "<=") + " " + lhs + " " + real(r.rhs) + ")";
}

std::string path_term(const std::vector<DeltaRow>& path,
                      const std::vector<std::string>& names) {
  if (path.empty()) return "true";
  if (path.size() == 1) return row_term(path[0], names);
  std::string s = "(and";
  for (const auto& r : path) s += " " + row_term(r, names);
  return s + ")";
}

std::string clause_term(const SoftClause& c, const std::vector<std::string>& names) {
  if (c.paths.empty()) return "false";
  if (c.paths.size() == 1) return path_term(c.paths[0], names);
  std::string s = "(or";
  for (const auto& p : c.paths) s += " " + path_term(p, names);
  return s + ")";
}

// ---- S-expressions -------------------------------------------------------

struct Sexp {
  std::string atom;  // empty for lists
  std::vector<Sexp> list;
  bool is_list = false;
};

class SexpReader {
 public:
  explicit SexpReader(const std::string& s) : s_(s) {}

  std::vector<Sexp> all() {
    std::vector<Sexp> out;
    for (;;) {
      skip();
      if (i_ >= s_.size()) return out;
      out.push_back(read());
    }
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        return;
      }
    }
  }

  Sexp read() {
    skip();
    if (i_ >= s_.size()) throw Error(ErrorKind::kParseError, "unexpected end of solver output");
    Sexp e;
    if (s_[i_] == '(') {
      ++i_;
      e.is_list = true;
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw Error(ErrorKind::kParseError, "unbalanced parentheses");
        if (s_[i_] == ')') {
          ++i_;
          return e;
        }
        e.list.push_back(read());
      }
    }
    if (s_[i_] == ')') throw Error(ErrorKind::kParseError, "unexpected ')'");
    if (s_[i_] == '"' || s_[i_] == '|') {
      char q = s_[i_++];
      while (i_ < s_.size() && s_[i_] != q) e.atom += s_[i_++];
      ++i_;
      return e;
    }
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) &&
           s_[i_] != '(' && s_[i_] != ')') {
      e.atom += s_[i_++];
    }
    return e;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

std::optional<double> number(const Sexp& e) {
  if (!e.is_list) {
    const std::string& a = e.atom;
    if (a.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(a.c_str(), &end);
    if (end != a.c_str() + a.size()) return std::nullopt;
    return v;
  }
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-") {
    auto v = number(e.list[1]);
    if (v) return -*v;
    return std::nullopt;
  }
  if (e.list.size() == 3 && !e.list[0].is_list && e.list[0].atom == "/") {
    auto p = number(e.list[1]);
    auto q = number(e.list[2]);
    if (p && q && *q != 0) return *p / *q;
  }
  // to_real wrappers and the like.
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "to_real") {
    return number(e.list[1]);
  }
  return std::nullopt;
}

void read_definitions(const std::vector<Sexp>& items, SmtModel& m) {
  for (const auto& d : items) {
    if (!d.is_list || d.list.empty()) continue;
    if (!d.list[0].is_list && d.list[0].atom == "define-fun" && d.list.size() == 5) {
      if (auto v = number(d.list[4])) m.values[d.list[1].atom] = *v;
    } else if (!d.list[0].is_list && d.list.size() == 2) {
      // get-value pair (name value)
      if (auto v = number(d.list[1])) m.values[d.list[0].atom] = *v;
    }
  }
}

}  // namespace

std::string emit_smtlib(const MaxSmtProblem& p, const std::vector<std::string>& names,
                        SmtEncoding encoding) {
  std::string out = "(set-logic QF_LRA)\n";
  for (const auto& name : names) {
    out += "(declare-const d_" + name + " Real)\n";
    out += "(declare-const a_" + name + " Real)\n";
    out += "(assert (>= a_" + name + " d_" + name + "))\n";
    out += "(assert (>= a_" + name + " (- d_" + name + ")))\n";
  }
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j < p.lower.size() && std::isfinite(p.lower[j])) {
      out += "(assert (>= d_" + names[j] + " " + real(p.lower[j]) + "))\n";
    }
    if (j < p.upper.size() && std::isfinite(p.upper[j])) {
      out += "(assert (<= d_" + names[j] + " " + real(p.upper[j]) + "))\n";
    }
  }
  std::string h = real(p.penalty);
  std::string objective = "(+ 0.0";
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    std::string phi = clause_term(p.clauses[i], names);
    if (encoding == SmtEncoding::kXor) {
      std::string w = "w_" + std::to_string(i + 1);
      out += "(declare-const " + w + " Real)\n";
      out += "(assert (or (= " + w + " 0.0) (= " + w + " " + h + ")))\n";
      out += "(assert (xor (= " + w + " " + h + ") (and (= " + w + " 0.0) " + phi + ")))\n";
      objective += " " + w;
    } else {
      out += "(assert-soft " + phi + " :weight " + h + " :id violations)\n";
    }
  }
  for (const auto& name : names) objective += " a_" + name;
  objective += ")";
  out += "(minimize " + objective + ")\n";
  // Tie-breaks, applied lexicographically after the total.
  for (const auto& name : names) out += "(minimize a_" + name + ")\n";
  if (encoding == SmtEncoding::kXor) {
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      out += "(minimize w_" + std::to_string(i + 1) + ")\n";
    }
  }
  out += "(check-sat)\n(get-objectives)\n(get-model)\n";
  return out;
}

SmtModel parse_smt_model(const std::string& text) {
  std::vector<Sexp> items = SexpReader(text).all();
  SmtModel m;
  bool sat = false;
  for (const auto& e : items) {
    if (!e.is_list) {
      if (e.atom == "unsat") throw Error(ErrorKind::kUnsatError, "solver reported unsat");
      if (e.atom == "sat") sat = true;
      if (e.atom == "unknown") throw Error(ErrorKind::kParseError, "solver reported unknown");
      continue;
    }
    if (e.list.empty()) continue;
    const Sexp& head = e.list[0];
    if (!head.is_list && head.atom == "error") {
      std::string msg = e.list.size() > 1 ? e.list[1].atom : "";
      throw Error(ErrorKind::kParseError, "solver error: " + msg);
    }
    if (!head.is_list && head.atom == "objectives") {
      for (std::size_t k = 1; k < e.list.size(); ++k) {
        const Sexp& o = e.list[k];
        // `(expr value)`, `(value)` or a bare value.
        if (auto v = number(o)) {
          m.objective = v;
        } else if (o.is_list && o.list.size() == 1) {
          m.objective = number(o.list[0]);
        } else if (o.is_list && o.list.size() == 2) {
          m.objective = number(o.list[1]);
        }
        if (m.objective) break;
      }
      continue;
    }
    if (!head.is_list && head.atom == "model") {
      read_definitions({e.list.begin() + 1, e.list.end()}, m);
      continue;
    }
    read_definitions(e.list, m);
  }
  if (!sat) throw Error(ErrorKind::kParseError, "solver output has no sat/unsat answer");
  return m;
}

MaxSmtResult result_from_model(const SmtModel& model, const MaxSmtProblem& problem,
                               const std::vector<std::string>& names) {
  MaxSmtResult r;
  auto get = [&](const std::string& k) {
    auto it = model.values.find(k);
    return it == model.values.end() ? 0.0 : it->second;
  };
  for (const auto& name : names) r.delta.push_back(get("d_" + name));
  double total = 0;
  for (double d : r.delta) total += std::fabs(d);
  for (std::size_t i = 0; i < problem.clauses.size(); ++i) {
    std::string w = "w_" + std::to_string(i + 1);
    bool sat;
    if (model.values.count(w)) {
      sat = get(w) < problem.penalty / 2;
    } else {
      sat = false;
      for (const auto& p : problem.clauses[i].paths) sat = sat || satisfies(p, r.delta);
    }
    r.satisfied.push_back(sat);
    r.path.push_back(sat ? 0 : -1);
    if (!sat) total += problem.penalty;
  }
  r.objective = model.objective.value_or(total);
  return r;
}

std::string run_external_solver(const std::string& command, const std::string& script) {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() /
                  ("srtr-" + std::to_string(::getpid()) + "-" +
                   std::to_string(std::hash<std::string>{}(script)) + ".smt2");
  {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
    f << script;
  }
  std::string cmd = command + " '" + path.string() + "' 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(::popen(cmd.c_str(), "r"), ::pclose);
  if (!pipe) throw Error(ErrorKind::kSolverError, "cannot run " + command);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  pipe.reset();
  std::error_code ec;
  fs::remove(path, ec);
  return out;
}

}  // namespace srtr
