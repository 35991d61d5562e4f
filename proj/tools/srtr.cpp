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

// srtr command-line entry point.

#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "srtr/dsl.hpp"
#include "srtr/error.hpp"
#include "srtr/peval.hpp"
#include "srtr/repair.hpp"
#include "srtr/service.hpp"
#include "srtr/sim.hpp"

using namespace srtr;

namespace {

struct RepairArgs {
  std::string rsm, params, trace, corrections;
  double penalty = 1.0;
  double epsilon = 1e-4;
  std::vector<std::string> bounds;
  std::string backend = "internal";
  std::string solver_cmd = "z3";
  std::string encoding = "xor";
  std::string out, report;
};

void add_repair_inputs(CLI::App* cmd, RepairArgs& a) {
  cmd->add_option("--rsm", a.rsm, "transition function (.rsm)")->required();
  cmd->add_option("--params", a.params, "parameter map (JSON)")->required();
  cmd->add_option("--trace", a.trace, "trace (JSON Lines)")->required();
  cmd->add_option("--corrections", a.corrections, "corrections (JSON)")->required();
  cmd->add_option("--penalty", a.penalty, "cost H of leaving a correction unsatisfied");
  cmd->add_option("--epsilon", a.epsilon, "margin for strict comparisons");
  cmd->add_option("--bound", a.bounds, "adjustment bounds, name=lo,hi");
  cmd->add_option("--encoding", a.encoding, "SMT-LIB soft-constraint encoding")
      ->check(CLI::IsMember({"xor", "soft"}));
}

RepairOptions options_from(const RepairArgs& a) {
  RepairOptions o;
  o.penalty = a.penalty;
  o.epsilon = a.epsilon;
  for (const auto& b : a.bounds) o.bounds.insert(parse_bound(b));
  o.backend = a.backend == "smtlib" ? Backend::kSmtlib : Backend::kInternal;
  o.solver_command = a.solver_cmd;
  o.encoding = a.encoding == "soft" ? SmtEncoding::kAssertSoft : SmtEncoding::kXor;
  return o;
}

struct Inputs {
  TransitionFn fn;
  ParamMap params;
  Trace trace;
  std::vector<Correction> corrections;
};

Inputs load(const RepairArgs& a) {
  Session s = load_session(a.rsm, a.params, a.trace, a.corrections);
  return {std::move(s.fn), std::move(s.params), std::move(s.trace), std::move(s.corrections)};
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

int cmd_check(const std::string& rsm, const std::string& params) {
  TransitionFn fn = parse_rsm(read_file(rsm));
  if (!params.empty()) validate_params(fn.sig, parse_params(read_file(params)));
  Classification c = classify_params(fn);
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s.empty() ? std::string("-") : s;
  };
  std::cout << "ok: " << fn.sig.states.size() << " states, " << fn.sig.params.size()
            << " params\n"
            << "repairable: " << join(c.rep) << "\n"
            << "unrepairable: " << join(c.unrep) << "\n";
  return 0;
}

int cmd_run(const std::string& rsm, const std::string& params, const std::string& scenario,
            const std::string& log, int max_steps) {
  Scenario sc = scenario_from_json(nlohmann::json::parse(read_file(scenario), nullptr, false));
  TransitionFn fn = rsm.empty() ? builtin_rsm(sc.kind) : parse_rsm(read_file(rsm));
  ParamMap p;
  if (!params.empty()) {
    p = parse_params(read_file(params));
  } else if (rsm.empty()) {
    p = nominal_params(sc.kind);
  } else {
    throw Error(ErrorKind::kConfigError, "--params is required with --rsm");
  }
  validate_params(fn.sig, p);
  Outcome o = simulate(fn, p, sc, max_steps > 0 ? max_steps : default_max_steps(sc.kind));
  if (!log.empty()) write_file(log, format_trace(o.trace));
  nlohmann::json out = {{"success", o.success},
                        {"reason", termination_name(o.reason)},
                        {"steps", o.trace.size()},
                        {"final_state", o.trace.empty() ? "" : o.trace.back().state}};
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_residual(const RepairArgs& a, int t) {
  Session s = load_session(a.rsm, a.params, a.trace);
  const TraceElement* e = nullptr;
  for (const auto& x : s.trace) {
    if (x.t == t) e = &x;
  }
  if (!e) throw Error(ErrorKind::kIndexError, "no element with t=" + std::to_string(t) + " in the trace");
  ResidualFn r = make_residual(s.fn, *e, s.params);
  std::cout << print_stmt(*r.body);
  return 0;
}

int cmd_repair(const RepairArgs& a) {
  Inputs in = load(a);
  RepairResult r = srtr::srtr(in.fn, in.params, in.trace, in.corrections, options_from(a));
  std::string report = format_report(r);
  std::cout << report;
  if (!a.report.empty()) write_file(a.report, report);
  if (!a.out.empty()) write_file(a.out, params_to_json(r.params).dump(2) + "\n");
  for (bool ok : r.satisfied) {
    if (!ok) return 2;
  }
  return 0;
}

int cmd_emit_smt(const RepairArgs& a) {
  Inputs in = load(a);
  RepairOptions o = options_from(a);
  RepairProblem p = correct_all(in.fn, in.params, in.trace, in.corrections, o.penalty);
  MaxSmtProblem m = lower_problem(p, in.params, o);
  write_or_print(a.out, emit_smtlib(m, p.rep, o.encoding));
  return 0;
}

struct EvalArgs {
  std::string kind = "attacker";
  int n = 150;
  std::uint64_t seed = 0;
  std::string rsm, params, preset = "nominal", csv = "heatmap.csv";
  bool grid = false;
  int max_steps = 0;
};

// Position and direction of the object a heat map is drawn over.
std::tuple<double, double, double> heat_key(const Scenario& sc) {
  if (sc.kind == ScenarioKind::kDocker) return {sc.robot.x, sc.robot.y, sc.robot_ang};
  return {sc.ball.x, sc.ball.y, std::atan2(sc.ball_vel.y, sc.ball_vel.x)};
}

int cmd_eval(const EvalArgs& a) {
  ScenarioKind kind = parse_kind(a.kind);
  TransitionFn fn = a.rsm.empty() ? builtin_rsm(kind) : parse_rsm(read_file(a.rsm));
  ParamMap p;
  if (!a.params.empty()) {
    p = parse_params(read_file(a.params));
  } else if (!a.rsm.empty()) {
    throw Error(ErrorKind::kConfigError, "--params is required with --rsm");
  } else {
    p = a.preset == "baseline" ? baseline_params(kind) : nominal_params(kind);
  }
  validate_params(fn.sig, p);
  auto scenarios = a.grid ? gen_heatmap_scenarios(kind, 10, 12, a.seed) : gen_scenarios(a.seed, a.n, kind);
  SuccessRate r = success_rate(fn, p, scenarios, a.max_steps > 0 ? a.max_steps : default_max_steps(kind));
  std::string csv = "x,y,angle,success\n";
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    auto [x, y, ang] = heat_key(scenarios[i]);
    csv += format_number(x) + "," + format_number(y) + "," + format_number(ang) + "," +
           (r.outcomes[i].success ? "1" : "0") + "\n";
  }
  if (!a.csv.empty()) write_file(a.csv, csv);
  long ok = std::lround(r.rate * static_cast<double>(scenarios.size()));
  std::printf("success rate: %.4f (%ld/%zu)\n", r.rate, ok, scenarios.size());
  return 0;
}

HttpServer* g_server = nullptr;

int cmd_serve(const RepairArgs& a, const ServeOptions& opts) {
  Service service(load_session(a.rsm, a.params, a.trace, a.corrections), a.solver_cmd);
  HttpServer server(service, opts);
  int port = server.bind();
  std::cerr << "serving on http://" << opts.host << ":" << port << "\n";
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  server.run();
  g_server = nullptr;
  return 0;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-automatic repair of robot state machine parameters"};
  app.set_version_flag("--version", std::string("srtr ") + SRTR_VERSION);
  app.require_subcommand(1);

  std::string rsm_file, params_file;
  auto* check = app.add_subcommand("check", "parse and typecheck an .rsm file");
  check->add_option("rsm", rsm_file, "transition function (.rsm)")->required();
  check->add_option("--params", params_file, "also validate a parameter map");

  std::string scenario_file, log_file;
  int max_steps = 0;
  auto* run = app.add_subcommand("run", "simulate one scenario");
  run->add_option("--rsm", rsm_file, "transition function (default: bundled for the scenario kind)");
  run->add_option("--params", params_file, "parameter map (default: bundled nominal values)");
  run->add_option("--scenario", scenario_file, "scenario (JSON)")->required();
  run->add_option("--log", log_file, "write the trace here (JSON Lines)");
  run->add_option("--max-steps", max_steps, "step limit");

  RepairArgs ra;
  int t = 0;
  auto* residual = app.add_subcommand("residual", "print the residual program at one timestep");
  residual->add_option("--rsm", ra.rsm)->required();
  residual->add_option("--params", ra.params)->required();
  residual->add_option("--trace", ra.trace)->required();
  residual->add_option("--t", t, "timestep")->required();

  auto* repair = app.add_subcommand("repair", "repair parameters from corrections");
  add_repair_inputs(repair, ra);
  repair->add_option("--backend", ra.backend)->check(CLI::IsMember({"internal", "smtlib"}));
  repair->add_option("--solver-cmd", ra.solver_cmd, "external solver for --backend smtlib");
  repair->add_option("--out", ra.out, "write the repaired parameter map here");
  repair->add_option("--report", ra.report, "also write the report here");

  auto* emit = app.add_subcommand("emit-smt", "write the repair problem as SMT-LIB");
  add_repair_inputs(emit, ra);
  emit->add_option("--out", ra.out, "output path (default: stdout)");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "success rate over generated scenarios");
  eval->add_option("--kind", ea.kind)->check(CLI::IsMember({"attacker", "deflector", "docker"}));
  eval->add_option("--n", ea.n, "number of scenarios");
  eval->add_option("--seed", ea.seed, "scenario seed");
  eval->add_option("--rsm", ea.rsm, "transition function (default: bundled)");
  eval->add_option("--params", ea.params, "parameter map");
  eval->add_option("--preset", ea.preset, "bundled parameters when --params is absent")
      ->check(CLI::IsMember({"nominal", "baseline"}));
  eval->add_option("--csv", ea.csv, "heat-map CSV path (x, y, angle, success)");
  eval->add_flag("--grid", ea.grid, "10x10 positions x 12 directions instead of random scenarios");
  eval->add_option("--max-steps", ea.max_steps, "step limit per scenario");

  ServeOptions so;
  auto* serve = app.add_subcommand("serve", "HTTP service for the annotator");
  serve->add_option("--rsm", ra.rsm, "transition function (.rsm)")->required();
  serve->add_option("--params", ra.params, "parameter map (JSON)")->required();
  serve->add_option("--trace", ra.trace, "trace (JSON Lines)")->required();
  serve->add_option("--corrections", ra.corrections, "initial corrections (JSON)");
  serve->add_option("--host", so.host, "listen address");
  serve->add_option("--port", so.port, "listen port");
  serve->add_option("--static", so.static_dir, "annotator build directory");
  serve->add_option("--solver-cmd", ra.solver_cmd, "external solver for smtlib repairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: ConfigError: " << one_line(e.what()) << "\n";
    return 1;
  }

  try {
    if (*check) return cmd_check(rsm_file, params_file);
    if (*run) return cmd_run(rsm_file, params_file, scenario_file, log_file, max_steps);
    if (*residual) return cmd_residual(ra, t);
    if (*repair) return cmd_repair(ra);
    if (*emit) return cmd_emit_smt(ra);
    if (*eval) return cmd_eval(ea);
    if (*serve) return cmd_serve(ra, so);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind_name() << ": " << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: IoError: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 1;
}
