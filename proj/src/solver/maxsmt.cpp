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

#include "srtr/solver/maxsmt.hpp"

#include <chrono>
#include <cmath>
#include <queue>

#include "srtr/error.hpp"

namespace srtr {
namespace {

double tolerance(double v) { return 1e-9 * (1 + std::fabs(v)); }

struct Node {
  std::vector<int> decisions;
  int violated = 0;
  L1Solution lp;
  bool lex = false;  // lp is the lexicographic optimum
  double bound = 0.0;
  long seq = 0;
};

struct NodeOrder {
  // Lowest bound first; among equal bounds prefer deeper nodes, then
  // creation order.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.decisions.size() != b.decisions.size()) {
      return a.decisions.size() < b.decisions.size();
    }
    return a.seq > b.seq;
  }
};

struct Candidate {
  std::vector<double> delta;
  std::vector<int> decisions;
  double objective = 0.0;
};

// Strict "a is preferable to b".
bool better(const Candidate& a, const Candidate& b) {
  double tol = tolerance(std::min(a.objective, b.objective));
  if (a.objective < b.objective - tol) return true;
  if (b.objective < a.objective - tol) return false;
  for (std::size_t j = 0; j < a.delta.size(); ++j) {
    double x = std::fabs(a.delta[j]), y = std::fabs(b.delta[j]);
    double t = tolerance(std::min(x, y));
    if (x < y - t) return true;
    if (y < x - t) return false;
  }
  for (std::size_t i = 0; i < a.decisions.size(); ++i) {
    bool sa = a.decisions[i] >= 0, sb = b.decisions[i] >= 0;
    if (sa != sb) return sa;
  }
  for (std::size_t j = 0; j < a.delta.size(); ++j) {
    if (a.delta[j] != b.delta[j]) return a.delta[j] < b.delta[j];
  }
  return false;
}

bool clause_holds(const SoftClause& c, const std::vector<double>& delta) {
  for (const auto& p : c.paths) {
    if (satisfies(p, delta)) return true;
  }
  return false;
}

class BranchAndBound {
 public:
  BranchAndBound(const MaxSmtProblem& p, const MaxSmtOptions& o) : p_(p), opt_(o) {}

  MaxSmtResult run() {
    auto start = std::chrono::steady_clock::now();
    std::size_t m = p_.clauses.size();
    incumbent_.delta.assign(p_.n, 0.0);
    incumbent_.decisions.assign(m, -1);
    incumbent_.objective = p_.penalty * static_cast<double>(m);

    Node root;
    auto s = solve({}, true);
    if (!s) throw Error(ErrorKind::kSolverError, "delta bounds are infeasible");
    root.lp = *s;
    root.lex = true;
    root.bound = root.lp.objective;
    push(std::move(root));
    while (!open_.empty()) {
      Node node = open_.top();
      open_.pop();
      if (node.bound > incumbent_.objective + tolerance(incumbent_.objective)) {
        prune(node);
        continue;
      }
      ++stats_.nodes;
      expand(std::move(node));
    }

    MaxSmtResult r;
    r.delta = incumbent_.delta;
    for (std::size_t i = 0; i < m; ++i) {
      int d = incumbent_.decisions[i];
      if (d == kAnyPath) {
        d = -1;
        const auto& paths = p_.clauses[i].paths;
        for (std::size_t k = 0; k < paths.size() && d < 0; ++k) {
          if (satisfies(paths[k], r.delta)) d = static_cast<int>(k);
        }
      }
      r.path.push_back(d);
      r.satisfied.push_back(incumbent_.decisions[i] >= 0);
    }
    r.objective = incumbent_.objective;
    r.stats = stats_;
    r.stats.millis = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return r;
  }

 private:
  std::vector<DeltaRow> rows_for(const std::vector<int>& decisions) const {
    std::vector<DeltaRow> rows;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      if (decisions[i] < 0 || decisions[i] == kAnyPath) continue;
      const auto& path = p_.clauses[i].paths[static_cast<std::size_t>(decisions[i])];
      rows.insert(rows.end(), path.begin(), path.end());
    }
    return rows;
  }

  std::optional<L1Solution> solve(const std::vector<int>& decisions, bool lex) {
    L1Problem lp{p_.n, rows_for(decisions), p_.lower, p_.upper};
    auto s = solve_l1(lp, lex);
    if (s) stats_.lp_solves += s->lp_solves;
    return s;
  }

  void push(Node node) {
    node.seq = seq_++;
    if (node.bound > incumbent_.objective + tolerance(incumbent_.objective)) {
      prune(node);
      return;
    }
    open_.push(std::move(node));
  }

  void prune(const Node& node) {
    ++stats_.pruned;
    if (opt_.on_prune) opt_.on_prune({node.decisions, node.bound});
  }

  // First clause that must be satisfied, has no committed path, and is not
  // satisfied by the node's point.
  std::optional<std::size_t> unmet(const Node& node) const {
    for (std::size_t i = 0; i < node.decisions.size(); ++i) {
      if (node.decisions[i] != kAnyPath) continue;
      if (!clause_holds(p_.clauses[i], node.lp.delta)) return i;
    }
    return std::nullopt;
  }

  void branch_paths(const Node& node, std::size_t i) {
    const SoftClause& clause = p_.clauses[i];
    for (std::size_t k = 0; k < clause.paths.size(); ++k) {
      Node child;
      child.decisions = node.decisions;
      child.decisions[i] = static_cast<int>(k);
      child.violated = node.violated;
      auto s = solve(child.decisions, false);
      if (!s) continue;
      child.lp = *s;
      child.bound = p_.penalty * child.violated + child.lp.objective;
      push(std::move(child));
    }
  }

  void expand(Node node) {
    if (auto i = unmet(node)) {
      branch_paths(node, *i);
      return;
    }
    std::size_t j = node.decisions.size();
    if (j < p_.clauses.size()) {
      if (!p_.clauses[j].paths.empty()) {
        Node sat = node;
        sat.decisions.push_back(kAnyPath);
        push(std::move(sat));
      }
      node.decisions.push_back(-1);
      node.violated += 1;
      node.bound += p_.penalty;
      push(std::move(node));
      return;
    }
    if (!node.lex) {
      // The tie-broken optimum of the committed rows may leave a lazily
      // satisfied clause unmet; branch on it if so.
      auto s = solve(node.decisions, true);
      if (!s) return;
      node.lp = *s;
      node.lex = true;
      if (auto i = unmet(node)) {
        branch_paths(node, *i);
        return;
      }
    }
    Candidate c{node.lp.delta, node.decisions,
                p_.penalty * node.violated + node.lp.objective};
    if (better(c, incumbent_)) incumbent_ = std::move(c);
  }

  const MaxSmtProblem& p_;
  const MaxSmtOptions& opt_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  Candidate incumbent_;
  SolverStats stats_;
  long seq_ = 0;
};

}  // namespace

MaxSmtResult solve_maxsmt(const MaxSmtProblem& problem, const MaxSmtOptions& options) {
  if (!(problem.penalty > 0) || !std::isfinite(problem.penalty)) {
    throw Error(ErrorKind::kConfigError, "penalty must be a positive finite number");
  }
  for (std::size_t j = 0; j < problem.lower.size(); ++j) {
    if (problem.lower[j] > 0) {
      throw Error(ErrorKind::kConfigError, "delta bounds must contain zero");
    }
  }
  for (std::size_t j = 0; j < problem.upper.size(); ++j) {
    if (problem.upper[j] < 0) {
      throw Error(ErrorKind::kConfigError, "delta bounds must contain zero");
    }
  }
  return BranchAndBound(problem, options).run();
}

}  // namespace srtr
