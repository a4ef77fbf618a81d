// Copyright 2026 The treefit Authors.
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

#include "treefit/lp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "treefit/error.hpp"

namespace treefit {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

void HccInstance::validate() const {
  if (deltas.empty()) throw DataError("HCC instance needs at least one level");
  if (edge_sets.size() != deltas.size()) {
    throw DataError("HCC instance: one edge set per level required");
  }
  for (double d : deltas) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw DataError("HCC instance: level weights must be positive");
    }
  }
  for (const auto& e : edge_sets) {
    if (e.universe_size() != n) {
      throw DataError("HCC instance: edge set over a different universe");
    }
  }
}

HccInstance HccInstance::from_partitions(std::span<const Partition> q,
                                         std::vector<double> deltas) {
  HccInstance inst;
  inst.n = q.empty() ? 0 : q.front().universe_size();
  inst.deltas = std::move(deltas);
  for (const auto& p : q) inst.edge_sets.push_back(clique_edges(p));
  inst.validate();
  return inst;
}

HccLp build_lp(const HccInstance& inst) {
  inst.validate();
  HccLp lp;
  lp.n = inst.n;
  lp.levels = inst.num_levels();
  const std::size_t n = inst.n;
  const std::size_t pairs = num_pairs(n);
  auto& prog = lp.program;
  prog.num_vars = lp.levels * pairs;
  prog.cost.assign(prog.num_vars, 0.0);
  prog.upper.assign(prog.num_vars, 1.0);
  for (std::size_t t = 0; t < lp.levels; ++t) {
    const double delta = inst.deltas[t];
    for (std::size_t k = 0; k < pairs; ++k) {
      if (inst.edge_sets[t].contains_index(k)) {
        prog.cost[t * pairs + k] = delta;
      } else {
        prog.cost[t * pairs + k] = -delta;
        prog.constant += delta;
      }
    }
  }
  for (std::size_t t = 0; t + 1 < lp.levels; ++t) {
    for (std::size_t k = 0; k < pairs; ++k) {
      prog.rows.push_back(
          LpRow{{{(t + 1) * pairs + k, 1.0}, {t * pairs + k, -1.0}}, 0.0});
    }
  }
  lp.monotone_rows = prog.rows.size();
  for (std::size_t t = 0; t < lp.levels; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const std::size_t ij = lp.var(t, i, j);
          const std::size_t ik = lp.var(t, i, k);
          const std::size_t jk = lp.var(t, j, k);
          prog.rows.push_back(LpRow{{{ij, 1.0}, {ik, -1.0}, {jk, -1.0}}, 0.0});
          prog.rows.push_back(LpRow{{{ik, 1.0}, {ij, -1.0}, {jk, -1.0}}, 0.0});
          prog.rows.push_back(LpRow{{{jk, 1.0}, {ij, -1.0}, {ik, -1.0}}, 0.0});
        }
      }
    }
  }
  lp.triangle_rows = prog.rows.size() - lp.monotone_rows;
  return lp;
}

LpSolution solve_lp(const HccLp& lp, const LpSolveOptions& options) {
  SimplexOptions so;
  so.feas_tol = options.feas_tol;
  so.activation = options.activation;
  so.pivot_rule = options.pivot_rule;
  so.iteration_cap = options.iteration_cap;
  const SimplexResult res = solve_simplex(lp.program, so);

  const std::size_t pairs = num_pairs(lp.n);
  LpSolution sol;
  sol.x.assign(lp.levels, PairMatrix(lp.n));
  for (std::size_t t = 0; t < lp.levels; ++t) {
    auto dst = sol.x[t].values();
    for (std::size_t k = 0; k < pairs; ++k) {
      dst[k] = std::clamp(res.x[t * pairs + k], 0.0, 1.0);
    }
  }
  sol.objective = res.objective;
  const double viol = max_constraint_violation(sol);
  if (viol > options.feas_tol) {
    throw SolverError("LP solution violates constraints by " +
                      format_number(viol));
  }
  return sol;
}

LpSolution solve_hcc_lp(const HccInstance& inst,
                        const LpSolveOptions& options) {
  return solve_lp(build_lp(inst), options);
}

double max_constraint_violation(const LpSolution& x) {
  double worst = 0.0;
  for (std::size_t t = 0; t < x.num_levels(); ++t) {
    const PairMatrix& m = x.x[t];
    const std::size_t n = m.size();
    for (double v : m.values()) worst = std::max({worst, -v, v - 1.0});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double ij = m(i, j);
        for (std::size_t k = j + 1; k < n; ++k) {
          const double ik = m(i, k), jk = m(j, k);
          worst = std::max({worst, ij - ik - jk, ik - ij - jk, jk - ij - ik});
        }
      }
    }
    if (t + 1 < x.num_levels()) {
      auto lo = x.x[t].values();
      auto hi = x.x[t + 1].values();
      for (std::size_t k = 0; k < lo.size(); ++k) {
        worst = std::max(worst, hi[k] - lo[k]);
      }
    }
  }
  return worst;
}

double pair_cost(const HccInstance& inst, const LpSolution& x, std::size_t t,
                 std::size_t i, std::size_t j) {
  const double v = x(t, i, j);
  return inst.deltas[t] * (inst.edge_sets[t].contains(i, j) ? v : 1.0 - v);
}

double set_cost(const HccInstance& inst, const LpSolution& x, std::size_t t,
                std::span<const std::size_t> members) {
  std::vector<char> in(inst.n, 0);
  for (std::size_t i : members) in[i] = 1;
  double s = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = i + 1; j < inst.n; ++j) {
      if (in[i] || in[j]) s += pair_cost(inst, x, t, i, j);
    }
  }
  return s;
}

double species_cost(const HccInstance& inst, const LpSolution& x,
                    std::size_t t, std::size_t i) {
  double s = 0.0;
  for (std::size_t j = 0; j < inst.n; ++j) {
    if (j != i) s += pair_cost(inst, x, t, i, j);
  }
  return s;
}

LpCost lp_cost(const HccInstance& inst, const LpSolution& x) {
  if (x.num_levels() != inst.num_levels()) {
    throw DataError("lp_cost: solution and instance have different levels");
  }
  LpCost c;
  for (std::size_t t = 0; t < inst.num_levels(); ++t) {
    c.per_level.push_back(inst.deltas[t] *
                          cost_edges(inst.edge_sets[t], x.x[t]));
    c.total += c.per_level.back();
  }
  return c;
}

double cost_edges(const EdgeSet& e, const PairMatrix& x_level) {
  if (e.universe_size() != x_level.size()) {
    throw DataError("cost_edges: edge set and LP slice differ in size");
  }
  double s = 0.0;
  auto v = x_level.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    s += e.contains_index(k) ? v[k] : 1.0 - v[k];
  }
  return s;
}

std::string dump_lp(const HccLp& lp, const std::vector<std::string>& labels,
                    const LpSolution* solution) {
  const auto& prog = lp.program;
  std::vector<std::string> names(prog.num_vars);
  for (std::size_t t = 0; t < lp.levels; ++t) {
    for (std::size_t i = 0; i < lp.n; ++i) {
      for (std::size_t j = i + 1; j < lp.n; ++j) {
        names[lp.var(t, i, j)] = "x_" + std::to_string(t + 1) + "_" +
                                 std::to_string(i) + "_" + std::to_string(j);
      }
    }
  }
  std::ostringstream os;
  os << "\\ hierarchical correlation clustering LP relaxation\n";
  os << "\\ levels " << lp.levels << ", points " << lp.n << ", variables "
     << prog.num_vars << ", constraints " << prog.rows.size() << "\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << "\\ label " << i << " " << labels[i] << "\n";
  }
  os << "minimize\n obj: " << format_number(prog.constant);
  for (std::size_t v = 0; v < prog.num_vars; ++v) {
    const double c = prog.cost[v];
    os << (c < 0 ? " - " : " + ") << format_number(std::abs(c)) << " "
       << names[v];
  }
  os << "\nsubject to\n";
  for (std::size_t r = 0; r < prog.rows.size(); ++r) {
    const auto& row = prog.rows[r];
    os << (r < lp.monotone_rows ? " m" : " t") << r << ":";
    for (std::size_t m = 0; m < row.terms.size(); ++m) {
      auto [v, a] = row.terms[m];
      if (m == 0) {
        os << (a < 0 ? " -" : " ");
      } else {
        os << (a < 0 ? " - " : " + ");
      }
      if (std::abs(a) != 1.0) os << format_number(std::abs(a)) << " ";
      os << names[v];
    }
    os << " <= " << format_number(row.rhs) << "\n";
  }
  os << "bounds\n";
  for (std::size_t v = 0; v < prog.num_vars; ++v) {
    os << " 0 <= " << names[v] << " <= " << format_number(prog.upper[v])
       << "\n";
  }
  os << "end\n";
  if (solution) {
    os << "solution\n objective = " << format_number(solution->objective)
       << "\n";
    for (std::size_t t = 0; t < lp.levels; ++t) {
      for (std::size_t i = 0; i < lp.n; ++i) {
        for (std::size_t j = i + 1; j < lp.n; ++j) {
          os << " " << names[lp.var(t, i, j)] << " = "
             << format_number(solution->x[t](i, j)) << "\n";
        }
      }
    }
    os << "end\n";
  }
  return os.str();
}

}  // namespace treefit
