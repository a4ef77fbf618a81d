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

// LP relaxation of hierarchical correlation clustering.
//
// One variable x(t, {i,j}) in [0, 1] per level t and pair: 0 means "same
// part at level t", 1 means "separated". Rows are the triangle inequality
// inside each level and monotonicity x(t) >= x(t+1) across levels. The
// objective charges delta(t) * x for every edge of E(t) and delta(t) * (1-x)
// for every non-edge.

#ifndef TREEFIT_LP_HPP_
#define TREEFIT_LP_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "treefit/core.hpp"
#include "treefit/simplex.hpp"

namespace treefit {

struct HccInstance {
  std::size_t n = 0;
  std::vector<double> deltas;
  std::vector<EdgeSet> edge_sets;

  std::size_t num_levels() const { return deltas.size(); }
  /// Throws DataError unless there is at least one level, every delta is
  /// positive and every edge set lives on the n-element universe.
  void validate() const;

  /// Cluster-agreement instance: E(t) is the clique-edge set of q[t].
  static HccInstance from_partitions(std::span<const Partition> q,
                                     std::vector<double> deltas);
};

/// Fractional LP-distances, one symmetric matrix per level.
struct LpSolution {
  std::vector<PairMatrix> x;
  double objective = 0.0;

  std::size_t num_levels() const { return x.size(); }
  /// Zero-based level; x(t, i, i) = 0.
  double operator()(std::size_t t, std::size_t i, std::size_t j) const {
    return x[t](i, j);
  }
};

/// The explicit program produced by build_lp.
struct HccLp {
  LinearProgram program;
  std::size_t n = 0;
  std::size_t levels = 0;
  std::size_t triangle_rows = 0;
  std::size_t monotone_rows = 0;

  std::size_t var(std::size_t t, std::size_t i, std::size_t j) const {
    return t * num_pairs(n) + pair_index(n, i, j);
  }
};

HccLp build_lp(const HccInstance& inst);

struct LpSolveOptions {
  double feas_tol = 1e-7;
  RowActivation activation = RowActivation::kAuto;
  PivotRule pivot_rule = PivotRule::kDantzig;
  std::size_t iteration_cap = 0;
};

/// Optimal solution clamped into [0, 1]. The returned point is verified
/// against every triangle, monotonicity and box constraint within feas_tol;
/// throws SolverError (SimplexFailure on the iteration cap) otherwise.
LpSolution solve_lp(const HccLp& lp, const LpSolveOptions& options = {});

/// Convenience: build_lp followed by solve_lp.
LpSolution solve_hcc_lp(const HccInstance& inst,
                        const LpSolveOptions& options = {});

/// Largest violation of the triangle, monotonicity and box constraints.
double max_constraint_violation(const LpSolution& x);

/// LP cost of the pair {i, j} at zero-based level t.
double pair_cost(const HccInstance& inst, const LpSolution& x, std::size_t t,
                 std::size_t i, std::size_t j);

/// LP cost of all pairs with at least one endpoint in `members` at level t.
double set_cost(const HccInstance& inst, const LpSolution& x, std::size_t t,
                std::span<const std::size_t> members);

/// LP cost of all pairs containing species i at level t.
double species_cost(const HccInstance& inst, const LpSolution& x,
                    std::size_t t, std::size_t i);

struct LpCost {
  std::vector<double> per_level;
  double total = 0.0;
};

LpCost lp_cost(const HccInstance& inst, const LpSolution& x);

/// Unweighted cost of a single level slice against an arbitrary edge set:
/// sum of x over edges plus sum of (1 - x) over non-edges.
double cost_edges(const EdgeSet& e, const PairMatrix& x_level);

/// Plain-text listing of the program, one constraint per line, optionally
/// followed by a solution block. Variables are named x_<level>_<i>_<j> with
/// 1-based level and 0-based label indices.
std::string dump_lp(const HccLp& lp, const std::vector<std::string>& labels,
                    const LpSolution* solution = nullptr);

}  // namespace treefit

#endif  // TREEFIT_LP_HPP_
