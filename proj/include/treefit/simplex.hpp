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

// Dense simplex solver for
//
//     minimize    constant + cost . x
//     subject to  row_r . x <= rhs_r     for every row r
//                 0 <= x_j <= upper_j
//
// with rhs >= 0, so that x = 0 is a feasible starting vertex. The tableau is
// kept in condensed form (one column per nonbasic variable); upper bounds are
// handled by complementing variables instead of extra rows.
//
// Rows may be activated lazily: the solver starts from a subset, solves,
// activates the rows violated by the current optimum and re-optimizes with
// the dual simplex, until the point satisfies every row. The optimum found
// is an optimum of the complete program.

#ifndef TREEFIT_SIMPLEX_HPP_
#define TREEFIT_SIMPLEX_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treefit/error.hpp"

namespace treefit {

struct LpRow {
  std::vector<std::pair<std::size_t, double>> terms;
  double rhs = 0.0;
};

struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> cost;
  double constant = 0.0;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  double objective(std::span<const double> x) const;
  /// Largest amount by which x violates a row or a bound (0 if feasible).
  double max_violation(std::span<const double> x) const;
};

enum class RowActivation {
  kAll,   // load every row up front
  kLazy,  // start from no rows, activate violated ones
  kAuto,  // kAll for small programs, kLazy otherwise
};

enum class PivotRule {
  kDantzig,  // most negative reduced cost, Bland's rule while stalling
  kBland,    // smallest index throughout
};

struct SimplexOptions {
  double feas_tol = 1e-7;
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  /// 0 selects 10 * (rows + variables).
  std::size_t iteration_cap = 0;
  RowActivation activation = RowActivation::kAuto;
  PivotRule pivot_rule = PivotRule::kDantzig;
};

struct SimplexResult {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::size_t active_rows = 0;
  std::size_t rounds = 0;
};

/// Thrown when the iteration cap is hit; carries the last feasible point.
class SimplexFailure : public SolverError {
 public:
  SimplexFailure(const std::string& what, std::vector<double> best)
      : SolverError(what), best_point_(std::move(best)) {}
  const std::vector<double>& best_point() const { return best_point_; }

 private:
  std::vector<double> best_point_;
};

/// Throws DataError if the program is malformed or some rhs is negative,
/// SimplexFailure on hitting the iteration cap.
SimplexResult solve_simplex(const LinearProgram& lp,
                            const SimplexOptions& options = {});

}  // namespace treefit

#endif  // TREEFIT_SIMPLEX_HPP_
