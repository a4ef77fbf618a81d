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

#include "treefit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace treefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDropTol = 1e-13;
// Programs with at most this many (rows x variables) entries load every row.
constexpr std::size_t kFullLoadEntries = std::size_t{1} << 16;
// Consecutive degenerate pivots before switching to Bland's rule.
constexpr std::size_t kStallLimit = 50;
// Steps no longer than this count as degenerate.
constexpr double kDegenerateStep = 1e-9;
// Primal feasibility slack used by the Harris ratio test.
constexpr double kHarrisTol = 1e-9;
// Basic values this close outside a bound are moved onto it.
constexpr double kSnapTol = 1e-9;

struct Budget {
  std::size_t used = 0;
  std::size_t cap = 0;
};

// Condensed tableau. Every variable is kept at "lower" by complementing:
// a complemented variable v is represented by upper_v - x_v. Basic rows read
//     value(basic[i]) = beta[i] - sum_k T[i][k] * value(nonbasic[k])
// and the objective is z + sum_k d[k] * value(nonbasic[k]).
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), cols_(lp.num_vars) {
    const std::size_t n = lp.num_vars;
    upper_ = lp.upper;
    complemented_.assign(n, 0);
    position_.resize(n);
    nonbasic_.resize(n);
    d_ = lp.cost;
    z_ = lp.constant;
    for (std::size_t j = 0; j < n; ++j) {
      nonbasic_[j] = j;
      position_[j] = -static_cast<long>(j) - 1;
    }
  }

  /// Appends `row` with its slack basic. The slack may start infeasible.
  void add_row(const LpRow& row) {
    std::vector<double> r(cols_, 0.0);
    double c = 0.0;
    for (auto [v, a] : row.terms) {
      const long p = position_[v];
      if (p < 0) {
        const std::size_t k = static_cast<std::size_t>(-p - 1);
        if (complemented_[v]) {
          c += a * upper_[v];
          r[k] -= a;
        } else {
          r[k] += a;
        }
      } else {
        const auto& src = T_[static_cast<std::size_t>(p)];
        const double b = beta_[static_cast<std::size_t>(p)];
        if (complemented_[v]) {
          c += a * (upper_[v] - b);
          for (std::size_t k = 0; k < cols_; ++k) r[k] += a * src[k];
        } else {
          c += a * b;
          for (std::size_t k = 0; k < cols_; ++k) r[k] -= a * src[k];
        }
      }
    }
    for (double& x : r) {
      if (std::abs(x) < kDropTol) x = 0.0;
    }
    const std::size_t var = upper_.size();
    upper_.push_back(kInf);
    complemented_.push_back(0);
    position_.push_back(static_cast<long>(T_.size()));
    T_.push_back(std::move(r));
    beta_.push_back(row.rhs - c);
    basic_.push_back(var);
  }

  std::size_t num_rows() const { return T_.size(); }

  std::vector<double> point() const {
    std::vector<double> x(lp_.num_vars, 0.0);
    for (std::size_t v = 0; v < lp_.num_vars; ++v) {
      const long p = position_[v];
      double val = p < 0 ? 0.0 : beta_[static_cast<std::size_t>(p)];
      if (complemented_[v]) val = upper_[v] - val;
      x[v] = std::clamp(val, 0.0, upper_[v]);
    }
    return x;
  }

  // Dual simplex until every basic variable is within its bounds.
  void restore_feasibility(Budget& budget) {
    const double tol = opt_.pivot_tol;
    while (true) {
      std::size_t r = T_.size();
      double worst = tol;
      for (std::size_t i = 0; i < T_.size(); ++i) {
        const double below = -beta_[i];
        const double above = beta_[i] - upper_[basic_[i]];
        const double viol = std::max(below, above);
        if (viol > worst) {
          worst = viol;
          r = i;
        }
      }
      if (r == T_.size()) return;
      if (beta_[r] > upper_[basic_[r]]) complement_row(r);

      std::size_t k = cols_;
      double best = kInf;
      for (std::size_t j = 0; j < cols_; ++j) {
        const double t = T_[r][j];
        if (t >= -opt_.pivot_tol) continue;
        const double ratio = std::max(d_[j], 0.0) / -t;
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && k < cols_ &&
             nonbasic_[j] < nonbasic_[k])) {
          best = ratio;
          k = j;
        }
      }
      if (k == cols_) {
        throw SolverError("linear program is infeasible");
      }
      tick(budget);
      pivot(r, k);
    }
  }

  // Primal simplex from a feasible basis.
  void optimize(Budget& budget) {
    std::size_t stall = 0;
    // Once stalling starts, Bland's rule stays on for the rest of the call
    // so that tiny noisy steps cannot restart a cycle.
    bool bland = opt_.pivot_rule == PivotRule::kBland;
    while (true) {
      if (stall >= kStallLimit) bland = true;
      std::size_t k = cols_;
      double best = -opt_.cost_tol;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (d_[j] >= -opt_.cost_tol) continue;
        if (bland) {
          if (k == cols_ || nonbasic_[j] < nonbasic_[k]) k = j;
        } else if (d_[j] < best) {
          best = d_[j];
          k = j;
        }
      }
      if (k == cols_) return;

      const std::size_t entering = nonbasic_[k];
      // Largest step allowed by a basic variable in row i, optionally
      // relaxed by `slack`. Returns false if the row does not limit it.
      auto limit = [&](std::size_t i, double slack, double& lim,
                       bool& at_upper) {
        const double t = T_[i][k];
        if (t > opt_.pivot_tol) {
          lim = (std::max(beta_[i], 0.0) + slack) / t;
          at_upper = false;
          return true;
        }
        if (t < -opt_.pivot_tol && std::isfinite(upper_[basic_[i]])) {
          lim = (std::max(upper_[basic_[i]] - beta_[i], 0.0) + slack) / -t;
          at_upper = true;
          return true;
        }
        return false;
      };
      double theta = upper_[entering];
      std::size_t leave = T_.size();
      bool leave_at_upper = false;
      if (bland) {
        for (std::size_t i = 0; i < T_.size(); ++i) {
          double lim;
          bool at_upper;
          if (!limit(i, 0.0, lim, at_upper)) continue;
          bool take = lim < theta - 1e-12;
          if (!take && lim <= theta + 1e-12) {
            // Ties go to the smallest basic index, and a basis change is
            // preferred over a bound flip.
            take = leave == T_.size() ? std::isfinite(theta)
                                      : basic_[i] < basic_[leave];
          }
          if (take) {
            theta = std::min(theta, lim);
            leave = i;
            leave_at_upper = at_upper;
          }
        }
      } else {
        // Harris ratio test: bound the step with relaxed limits, then take
        // the largest pivot among rows whose exact limit fits that bound.
        double bound = upper_[entering];
        for (std::size_t i = 0; i < T_.size(); ++i) {
          double lim;
          bool at_upper;
          if (limit(i, kHarrisTol, lim, at_upper)) bound = std::min(bound, lim);
        }
        double best_pivot = 0.0;
        for (std::size_t i = 0; i < T_.size(); ++i) {
          double lim;
          bool at_upper;
          if (!limit(i, 0.0, lim, at_upper) || lim > bound) continue;
          if (std::abs(T_[i][k]) > best_pivot) {
            best_pivot = std::abs(T_[i][k]);
            leave = i;
            leave_at_upper = at_upper;
            theta = lim;
          }
        }
        if (leave < T_.size() && upper_[entering] < theta) {
          leave = T_.size();
          theta = upper_[entering];
        }
      }
      if (!std::isfinite(theta)) {
        throw SolverError("linear program is unbounded");
      }
      tick(budget);
      stall = theta <= kDegenerateStep ? stall + 1 : 0;
      if (leave == T_.size()) {
        complement_column(k);
        continue;
      }
      if (leave_at_upper) complement_row(leave);
      pivot(leave, k);
    }
  }

 private:
  void tick(Budget& budget) {
    if (++budget.used > budget.cap) {
      throw SimplexFailure("simplex iteration cap of " +
                               std::to_string(budget.cap) + " reached",
                           point());
    }
  }

  void complement_column(std::size_t k) {
    const std::size_t v = nonbasic_[k];
    const double u = upper_[v];
    for (std::size_t i = 0; i < T_.size(); ++i) {
      const double t = T_[i][k];
      if (t == 0.0) continue;
      beta_[i] -= t * u;
      T_[i][k] = -t;
    }
    z_ += d_[k] * u;
    d_[k] = -d_[k];
    complemented_[v] ^= 1;
  }

  void complement_row(std::size_t r) {
    const std::size_t v = basic_[r];
    beta_[r] = upper_[v] - beta_[r];
    for (double& t : T_[r]) t = -t;
    complemented_[v] ^= 1;
  }

  void pivot(std::size_t r, std::size_t k) {
    auto& row = T_[r];
    const double p = row[k];
    const double inv = 1.0 / p;
    for (double& t : row) t *= inv;
    row[k] = inv;
    beta_[r] *= inv;

    nz_.clear();
    for (std::size_t j = 0; j < cols_; ++j) {
      if (row[j] != 0.0) nz_.push_back(j);
    }
    for (std::size_t i = 0; i < T_.size(); ++i) {
      if (i == r) continue;
      auto& other = T_[i];
      const double f = other[k];
      if (f == 0.0) continue;
      other[k] = 0.0;
      for (std::size_t j : nz_) {
        double v = other[j] - f * row[j];
        other[j] = std::abs(v) < kDropTol ? 0.0 : v;
      }
      beta_[i] -= f * beta_[r];
    }
    const double f = d_[k];
    if (f != 0.0) {
      d_[k] = 0.0;
      for (std::size_t j : nz_) d_[j] -= f * row[j];
      z_ += f * beta_[r];
    }

    const std::size_t entering = nonbasic_[k];
    const std::size_t leaving = basic_[r];
    basic_[r] = entering;
    // Round-off must not push basic values just outside their bounds, where
    // a later small pivot would magnify it.
    for (std::size_t i = 0; i < T_.size(); ++i) {
      if (beta_[i] < 0.0 && beta_[i] > -kSnapTol) beta_[i] = 0.0;
      const double ub = upper_[basic_[i]];
      if (beta_[i] > ub && beta_[i] < ub + kSnapTol) beta_[i] = ub;
    }
    nonbasic_[k] = leaving;
    position_[entering] = static_cast<long>(r);
    position_[leaving] = -static_cast<long>(k) - 1;
  }

  const LinearProgram& lp_;
  const SimplexOptions& opt_;
  std::size_t cols_;
  std::vector<std::vector<double>> T_;
  std::vector<double> beta_;
  std::vector<std::size_t> basic_;
  std::vector<std::size_t> nonbasic_;
  std::vector<double> d_;
  double z_ = 0.0;
  std::vector<double> upper_;
  std::vector<char> complemented_;
  std::vector<long> position_;
  std::vector<std::size_t> nz_;
};

double row_activity(const LpRow& row, std::span<const double> x) {
  double s = 0.0;
  for (auto [v, a] : row.terms) s += a * x[v];
  return s;
}

void validate(const LinearProgram& lp) {
  if (lp.cost.size() != lp.num_vars || lp.upper.size() != lp.num_vars) {
    throw DataError("linear program: cost/upper size mismatch");
  }
  for (double u : lp.upper) {
    if (!(u >= 0.0)) throw DataError("linear program: negative upper bound");
  }
  for (const auto& row : lp.rows) {
    if (!(row.rhs >= 0.0)) {
      throw DataError("linear program: rows need rhs >= 0");
    }
    for (auto [v, a] : row.terms) {
      if (v >= lp.num_vars || !std::isfinite(a)) {
        throw DataError("linear program: bad row term");
      }
    }
  }
}

// Indices of inactive rows violated by x, most violated first.
std::vector<std::size_t> violated_rows(const LinearProgram& lp,
                                       std::span<const double> x,
                                       const std::vector<char>& active,
                                       double tol) {
  std::vector<std::pair<double, std::size_t>> viol;
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    if (active[r]) continue;
    const double v = row_activity(lp.rows[r], x) - lp.rows[r].rhs;
    if (v > tol) viol.emplace_back(-v, r);
  }
  std::sort(viol.begin(), viol.end());
  std::vector<std::size_t> out;
  out.reserve(viol.size());
  for (auto [v, r] : viol) out.push_back(r);
  return out;
}

}  // namespace

double LinearProgram::objective(std::span<const double> x) const {
  double z = constant;
  for (std::size_t j = 0; j < num_vars; ++j) z += cost[j] * x[j];
  return z;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < num_vars; ++j) {
    worst = std::max({worst, -x[j], x[j] - upper[j]});
  }
  for (const auto& row : rows) {
    worst = std::max(worst, row_activity(row, x) - row.rhs);
  }
  return worst;
}

SimplexResult solve_simplex(const LinearProgram& lp,
                            const SimplexOptions& options) {
  validate(lp);
  Budget budget;
  budget.cap = options.iteration_cap
                   ? options.iteration_cap
                   : 10 * (lp.rows.size() + lp.num_vars) + 1000;

  RowActivation mode = options.activation;
  if (mode == RowActivation::kAuto) {
    mode = lp.rows.size() * std::max<std::size_t>(lp.num_vars, 1) <=
                   kFullLoadEntries
               ? RowActivation::kAll
               : RowActivation::kLazy;
  }
  // Each round activates at most this many rows.
  const std::size_t batch = std::max<std::size_t>(lp.num_vars, 64);
  const double separation_tol = std::min(options.feas_tol, 1e-9);

  SimplexResult result;
  // The minimizer over the box alone is optimal whenever it is feasible.
  {
    std::vector<double> x(lp.num_vars, 0.0);
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      if (lp.cost[j] < 0.0) x[j] = lp.upper[j];
    }
    if (std::all_of(x.begin(), x.end(),
                    [](double v) { return std::isfinite(v); }) &&
        lp.max_violation(x) <= 0.0) {
      result.objective = lp.objective(x);
      result.x = std::move(x);
      return result;
    }
  }

  std::vector<char> active(lp.rows.size(), 0);
  // A restart rebuilds the tableau on the rows activated so far, which
  // clears accumulated round-off.
  for (int attempt = 0; attempt < 2; ++attempt) {
    Tableau tab(lp, options);
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
      if (active[r] || mode == RowActivation::kAll) {
        active[r] = 1;
        tab.add_row(lp.rows[r]);
      }
    }
    std::size_t rounds = 0;
    std::vector<double> x;
    while (true) {
      ++rounds;
      tab.restore_feasibility(budget);
      tab.optimize(budget);
      x = tab.point();
      auto add = violated_rows(lp, x, active, separation_tol);
      if (add.empty()) break;
      if (add.size() > batch) add.resize(batch);
      std::sort(add.begin(), add.end());
      for (std::size_t r : add) {
        active[r] = 1;
        tab.add_row(lp.rows[r]);
      }
    }
    result.x = std::move(x);
    result.objective = lp.objective(result.x);
    result.iterations = budget.used;
    result.active_rows = tab.num_rows();
    result.rounds = rounds;
    if (lp.max_violation(result.x) <= options.feas_tol) return result;
  }
  throw SimplexFailure("simplex solution violates constraints beyond " +
                           std::to_string(options.feas_tol),
                       result.x);
}

}  // namespace treefit
