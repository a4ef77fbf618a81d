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

// Tree-metric fitting through ultrametrics.
//
// For a pivot a with h(i) = D(a, i) and M = max h, the Gromov transform
//   U_D(i, j) = M - (h(i) + h(j) - D(i, j)) / 2,   U_D(a, i) = M
// turns tree metrics into ultrametrics that respect the per-point lower
// bounds beta(i) = M - h(i) and the pivot constraint U(a, i) = gamma = M.
// Fitting an unrestricted ultrametric to the squeezed transform and clamping
// it back into the bounds yields a restricted ultrametric, which maps back to
// a tree through T(i, j) = 2 U(i, j) - 2 M + h(i) + h(j).

#ifndef TREEFIT_TREE_METRIC_HPP_
#define TREEFIT_TREE_METRIC_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "treefit/core.hpp"
#include "treefit/trees.hpp"
#include "treefit/ultrafit.hpp"

namespace treefit {

struct RestrictedInstance {
  std::size_t pivot = 0;
  double gamma = 0.0;
  /// Lower bound per label; beta[pivot] == gamma.
  std::vector<double> beta;
  /// D(pivot, i), with h[pivot] == 0.
  std::vector<double> h;
  /// U_D over all labels, pivot included.
  DistanceMatrix transformed;
};

RestrictedInstance gromov_transform(const DistanceMatrix& d, std::size_t pivot);

/// min(gamma, max(D_in(i, j), beta(i), beta(j))).
DistanceMatrix squeeze(const DistanceMatrix& d_in, const RestrictedInstance& r);

/// Same formula applied to an ultrametric; the result stays ultrametric and
/// is no farther from the squeezed matrix than the input in any L_p norm.
PairMatrix clamp_to_restricted(const PairMatrix& u,
                               const RestrictedInstance& r);

/// Realizes the back-transform of a restricted ultrametric as a tree rooted
/// at the pivot. Edges of weight zero are kept (tree pseudometric). Throws
/// DataError if `u` breaks the restriction by more than `tol`.
WeightedTree restricted_to_tree(const PairMatrix& u,
                                const RestrictedInstance& r,
                                const std::vector<std::string>& labels,
                                double tol = 1e-9);

/// Contracts zero-weight edges and gives every label that then shares a
/// vertex with another label its own pendant edge of weight
/// alpha * d_min / (8 n), where d_min is the smallest positive deviation
/// |T(i, j) - D(i, j)|. Distances of exact fits are left unchanged.
WeightedTree pseudometric_to_metric(const WeightedTree& t,
                                    const DistanceMatrix& d, double alpha);

struct TreeFitOptions {
  /// Fixed pivot label index; every pivot is tried when empty.
  std::optional<std::size_t> pivot;
  UltrametricFitOptions ultrametric;
  /// Worker threads for the pivot sweep; 0 uses the hardware concurrency.
  std::size_t threads = 0;
};

struct TreeCandidate {
  std::size_t pivot = 0;
  RestrictedInstance restricted;
  /// Squeezed transform the ultrametric was fitted to.
  DistanceMatrix squeezed;
  /// Unrestricted fit and its clamped version.
  PairMatrix fitted;
  PairMatrix clamped;
  WeightedTree tree;
  double l1_error = 0.0;
  std::optional<double> lp_lower_bound;
  std::size_t num_levels = 0;
  std::string lp_dump;
};

struct TreeFit {
  FittedTree fitted;
  std::vector<TreeCandidate> candidates;
  /// Index into candidates of the selected pivot.
  std::size_t best = 0;
};

TreeFit fit_tree_metric_detailed(const DistanceMatrix& d,
                                 const TreeFitOptions& options = {});

FittedTree fit_tree_metric(const DistanceMatrix& d,
                           const TreeFitOptions& options = {});

}  // namespace treefit

#endif  // TREEFIT_TREE_METRIC_HPP_
