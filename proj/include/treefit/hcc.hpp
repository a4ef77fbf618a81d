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

#ifndef TREEFIT_HCC_HPP_
#define TREEFIT_HCC_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "treefit/corrclust.hpp"
#include "treefit/hca.hpp"
#include "treefit/lp.hpp"

namespace treefit {

struct HccOptions {
  CorrClustStrategy strategy = CorrClustStrategy::kPivotSweep;
  std::uint64_t seed = 0;
  HcaOptions hca;
  /// Solve the LP relaxation of the original instance for a lower bound.
  bool lower_bound = true;
};

struct HccRun {
  HierarchySequence hierarchy;
  /// Per-level correlation clustering of the input edge sets.
  std::vector<Partition> q;
  HcaRun hca;
  /// sum_t delta(t) |E(t) sym-diff clique_edges(P(t))|.
  double cost = 0.0;
  /// Optimum of the LP relaxation on the original edge sets.
  std::optional<double> lp_lower_bound;
  std::optional<LpSolution> lp_solution;
};

/// Clusters every level independently, then rounds the cluster-agreement LP
/// of those partitions into a hierarchy.
HccRun fit_hcc(const HccInstance& inst, const HccOptions& options = {});

}  // namespace treefit

#endif  // TREEFIT_HCC_HPP_
