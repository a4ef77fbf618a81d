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

// Correlation clustering on complete graphs: given an edge set E, find a
// partition P minimizing |E sym-diff clique_edges(P)|.

#ifndef TREEFIT_CORRCLUST_HPP_
#define TREEFIT_CORRCLUST_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "treefit/core.hpp"

namespace treefit {

enum class CorrClustStrategy {
  /// Deterministic: KwikCluster once per choice of first pivot, later pivots
  /// in label order; the cheapest of the n runs wins (ties: earliest pivot).
  kPivotSweep,
  /// One KwikCluster run with uniformly random pivots drawn from the seed.
  kRandomPivot,
  /// Exhaustive search over all partitions (universe size <= exact cap).
  kExact,
};

inline constexpr std::size_t kExactCorrClustCap = 9;

/// One cluster emitted by a pivot run: the pivot and the members it claimed.
struct PivotStep {
  std::size_t pivot = 0;
  std::vector<std::size_t> members;
};

struct CorrClustResult {
  Partition partition;
  std::size_t cost = 0;
  /// Pivot steps of the returned run (empty for kExact).
  std::vector<PivotStep> trace;
};

/// |E sym-diff clique_edges(P)|.
std::size_t corr_cluster_cost(const EdgeSet& e, const Partition& p);

/// KwikCluster with pivots taken in the order given by `pivot_order`
/// (a permutation of the universe; already-clustered entries are skipped).
CorrClustResult kwik_cluster(const EdgeSet& e,
                             const std::vector<std::size_t>& pivot_order);

CorrClustResult corr_cluster(const EdgeSet& e,
                             CorrClustStrategy strategy =
                                 CorrClustStrategy::kPivotSweep,
                             std::uint64_t seed = 0);

}  // namespace treefit

#endif  // TREEFIT_CORRCLUST_HPP_
