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

// Exhaustive solvers for tiny instances. Every search enumerates set
// partitions in restricted-growth order, so ties resolve to the first
// partition in that order.

#ifndef TREEFIT_ORACLE_HPP_
#define TREEFIT_ORACLE_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "treefit/core.hpp"
#include "treefit/lp.hpp"
#include "treefit/trees.hpp"

namespace treefit {

inline constexpr std::size_t kOracleCorrClustCap = 9;
inline constexpr std::size_t kOracleUltrametricCap = 7;
inline constexpr std::size_t kOracleHcaCap = 6;
inline constexpr std::size_t kOracleHcaLevelCap = 3;

/// Minimum-disagreement partition. Universe size at most 9.
std::pair<Partition, std::size_t> exact_corr_cluster(const EdgeSet& e);

/// Cheapest hierarchy for an arbitrary instance by dynamic programming over
/// partitions level by level. Universe size at most 7.
std::pair<HierarchySequence, double> exact_hcc(const HccInstance& inst);

/// Cluster-agreement instance with partitions q. At most 6 elements and
/// 3 levels.
std::pair<HierarchySequence, double> exact_hca(std::span<const Partition> q,
                                               std::vector<double> deltas);

/// L1-optimal ultrametric among those using only input distances, which
/// contains an optimal ultrametric. At most 7 labels.
std::pair<UltrametricTree, double> exact_ultrametric_l1(const DistanceMatrix& d);

/// Rewrites `u` into an ultrametric with distances in {1, 2} whose L1 error
/// against `d` is not larger. Throws DataError unless every distance of `d`
/// is 1 or 2 and the label sets agree.
UltrametricTree flatten_to_12(const UltrametricTree& u, const DistanceMatrix& d);

}  // namespace treefit

#endif  // TREEFIT_ORACLE_HPP_
