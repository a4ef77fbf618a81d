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

// L1 ultrametric fitting as a hierarchy problem over the distinct input
// distances D(1) < ... < D(l+1). Level t has edge set {D <= D(t)} and weight
// D(t+1) - D(t); a hierarchy P maps to the ultrametric whose pairs merged
// first at level t sit at distance D(t), and its weighted edge-set
// disagreement equals the L1 error of that ultrametric.

#ifndef TREEFIT_ULTRAFIT_HPP_
#define TREEFIT_ULTRAFIT_HPP_

#include <optional>
#include <vector>

#include "treefit/core.hpp"
#include "treefit/hcc.hpp"
#include "treefit/lp.hpp"
#include "treefit/trees.hpp"

namespace treefit {

struct UltrametricLevels {
  /// Distinct distances, strictly increasing.
  std::vector<double> values;

  std::size_t num_levels() const {
    return values.empty() ? 0 : values.size() - 1;
  }
  double delta0() const { return values.front(); }
};

struct UltrametricReduction {
  UltrametricLevels levels;
  /// Empty when the input has a single distinct distance.
  std::optional<HccInstance> instance;
};

/// Levels and instance of `d`; values within 1e-12 (relative) are merged.
UltrametricReduction hcc_instance_from_distances(const DistanceMatrix& d);

/// Throws DataError unless `p` has lv.num_levels() levels.
UltrametricTree hierarchy_to_ultrametric(const HierarchySequence& p,
                                         const UltrametricLevels& lv,
                                         std::vector<std::string> labels);

/// Threshold partitions of an ultrametric whose distances are all level
/// values. Throws DataError on any other distance.
HierarchySequence ultrametric_to_hierarchy(const UltrametricTree& u,
                                           const UltrametricLevels& lv,
                                           double tol = kDistanceTol);

struct UltrametricFitOptions {
  HccOptions hcc;
  /// Keep a text dump of the lower-bound LP and its solution.
  bool dump_lp = false;
};

struct UltrametricFit {
  FittedTree fitted;
  UltrametricLevels levels;
  /// Present unless the input has a single distinct distance.
  std::optional<HccRun> run;
};

UltrametricFit fit_ultrametric_detailed(
    const DistanceMatrix& d, const UltrametricFitOptions& options = {});

FittedTree fit_ultrametric(const DistanceMatrix& d,
                           const UltrametricFitOptions& options = {});

}  // namespace treefit

#endif  // TREEFIT_ULTRAFIT_HPP_
