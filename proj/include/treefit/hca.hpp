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

// Hierarchical cluster agreement: given one input partition Q(t) per level,
// find a hierarchy P(1) <= ... <= P(l) close to it. The solver rounds the LP
// relaxation in two steps. Cleaning trims every input cluster to the members
// that are LP-close to most of the cluster and LP-far from everything else;
// the surviving LP-clusters are then merged bottom-up into a forest whose
// root extended-clusters form each output level.

#ifndef TREEFIT_HCA_HPP_
#define TREEFIT_HCA_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treefit/core.hpp"
#include "treefit/lp.hpp"

namespace treefit {

/// Cleaning thresholds. Ball membership and the half test are strict, the
/// outside budget and the keep test are not.
struct CleaningThresholds {
  double inner_radius = 0.1;
  double outer_radius = 0.6;
  double outside_fraction = 0.05;
  double keep_fraction = 0.9;
};

/// Cleaning record for one input cluster.
struct LpCluster {
  /// Zero-based level.
  std::size_t level = 0;
  /// Sorted members of the input cluster C_I.
  std::vector<std::size_t> input;
  /// Sorted surviving members C_LP (computed even when discarded).
  std::vector<std::size_t> members;
  bool kept = true;
};

struct LpClusterFamilies {
  std::size_t n = 0;
  /// All cleaning records per level, kept or not, in input order.
  std::vector<std::vector<LpCluster>> levels;

  std::size_t num_levels() const { return levels.size(); }
  /// Members of the kept clusters at level t, in record order.
  std::vector<std::vector<std::size_t>> kept(std::size_t t) const;

  /// Families given directly as kept clusters (input cluster = members).
  static LpClusterFamilies from_sets(
      std::size_t n, std::vector<std::vector<std::vector<std::size_t>>> sets);
};

LpClusterFamilies lp_cleaning(std::span<const Partition> q,
                              const LpSolution& x,
                              const CleaningThresholds& th = {});

/// True iff no kept cluster intersects two distinct kept clusters of a
/// strictly higher level.
bool check_hierarchy_friendly(const LpClusterFamilies& l);

struct ForestNode {
  /// 0 for leaves; 1-based creation level for internal nodes.
  std::size_t level = 0;
  std::vector<std::size_t> core;
  std::vector<std::size_t> extended;
  /// Empty for leaves.
  std::vector<std::size_t> lp_cluster;
  std::vector<std::size_t> input_cluster;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
};

/// Nodes 0..n-1 are the leaves, in label order.
struct ClusterForest {
  std::size_t n = 0;
  std::vector<ForestNode> nodes;

  std::vector<std::size_t> roots() const;
  /// Sorted leaf labels below `node`.
  std::vector<std::size_t> descendant_leaves(std::size_t node) const;
};

enum class ClusterOrder {
  /// Size descending, then smallest member.
  kSorted,
  /// The order of the records in the families.
  kGiven,
};

struct DerivedHierarchy {
  HierarchySequence hierarchy;
  ClusterForest forest;
};

/// Throws DataError if `l` is not hierarchy-friendly.
DerivedHierarchy derive_hierarchy(const LpClusterFamilies& l,
                                  ClusterOrder order = ClusterOrder::kSorted);

/// Cost sum_t delta(t) |E(t) sym-diff clique_edges(P(t))|.
double hierarchy_cost(const HccInstance& inst, const HierarchySequence& p);

struct HcaOptions {
  LpSolveOptions lp;
  CleaningThresholds thresholds;
  ClusterOrder order = ClusterOrder::kSorted;
  /// Also return the LP program text.
  bool dump_lp = false;
  std::vector<std::string> labels;
};

struct HcaRun {
  HierarchySequence hierarchy;
  HccInstance instance;
  LpSolution x;
  LpClusterFamilies families;
  ClusterForest forest;
  double cost = 0.0;
  std::string lp_dump;
};

HcaRun fit_hca(std::span<const Partition> q, std::vector<double> deltas,
               const HcaOptions& options = {});

/// Checks the structural guarantees of a run: cleaned families are
/// hierarchy-friendly, forest links and extended clusters are consistent,
/// |C+ \ C| <= 0.3|C|, |L \ C| < 0.1|C|, the two differences are disjoint,
/// LP-clusters have LP diameter below 0.2 from their level upward, and every
/// species removed by cleaning pays LP cost at least 0.02 delta |C_I| at that
/// level. Returns one message per violation.
std::vector<std::string> audit_hca(const HcaRun& run, double tol = 1e-6);

}  // namespace treefit

#endif  // TREEFIT_HCA_HPP_
