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

#ifndef TREEFIT_TREES_HPP_
#define TREEFIT_TREES_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "treefit/core.hpp"

namespace treefit {

/// Rooted tree with every leaf at height 0; the distance between two leaves
/// is twice the height of their lowest common ancestor.
///
/// Canonical form: no unary internal nodes, heights strictly increasing from
/// child to parent, children ordered by their smallest leaf label index.
class UltrametricTree {
 public:
  struct Node {
    double height = 0.0;
    /// Label index for leaves, -1 for internal nodes.
    int leaf = -1;
    std::vector<std::size_t> children;
  };

  UltrametricTree() = default;
  /// Canonicalizes the given rooted tree. Throws DataError if a label is
  /// missing or repeated, a child is not lower than its parent, or a leaf has
  /// nonzero height.
  UltrametricTree(std::vector<std::string> labels, std::vector<Node> nodes,
                  std::size_t root);

  /// Realizes an ultrametric matrix (checked within `tol`).
  static UltrametricTree from_distances(std::vector<std::string> labels,
                                        const PairMatrix& u,
                                        double tol = kDistanceTol);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t root() const { return root_; }
  std::size_t leaf_node(std::size_t label) const { return leaf_node_[label]; }

  /// Realized leaf-to-leaf distances (cached).
  const PairMatrix& distances() const { return dist_; }

 private:
  void canonicalize(std::vector<Node> nodes, std::size_t root);
  void compute_distances();

  std::vector<std::string> labels_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
  std::vector<std::size_t> leaf_node_;
  PairMatrix dist_;
};

/// Undirected tree with nonnegative edge weights whose vertices include the
/// labelled points; the distance between labels is the weighted path length.
/// Several labels may share a vertex (distance 0, a pseudometric).
class WeightedTree {
 public:
  struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    double weight = 0.0;
  };

  WeightedTree() = default;
  /// Throws DataError unless the graph is a tree on `num_nodes` vertices with
  /// finite nonnegative weights and every label maps to a vertex.
  WeightedTree(std::vector<std::string> labels, std::size_t num_nodes,
               std::vector<Edge> edges, std::vector<std::size_t> node_of_label);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t num_nodes() const { return num_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_of_label(std::size_t label) const {
    return node_of_label_[label];
  }
  const std::vector<std::size_t>& node_of_label() const {
    return node_of_label_;
  }
  /// Indices into edges() incident to `node`.
  const std::vector<std::size_t>& incident(std::size_t node) const {
    return incident_[node];
  }

  const PairMatrix& distances() const { return dist_; }

  /// True iff every edge weight and every label-to-label distance is
  /// positive.
  bool is_metric() const;

 private:
  std::vector<std::string> labels_;
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> node_of_label_;
  std::vector<std::vector<std::size_t>> incident_;
  PairMatrix dist_;
};

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// (sum |fitted - d|^p)^(1/p) over all pairs; p = kInfNorm gives the max.
/// `fitted` must be indexed like `d`.
double lp_norm_error(const PairMatrix& fitted, const PairMatrix& d, double p);

/// Reorders a tree's realized distances into `target` label order. Throws
/// DataError unless the label sets coincide.
PairMatrix distances_in_label_order(const PairMatrix& dist,
                                    const std::vector<std::string>& from,
                                    const std::vector<std::string>& target);

double lp_norm_error(const UltrametricTree& t, const DistanceMatrix& d,
                     double p);
double lp_norm_error(const WeightedTree& t, const DistanceMatrix& d, double p);

enum class FitMode { kUltrametric, kTreeMetric };

/// Result of a fitting run.
struct FittedTree {
  std::variant<UltrametricTree, WeightedTree> tree;
  FitMode mode = FitMode::kUltrametric;
  double l1_error = 0.0;
  /// Optimum of the LP relaxation on the original instance, when computed.
  std::optional<double> lp_lower_bound;
  std::size_t num_levels = 0;
  /// Plain-text dump of an LP solved during the fit, when requested.
  std::string lp_dump;

  const std::vector<std::string>& labels() const;
  const PairMatrix& distances() const;
};

}  // namespace treefit

#endif  // TREEFIT_TREES_HPP_
