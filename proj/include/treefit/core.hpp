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

// Shared domain types: pairwise matrices over a fixed label universe, edge
// sets, partitions and refinement chains.
//
// Every type here works over an index universe {0, ..., n-1}. Labels (opaque
// strings) are carried by DistanceMatrix and the tree types; the index of a
// label is its position of first appearance.

#ifndef TREEFIT_CORE_HPP_
#define TREEFIT_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace treefit {

/// Absolute tolerance used for exact-equality assertions on distances.
inline constexpr double kDistanceTol = 1e-9;

inline constexpr std::size_t num_pairs(std::size_t n) {
  return n < 2 ? 0 : n * (n - 1) / 2;
}

/// Condensed index of the unordered pair {i, j} (i != j) over n points.
inline constexpr std::size_t pair_index(std::size_t n, std::size_t i,
                                        std::size_t j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Inverse of pair_index.
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t n,
                                                    std::size_t index);

/// Symmetric real matrix with zero diagonal, stored in condensed form.
class PairMatrix {
 public:
  PairMatrix() = default;
  explicit PairMatrix(std::size_t n, double fill = 0.0)
      : n_(n), values_(num_pairs(n), fill) {}

  std::size_t size() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const {
    return i == j ? 0.0 : values_[pair_index(n_, i, j)];
  }
  void set(std::size_t i, std::size_t j, double v) {
    values_[pair_index(n_, i, j)] = v;
  }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool operator==(const PairMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Strictly positive distances over a labelled point set.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Throws DataError on duplicate labels, size mismatch or a non-positive
  /// (or non-finite) distance.
  DistanceMatrix(std::vector<std::string> labels, PairMatrix d);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> index_of(const std::string& label) const;

  double operator()(std::size_t i, std::size_t j) const { return d_(i, j); }
  const PairMatrix& pairs() const { return d_; }

  /// Distinct values in increasing order; values closer than `merge_tol`
  /// (relative to magnitude) collapse onto the smallest representative.
  std::vector<double> distinct_values(double merge_tol = 1e-12) const;

 private:
  std::vector<std::string> labels_;
  PairMatrix d_;
};

/// Generic labels "0", "1", ... for index-only universes.
std::vector<std::string> index_labels(std::size_t n);

/// A set of unordered pairs over {0, ..., n-1}.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t n) : n_(n), bits_(num_pairs(n), 0) {}
  EdgeSet(std::size_t n,
          std::initializer_list<std::pair<std::size_t, std::size_t>> edges);

  std::size_t universe_size() const { return n_; }
  bool contains(std::size_t i, std::size_t j) const {
    return i != j && bits_[pair_index(n_, i, j)] != 0;
  }
  bool contains_index(std::size_t pair) const { return bits_[pair] != 0; }
  void insert(std::size_t i, std::size_t j);
  void erase(std::size_t i, std::size_t j);
  void set_index(std::size_t pair, bool present) { bits_[pair] = present; }

  std::size_t count() const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool is_subset_of(const EdgeSet& other) const;

  bool operator==(const EdgeSet&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Partition of {0, ..., n-1} into nonempty disjoint parts.
///
/// Stored canonically: members sorted inside each part, parts ordered by
/// their smallest member. Two partitions compare equal iff they are the same
/// set partition.
class Partition {
 public:
  Partition() = default;
  /// Throws DataError unless `parts` is a partition of the n-element universe.
  Partition(std::size_t n, std::vector<std::vector<std::size_t>> parts);

  static Partition singletons(std::size_t n);
  static Partition whole(std::size_t n);
  /// Builds the partition whose blocks are the classes of `block_of`.
  static Partition from_assignment(std::span<const std::size_t> block_of);

  std::size_t universe_size() const { return block_of_.size(); }
  std::size_t num_parts() const { return parts_.size(); }
  const std::vector<std::vector<std::size_t>>& parts() const { return parts_; }
  const std::vector<std::size_t>& part(std::size_t k) const { return parts_[k]; }
  /// Index of the part containing element i.
  std::size_t part_of(std::size_t i) const { return block_of_[i]; }
  bool same_part(std::size_t i, std::size_t j) const {
    return block_of_[i] == block_of_[j];
  }

  /// True iff every part of *this lies inside a part of `coarser`.
  bool refines(const Partition& coarser) const;

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }

 private:
  std::vector<std::vector<std::size_t>> parts_;
  std::vector<std::size_t> block_of_;
};

/// All unordered pairs lying inside a common part.
EdgeSet clique_edges(const Partition& p);

/// |a Δ b|. Throws DataError when the universes differ.
std::size_t sym_diff_size(const EdgeSet& a, const EdgeSet& b);

/// Chain of partitions P(1), ..., P(l), each refining the next.
class HierarchySequence {
 public:
  HierarchySequence() = default;
  /// Throws DataError if the levels have different universes or a level
  /// does not refine its successor.
  explicit HierarchySequence(std::vector<Partition> levels);

  std::size_t num_levels() const { return levels_.size(); }
  std::size_t universe_size() const {
    return levels_.empty() ? 0 : levels_.front().universe_size();
  }
  /// Zero-based: level(0) is P(1).
  const Partition& level(std::size_t t) const { return levels_[t]; }
  const std::vector<Partition>& levels() const { return levels_; }

  bool operator==(const HierarchySequence&) const = default;

 private:
  std::vector<Partition> levels_;
};

bool is_hierarchical(std::span<const Partition> levels);

/// True iff u(i,j) <= max(u(i,k), u(k,j)) + tol for every triple.
bool is_ultrametric(const PairMatrix& u, double tol = kDistanceTol);

/// Calls `fn` with the restricted growth string of every set partition of an
/// n-element set, in lexicographic order of the strings.
void for_each_partition(
    std::size_t n,
    const std::function<void(std::span<const std::size_t>)>& fn);

std::vector<Partition> all_partitions(std::size_t n);

std::string format_partition(const Partition& p,
                             const std::vector<std::string>& labels);

}  // namespace treefit

#endif  // TREEFIT_CORE_HPP_
