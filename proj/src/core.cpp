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

#include "treefit/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "treefit/error.hpp"

namespace treefit {

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t n,
                                                    std::size_t index) {
  std::size_t i = 0;
  std::size_t row = n - 1;
  while (index >= row) {
    index -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + index};
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, PairMatrix d)
    : labels_(std::move(labels)), d_(std::move(d)) {
  if (d_.size() != labels_.size()) {
    throw DataError("distance matrix has " + std::to_string(d_.size()) +
                    " points but " + std::to_string(labels_.size()) +
                    " labels");
  }
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, fresh] = seen.emplace(labels_[i], i);
    if (!fresh) {
      throw DataError("duplicate label '" + labels_[i] + "' at positions " +
                      std::to_string(it->second) + " and " +
                      std::to_string(i));
    }
  }
  const std::size_t n = labels_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = d_(i, j);
      if (!std::isfinite(v) || v <= 0.0) {
        throw DataError("distance between '" + labels_[i] + "' and '" +
                        labels_[j] + "' must be positive and finite");
      }
    }
  }
}

std::optional<std::size_t> DistanceMatrix::index_of(
    const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<double> DistanceMatrix::distinct_values(double merge_tol) const {
  std::vector<double> v(d_.values().begin(), d_.values().end());
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() ||
        x - out.back() > merge_tol * std::max(1.0, std::abs(x))) {
      out.push_back(x);
    }
  }
  return out;
}

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

EdgeSet::EdgeSet(
    std::size_t n,
    std::initializer_list<std::pair<std::size_t, std::size_t>> edges)
    : EdgeSet(n) {
  for (auto [i, j] : edges) insert(i, j);
}

void EdgeSet::insert(std::size_t i, std::size_t j) {
  if (i == j || i >= n_ || j >= n_) {
    throw DataError("edge endpoints must be distinct members of the universe");
  }
  bits_[pair_index(n_, i, j)] = 1;
}

void EdgeSet::erase(std::size_t i, std::size_t j) {
  if (i != j) bits_[pair_index(n_, i, j)] = 0;
}

std::size_t EdgeSet::count() const {
  return static_cast<std::size_t>(
      std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::pair<std::size_t, std::size_t>> EdgeSet::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (contains(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  if (other.n_ != n_) return false;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k] && !other.bits_[k]) return false;
  }
  return true;
}

Partition::Partition(std::size_t n,
                     std::vector<std::vector<std::size_t>> parts)
    : block_of_(n, n) {
  for (auto& part : parts) {
    if (part.empty()) throw DataError("partition has an empty part");
    std::sort(part.begin(), part.end());
  }
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (std::size_t i : parts[k]) {
      if (i >= n) {
        throw DataError("partition element " + std::to_string(i) +
                        " outside universe of size " + std::to_string(n));
      }
      if (block_of_[i] != n) {
        throw DataError("partition parts overlap at element " +
                        std::to_string(i));
      }
      block_of_[i] = k;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (block_of_[i] == n) {
      throw DataError("partition does not cover element " + std::to_string(i));
    }
  }
  parts_ = std::move(parts);
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::vector<std::size_t>> parts(n);
  for (std::size_t i = 0; i < n; ++i) parts[i] = {i};
  return Partition(n, std::move(parts));
}

Partition Partition::whole(std::size_t n) {
  if (n == 0) return Partition(0, {});
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return Partition(n, {std::move(all)});
}

Partition Partition::from_assignment(std::span<const std::size_t> block_of) {
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<std::vector<std::size_t>> parts;
  for (std::size_t i = 0; i < block_of.size(); ++i) {
    auto [it, fresh] = slot.emplace(block_of[i], parts.size());
    if (fresh) parts.emplace_back();
    parts[it->second].push_back(i);
  }
  return Partition(block_of.size(), std::move(parts));
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.universe_size() != universe_size()) return false;
  for (const auto& part : parts_) {
    const std::size_t target = coarser.part_of(part.front());
    for (std::size_t i : part) {
      if (coarser.part_of(i) != target) return false;
    }
  }
  return true;
}

EdgeSet clique_edges(const Partition& p) {
  EdgeSet e(p.universe_size());
  for (const auto& part : p.parts()) {
    for (std::size_t a = 0; a < part.size(); ++a) {
      for (std::size_t b = a + 1; b < part.size(); ++b) {
        e.insert(part[a], part[b]);
      }
    }
  }
  return e;
}

std::size_t sym_diff_size(const EdgeSet& a, const EdgeSet& b) {
  if (a.universe_size() != b.universe_size()) {
    throw DataError("edge sets over different universes (" +
                    std::to_string(a.universe_size()) + " vs " +
                    std::to_string(b.universe_size()) + ")");
  }
  std::size_t diff = 0;
  for (std::size_t k = 0; k < num_pairs(a.universe_size()); ++k) {
    diff += a.contains_index(k) != b.contains_index(k);
  }
  return diff;
}

bool is_hierarchical(std::span<const Partition> levels) {
  for (std::size_t t = 0; t + 1 < levels.size(); ++t) {
    if (!levels[t].refines(levels[t + 1])) return false;
  }
  return true;
}

HierarchySequence::HierarchySequence(std::vector<Partition> levels)
    : levels_(std::move(levels)) {
  for (std::size_t t = 0; t + 1 < levels_.size(); ++t) {
    if (levels_[t].universe_size() != levels_[t + 1].universe_size()) {
      throw DataError("hierarchy levels have different universes");
    }
    if (!levels_[t].refines(levels_[t + 1])) {
      throw DataError("level " + std::to_string(t + 1) +
                      " does not refine level " + std::to_string(t + 2));
    }
  }
}

bool is_ultrametric(const PairMatrix& u, double tol) {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double uij = u(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (uij > std::max(u(i, k), u(k, j)) + tol) return false;
      }
    }
  }
  return true;
}

void for_each_partition(
    std::size_t n,
    const std::function<void(std::span<const std::size_t>)>& fn) {
  if (n == 0) {
    fn({});
    return;
  }
  // Restricted growth strings: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
  std::vector<std::size_t> rgs(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  while (true) {
    fn(rgs);
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t k = i + 1; k < n; ++k) {
      rgs[k] = 0;
      prefix_max[k] = prefix_max[i];
    }
  }
}

std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  for_each_partition(n, [&](std::span<const std::size_t> rgs) {
    out.push_back(Partition::from_assignment(rgs));
  });
  return out;
}

std::string format_partition(const Partition& p,
                             const std::vector<std::string>& labels) {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < p.num_parts(); ++k) {
    if (k) os << ',';
    os << '{';
    for (std::size_t m = 0; m < p.part(k).size(); ++m) {
      if (m) os << ',';
      os << labels[p.part(k)[m]];
    }
    os << '}';
  }
  os << '}';
  return os.str();
}

}  // namespace treefit
