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

#include "treefit/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "treefit/error.hpp"

namespace treefit {

namespace {

bool same_height(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_unique(const std::vector<std::string>& labels) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw DataError("duplicate label '" + l + "' in tree");
    }
  }
}

}  // namespace

UltrametricTree::UltrametricTree(std::vector<std::string> labels,
                                 std::vector<Node> nodes, std::size_t root)
    : labels_(std::move(labels)) {
  check_unique(labels_);
  canonicalize(std::move(nodes), root);
  compute_distances();
}

void UltrametricTree::canonicalize(std::vector<Node> in, std::size_t root) {
  if (root >= in.size()) throw DataError("ultrametric tree root out of range");
  const std::size_t n = labels_.size();
  std::vector<int> seen_label(n, 0);
  std::vector<int> visiting(in.size(), 0);

  nodes_.clear();
  std::vector<std::size_t> min_label;

  // Returns the canonical node for the subtree at `v`: unary nodes dissolve
  // into their child, equal-height internal children merge into the parent.
  auto build = [&](auto&& self, std::size_t v) -> std::size_t {
    if (v >= in.size()) throw DataError("ultrametric tree child out of range");
    if (visiting[v]++) throw DataError("ultrametric tree contains a cycle");
    const Node& node = in[v];
    if (node.children.empty()) {
      if (node.leaf < 0 || static_cast<std::size_t>(node.leaf) >= n) {
        throw DataError("ultrametric tree leaf without a valid label");
      }
      if (std::abs(node.height) > kDistanceTol) {
        throw DataError("ultrametric tree leaf with nonzero height");
      }
      if (seen_label[node.leaf]++) {
        throw DataError("label '" + labels_[node.leaf] +
                        "' appears twice in ultrametric tree");
      }
      nodes_.push_back(Node{0.0, node.leaf, {}});
      min_label.push_back(static_cast<std::size_t>(node.leaf));
      return nodes_.size() - 1;
    }
    if (node.leaf >= 0) {
      throw DataError("ultrametric tree internal node carries a label");
    }
    std::vector<std::size_t> kids;
    for (std::size_t c : node.children) {
      const std::size_t r = self(self, c);
      const double h = nodes_[r].height;
      if (h > node.height && !same_height(h, node.height)) {
        throw DataError("ultrametric tree child higher than its parent");
      }
      if (nodes_[r].leaf < 0 && same_height(h, node.height)) {
        const auto grandkids = nodes_[r].children;
        kids.insert(kids.end(), grandkids.begin(), grandkids.end());
      } else {
        kids.push_back(r);
      }
    }
    if (kids.size() == 1) return kids.front();
    std::size_t m = min_label[kids.front()];
    for (std::size_t k : kids) m = std::min(m, min_label[k]);
    nodes_.push_back(Node{node.height, -1, std::move(kids)});
    min_label.push_back(m);
    return nodes_.size() - 1;
  };

  root_ = build(build, root);
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen_label[i]) {
      throw DataError("label '" + labels_[i] + "' missing from ultrametric tree");
    }
  }

  // Re-emit in preorder with children sorted by smallest leaf label.
  std::vector<Node> ordered;
  auto emit = [&](auto&& self, std::size_t v) -> std::size_t {
    const std::size_t idx = ordered.size();
    ordered.push_back(Node{nodes_[v].height, nodes_[v].leaf, {}});
    std::vector<std::size_t> kids = nodes_[v].children;
    std::sort(kids.begin(), kids.end(), [&](std::size_t a, std::size_t b) {
      return min_label[a] < min_label[b];
    });
    std::vector<std::size_t> mapped;
    for (std::size_t c : kids) mapped.push_back(self(self, c));
    ordered[idx].children = std::move(mapped);
    return idx;
  };
  emit(emit, root_);
  nodes_ = std::move(ordered);
  root_ = 0;

  leaf_node_.assign(n, 0);
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].leaf >= 0) leaf_node_[nodes_[v].leaf] = v;
  }
}

void UltrametricTree::compute_distances() {
  const std::size_t n = labels_.size();
  dist_ = PairMatrix(n);
  std::vector<std::vector<std::size_t>> leaves(nodes_.size());
  // Preorder indices: children always follow parents, so walk backwards.
  for (std::size_t v = nodes_.size(); v-- > 0;) {
    const Node& node = nodes_[v];
    if (node.leaf >= 0) {
      leaves[v] = {static_cast<std::size_t>(node.leaf)};
      continue;
    }
    for (std::size_t a = 0; a < node.children.size(); ++a) {
      for (std::size_t b = a + 1; b < node.children.size(); ++b) {
        for (std::size_t i : leaves[node.children[a]]) {
          for (std::size_t j : leaves[node.children[b]]) {
            dist_.set(i, j, 2.0 * node.height);
          }
        }
      }
    }
    for (std::size_t c : node.children) {
      leaves[v].insert(leaves[v].end(), leaves[c].begin(), leaves[c].end());
      leaves[c].clear();
      leaves[c].shrink_to_fit();
    }
  }
}

UltrametricTree UltrametricTree::from_distances(std::vector<std::string> labels,
                                                const PairMatrix& u,
                                                double tol) {
  const std::size_t n = labels.size();
  if (u.size() != n) throw DataError("ultrametric size does not match labels");
  if (!is_ultrametric(u, tol)) {
    throw DataError("matrix is not an ultrametric");
  }
  std::vector<Node> nodes;
  nodes.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(Node{0.0, static_cast<int>(i), {}});
  }
  if (n == 0) throw DataError("ultrametric tree needs at least one label");

  std::vector<std::size_t> order(num_pairs(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return u.values()[a] < u.values()[b];
  });
  std::vector<std::size_t> uf(n);
  std::iota(uf.begin(), uf.end(), std::size_t{0});
  std::vector<std::size_t> top(n);  // tree node of each union-find root
  std::iota(top.begin(), top.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (std::size_t k : order) {
    auto [i, j] = pair_from_index(n, k);
    std::size_t ri = find(i), rj = find(j);
    if (ri == rj) continue;
    const double h = 0.5 * u.values()[k];
    std::size_t a = top[ri], b = top[rj];
    std::size_t merged;
    if (nodes[a].leaf < 0 && same_height(nodes[a].height, h)) {
      nodes[a].children.push_back(b);
      merged = a;
    } else if (nodes[b].leaf < 0 && same_height(nodes[b].height, h)) {
      nodes[b].children.push_back(a);
      merged = b;
    } else {
      nodes.push_back(Node{h, -1, {a, b}});
      merged = nodes.size() - 1;
    }
    uf[rj] = ri;
    top[ri] = merged;
  }
  return UltrametricTree(std::move(labels), std::move(nodes),
                         top[find(0)]);
}

WeightedTree::WeightedTree(std::vector<std::string> labels,
                           std::size_t num_nodes, std::vector<Edge> edges,
                           std::vector<std::size_t> node_of_label)
    : labels_(std::move(labels)),
      num_nodes_(num_nodes),
      edges_(std::move(edges)),
      node_of_label_(std::move(node_of_label)),
      incident_(num_nodes) {
  check_unique(labels_);
  if (num_nodes_ == 0) throw DataError("weighted tree has no vertices");
  if (edges_.size() + 1 != num_nodes_) {
    throw DataError("weighted tree needs exactly num_nodes - 1 edges");
  }
  if (node_of_label_.size() != labels_.size()) {
    throw DataError("weighted tree label map has wrong size");
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.a >= num_nodes_ || edge.b >= num_nodes_ || edge.a == edge.b) {
      throw DataError("weighted tree edge has invalid endpoints");
    }
    if (!std::isfinite(edge.weight) || edge.weight < 0.0) {
      throw DataError("weighted tree edge weight must be finite and >= 0");
    }
    incident_[edge.a].push_back(e);
    incident_[edge.b].push_back(e);
  }
  for (std::size_t v : node_of_label_) {
    if (v >= num_nodes_) throw DataError("label mapped to missing vertex");
  }

  // Single-source traversal per label; also proves connectivity.
  const std::size_t n = labels_.size();
  dist_ = PairMatrix(n);
  std::vector<double> d(num_nodes_);
  std::vector<std::size_t> stack;
  std::vector<char> seen(num_nodes_);
  auto traverse = [&](std::size_t src) {
    std::fill(seen.begin(), seen.end(), 0);
    d[src] = 0.0;
    seen[src] = 1;
    stack.assign(1, src);
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t e : incident_[v]) {
        const std::size_t w = edges_[e].a == v ? edges_[e].b : edges_[e].a;
        if (seen[w]) continue;
        seen[w] = 1;
        ++reached;
        d[w] = d[v] + edges_[e].weight;
        stack.push_back(w);
      }
    }
    return reached;
  };
  if (traverse(0) != num_nodes_) throw DataError("weighted tree is disconnected");
  for (std::size_t i = 0; i < n; ++i) {
    traverse(node_of_label_[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      dist_.set(i, j, d[node_of_label_[j]]);
    }
  }
}

bool WeightedTree::is_metric() const {
  for (const Edge& e : edges_) {
    if (!(e.weight > 0.0)) return false;
  }
  for (double v : dist_.values()) {
    if (!(v > 0.0)) return false;
  }
  return true;
}

double lp_norm_error(const PairMatrix& fitted, const PairMatrix& d, double p) {
  if (fitted.size() != d.size()) {
    throw DataError("lp_norm_error: matrices of different size");
  }
  if (!(p > 0.0)) throw DataError("lp_norm_error: p must be positive");
  auto a = fitted.values();
  auto b = d.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
  }
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return s;
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += std::pow(std::abs(a[k] - b[k]), p);
  }
  return std::pow(s, 1.0 / p);
}

PairMatrix distances_in_label_order(const PairMatrix& dist,
                                    const std::vector<std::string>& from,
                                    const std::vector<std::string>& target) {
  if (from.size() != target.size()) {
    throw DataError("tree spans " + std::to_string(from.size()) +
                    " labels but the matrix has " +
                    std::to_string(target.size()));
  }
  if (from == target) return dist;
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < from.size(); ++i) pos.emplace(from[i], i);
  std::vector<std::size_t> map(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    auto it = pos.find(target[i]);
    if (it == pos.end()) {
      throw DataError("label '" + target[i] + "' missing from tree");
    }
    map[i] = it->second;
  }
  PairMatrix out(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    for (std::size_t j = i + 1; j < target.size(); ++j) {
      out.set(i, j, dist(map[i], map[j]));
    }
  }
  return out;
}

double lp_norm_error(const UltrametricTree& t, const DistanceMatrix& d,
                     double p) {
  return lp_norm_error(
      distances_in_label_order(t.distances(), t.labels(), d.labels()),
      d.pairs(), p);
}

double lp_norm_error(const WeightedTree& t, const DistanceMatrix& d,
                     double p) {
  return lp_norm_error(
      distances_in_label_order(t.distances(), t.labels(), d.labels()),
      d.pairs(), p);
}

const std::vector<std::string>& FittedTree::labels() const {
  return std::visit([](const auto& t) -> const std::vector<std::string>& {
    return t.labels();
  }, tree);
}

const PairMatrix& FittedTree::distances() const {
  return std::visit([](const auto& t) -> const PairMatrix& {
    return t.distances();
  }, tree);
}

}  // namespace treefit
