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

#include "treefit/ultrafit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treefit/error.hpp"

namespace treefit {

namespace {

constexpr double kMergeTol = 1e-12;

// Level index of every pair, grouped exactly like distinct_values().
std::vector<std::size_t> pair_levels(const DistanceMatrix& d,
                                     std::vector<double>* values) {
  auto v = d.pairs().values();
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<std::size_t> level(v.size(), 0);
  values->clear();
  for (std::size_t k : order) {
    const double x = v[k];
    if (values->empty() ||
        x - values->back() > kMergeTol * std::max(1.0, std::abs(x))) {
      values->push_back(x);
    }
    level[k] = values->size() - 1;
  }
  return level;
}

}  // namespace

UltrametricReduction hcc_instance_from_distances(const DistanceMatrix& d) {
  UltrametricReduction r;
  const std::vector<std::size_t> level = pair_levels(d, &r.levels.values);
  const std::size_t l = r.levels.num_levels();
  if (l == 0) return r;
  HccInstance inst;
  inst.n = d.size();
  for (std::size_t t = 0; t < l; ++t) {
    inst.deltas.push_back(r.levels.values[t + 1] - r.levels.values[t]);
    EdgeSet e(inst.n);
    for (std::size_t k = 0; k < level.size(); ++k) e.set_index(k, level[k] <= t);
    inst.edge_sets.push_back(std::move(e));
  }
  inst.validate();
  r.instance = std::move(inst);
  return r;
}

UltrametricTree hierarchy_to_ultrametric(const HierarchySequence& p,
                                         const UltrametricLevels& lv,
                                         std::vector<std::string> labels) {
  const std::size_t n = labels.size();
  if (n == 0) throw DataError("hierarchy_to_ultrametric: no labels");
  if (lv.values.empty()) throw DataError("hierarchy_to_ultrametric: no levels");
  if (p.num_levels() != lv.num_levels()) {
    throw DataError("hierarchy_to_ultrametric: hierarchy has " +
                    std::to_string(p.num_levels()) + " levels, expected " +
                    std::to_string(lv.num_levels()));
  }
  if (p.num_levels() > 0 && p.universe_size() != n) {
    throw DataError("hierarchy_to_ultrametric: universe does not match labels");
  }
  std::vector<UltrametricTree::Node> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(UltrametricTree::Node{0.0, static_cast<int>(i), {}});
  }
  // node_of[i] is the node currently holding element i's part.
  std::vector<std::size_t> node_of(n);
  std::iota(node_of.begin(), node_of.end(), std::size_t{0});
  auto add_level = [&](const Partition& part, double height) {
    std::vector<std::size_t> next(n);
    for (const auto& block : part.parts()) {
      UltrametricTree::Node node{height, -1, {}};
      for (std::size_t i : block) {
        if (std::find(node.children.begin(), node.children.end(),
                      node_of[i]) == node.children.end()) {
          node.children.push_back(node_of[i]);
        }
      }
      nodes.push_back(std::move(node));
      for (std::size_t i : block) next[i] = nodes.size() - 1;
    }
    node_of = std::move(next);
  };
  for (std::size_t t = 0; t < p.num_levels(); ++t) {
    add_level(p.level(t), 0.5 * lv.values[t]);
  }
  add_level(Partition::whole(n), 0.5 * lv.values.back());
  return UltrametricTree(std::move(labels), std::move(nodes), node_of[0]);
}

HierarchySequence ultrametric_to_hierarchy(const UltrametricTree& u,
                                           const UltrametricLevels& lv,
                                           double tol) {
  const std::size_t n = u.size();
  const PairMatrix& dist = u.distances();
  for (double x : dist.values()) {
    const bool known = std::any_of(lv.values.begin(), lv.values.end(),
                                   [&](double v) {
                                     return std::abs(v - x) <=
                                            tol * std::max(1.0, std::abs(v));
                                   });
    if (!known) {
      throw DataError("ultrametric_to_hierarchy: distance " +
                      std::to_string(x) + " is not a level value");
    }
  }
  std::vector<Partition> levels;
  for (std::size_t t = 0; t < lv.num_levels(); ++t) {
    const double cut = lv.values[t] + tol * std::max(1.0, lv.values[t]);
    std::vector<std::size_t> block(n, n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (block[i] != n) continue;
      block[i] = next;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (block[j] == n && dist(i, j) <= cut) block[j] = next;
      }
      ++next;
    }
    levels.push_back(Partition::from_assignment(block));
  }
  return HierarchySequence(std::move(levels));
}

UltrametricFit fit_ultrametric_detailed(const DistanceMatrix& d,
                                        const UltrametricFitOptions& options) {
  const std::size_t n = d.size();
  if (n == 0) throw DataError("fit_ultrametric: empty distance matrix");
  UltrametricFit out;
  FittedTree& f = out.fitted;
  f.mode = FitMode::kUltrametric;
  if (n == 1) {
    f.tree = UltrametricTree(d.labels(), {UltrametricTree::Node{0.0, 0, {}}},
                             0);
    f.lp_lower_bound = 0.0;
    return out;
  }
  UltrametricReduction r = hcc_instance_from_distances(d);
  out.levels = r.levels;
  f.num_levels = r.levels.num_levels();
  if (!r.instance) {
    f.tree = hierarchy_to_ultrametric(HierarchySequence{}, r.levels,
                                      d.labels());
    f.lp_lower_bound = 0.0;
    f.l1_error = lp_norm_error(std::get<UltrametricTree>(f.tree), d, 1.0);
    return out;
  }
  HccOptions hcc = options.hcc;
  hcc.hca.labels = d.labels();
  HccRun run = fit_hcc(*r.instance, hcc);
  const UltrametricTree tree =
      hierarchy_to_ultrametric(run.hierarchy, r.levels, d.labels());
  f.l1_error = lp_norm_error(tree, d, 1.0);
  f.tree = tree;
  if (run.lp_lower_bound) f.lp_lower_bound = std::max(0.0, *run.lp_lower_bound);
  if (options.dump_lp && run.lp_solution) {
    f.lp_dump = dump_lp(build_lp(*r.instance), d.labels(), &*run.lp_solution);
  }
  out.run = std::move(run);
  return out;
}

FittedTree fit_ultrametric(const DistanceMatrix& d,
                           const UltrametricFitOptions& options) {
  return fit_ultrametric_detailed(d, options).fitted;
}

}  // namespace treefit
