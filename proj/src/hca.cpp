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

#include "treefit/hca.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "treefit/error.hpp"

namespace treefit {

namespace {

bool intersects(const std::vector<std::size_t>& a,
                const std::vector<std::size_t>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

std::vector<std::size_t> set_minus(const std::vector<std::size_t>& a,
                                   const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

std::vector<std::size_t> set_union(const std::vector<std::size_t>& a,
                                   const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

std::string describe(const std::vector<std::size_t>& s) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < s.size(); ++k) os << (k ? "," : "") << s[k];
  os << "}";
  return os.str();
}

}  // namespace

std::vector<std::vector<std::size_t>> LpClusterFamilies::kept(
    std::size_t t) const {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& c : levels[t]) {
    if (c.kept) out.push_back(c.members);
  }
  return out;
}

LpClusterFamilies LpClusterFamilies::from_sets(
    std::size_t n, std::vector<std::vector<std::vector<std::size_t>>> sets) {
  LpClusterFamilies f;
  f.n = n;
  f.levels.resize(sets.size());
  for (std::size_t t = 0; t < sets.size(); ++t) {
    std::vector<char> used(n, 0);
    for (auto& s : sets[t]) {
      std::sort(s.begin(), s.end());
      if (s.empty() || std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw DataError("LP-cluster families: clusters must be nonempty sets");
      }
      for (std::size_t i : s) {
        if (i >= n || used[i]) {
          throw DataError(
              "LP-cluster families: clusters of a level must be disjoint");
        }
        used[i] = 1;
      }
      f.levels[t].push_back(LpCluster{t, s, s, true});
    }
  }
  return f;
}

LpClusterFamilies lp_cleaning(std::span<const Partition> q,
                              const LpSolution& x,
                              const CleaningThresholds& th) {
  if (q.size() != x.num_levels()) {
    throw DataError("lp_cleaning: partition and LP level counts differ");
  }
  LpClusterFamilies out;
  out.n = q.empty() ? 0 : q.front().universe_size();
  out.levels.resize(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) {
    const Partition& p = q[t];
    const PairMatrix& xt = x.x[t];
    if (xt.size() != out.n || p.universe_size() != out.n) {
      throw DataError("lp_cleaning: universe sizes differ");
    }
    for (const auto& input : p.parts()) {
      const double size = static_cast<double>(input.size());
      LpCluster c;
      c.level = t;
      c.input = input;
      for (std::size_t i : input) {
        std::size_t inner = 0;
        for (std::size_t j : input) inner += xt(i, j) < th.inner_radius;
        std::size_t outside = 0;
        for (std::size_t j = 0; j < out.n; ++j) {
          if (!p.same_part(i, j) && xt(i, j) < th.outer_radius) ++outside;
        }
        if (static_cast<double>(inner) > 0.5 * size &&
            static_cast<double>(outside) <= th.outside_fraction * size) {
          c.members.push_back(i);
        }
      }
      c.kept = static_cast<double>(c.members.size()) >= th.keep_fraction * size;
      out.levels[t].push_back(std::move(c));
    }
  }
  return out;
}

bool check_hierarchy_friendly(const LpClusterFamilies& l) {
  for (std::size_t lo = 0; lo < l.num_levels(); ++lo) {
    for (const auto& low : l.kept(lo)) {
      for (std::size_t hi = lo + 1; hi < l.num_levels(); ++hi) {
        std::size_t hits = 0;
        for (const auto& high : l.kept(hi)) hits += intersects(low, high);
        if (hits > 1) return false;
      }
    }
  }
  return true;
}

std::vector<std::size_t> ClusterForest::roots() const {
  std::vector<std::size_t> r;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (!nodes[v].parent) r.push_back(v);
  }
  return r;
}

std::vector<std::size_t> ClusterForest::descendant_leaves(
    std::size_t node) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (v < n) out.push_back(v);
    for (std::size_t c : nodes[v].children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DerivedHierarchy derive_hierarchy(const LpClusterFamilies& l,
                                  ClusterOrder order) {
  if (!check_hierarchy_friendly(l)) {
    throw DataError("derive_hierarchy: LP-cluster families are not "
                    "hierarchy-friendly");
  }
  const std::size_t n = l.n;
  ClusterForest f;
  f.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    ForestNode leaf;
    leaf.core = {i};
    leaf.extended = {i};
    f.nodes.push_back(std::move(leaf));
  }
  std::vector<std::size_t> roots(n);
  std::iota(roots.begin(), roots.end(), std::size_t{0});

  std::vector<Partition> levels;
  for (std::size_t t = 0; t < l.num_levels(); ++t) {
    std::vector<const LpCluster*> clusters;
    for (const auto& c : l.levels[t]) {
      if (c.kept && !c.members.empty()) clusters.push_back(&c);
    }
    if (order == ClusterOrder::kSorted) {
      std::stable_sort(clusters.begin(), clusters.end(),
                       [](const LpCluster* a, const LpCluster* b) {
                         if (a->members.size() != b->members.size()) {
                           return a->members.size() > b->members.size();
                         }
                         return a->members.front() < b->members.front();
                       });
    }
    for (const LpCluster* c : clusters) {
      // A root's extended cluster never meets the core of another root, so
      // removing one disjoint root cannot change which roots meet C(u).
      std::vector<std::size_t> core = c->members;
      for (std::size_t v : roots) {
        if (!intersects(f.nodes[v].core, c->members)) {
          core = set_minus(core, f.nodes[v].extended);
        }
      }
      if (core.empty()) continue;
      const std::size_t u = f.nodes.size();
      ForestNode node;
      node.level = t + 1;
      node.core = core;
      node.extended = core;
      node.lp_cluster = c->members;
      node.input_cluster = c->input;
      std::vector<std::size_t> next_roots;
      for (std::size_t v : roots) {
        if (intersects(f.nodes[v].core, core)) {
          node.extended = set_union(node.extended, f.nodes[v].extended);
          node.children.push_back(v);
          f.nodes[v].parent = u;
        } else {
          next_roots.push_back(v);
        }
      }
      next_roots.push_back(u);
      roots = std::move(next_roots);
      f.nodes.push_back(std::move(node));
    }
    std::vector<std::vector<std::size_t>> parts;
    for (std::size_t v : roots) parts.push_back(f.nodes[v].extended);
    levels.emplace_back(n, std::move(parts));
  }
  return DerivedHierarchy{HierarchySequence(std::move(levels)), std::move(f)};
}

double hierarchy_cost(const HccInstance& inst, const HierarchySequence& p) {
  if (p.num_levels() != inst.num_levels() || p.universe_size() != inst.n) {
    throw DataError("hierarchy_cost: hierarchy does not match the instance");
  }
  double cost = 0.0;
  for (std::size_t t = 0; t < inst.num_levels(); ++t) {
    cost += inst.deltas[t] * static_cast<double>(sym_diff_size(
                                 inst.edge_sets[t], clique_edges(p.level(t))));
  }
  return cost;
}

HcaRun fit_hca(std::span<const Partition> q, std::vector<double> deltas,
               const HcaOptions& options) {
  HcaRun run;
  run.instance = HccInstance::from_partitions(q, std::move(deltas));
  const HccLp lp = build_lp(run.instance);
  run.x = solve_lp(lp, options.lp);
  if (options.dump_lp) {
    std::vector<std::string> labels = options.labels;
    if (labels.size() != run.instance.n) labels = index_labels(run.instance.n);
    run.lp_dump = dump_lp(lp, labels, &run.x);
  }
  run.families = lp_cleaning(q, run.x, options.thresholds);
  DerivedHierarchy d = derive_hierarchy(run.families, options.order);
  run.hierarchy = std::move(d.hierarchy);
  run.forest = std::move(d.forest);
  run.cost = hierarchy_cost(run.instance, run.hierarchy);
  return run;
}

std::vector<std::string> audit_hca(const HcaRun& run, double tol) {
  std::vector<std::string> bad;
  const ClusterForest& f = run.forest;
  const std::size_t levels = run.x.num_levels();
  if (!check_hierarchy_friendly(run.families)) {
    bad.push_back("cleaned families are not hierarchy-friendly");
  }
  std::vector<std::vector<std::size_t>> root_parts;
  for (std::size_t u = 0; u < f.nodes.size(); ++u) {
    const ForestNode& node = f.nodes[u];
    const std::string tag = "node " + std::to_string(u) + ": ";
    if (f.descendant_leaves(u) != node.extended) {
      bad.push_back(tag + "extended cluster is not its descendant leaves");
    }
    if (!std::includes(node.extended.begin(), node.extended.end(),
                       node.core.begin(), node.core.end())) {
      bad.push_back(tag + "core not inside extended cluster");
    }
    for (std::size_t c : node.children) {
      if (f.nodes[c].parent != u) bad.push_back(tag + "broken child link");
    }
    if (!node.parent) root_parts.push_back(node.extended);
    if (u < f.n) continue;

    if (!std::includes(node.lp_cluster.begin(), node.lp_cluster.end(),
                       node.core.begin(), node.core.end()) ||
        !std::includes(node.input_cluster.begin(), node.input_cluster.end(),
                       node.lp_cluster.begin(), node.lp_cluster.end())) {
      bad.push_back(tag + "core, LP-cluster, input cluster not nested");
    }
    const auto plus = set_minus(node.extended, node.core);
    const auto minus = set_minus(node.lp_cluster, node.core);
    const double core = static_cast<double>(node.core.size());
    if (static_cast<double>(plus.size()) > 0.3 * core) {
      bad.push_back(tag + "extension " + describe(plus) +
                    " exceeds 0.3 |core|");
    }
    if (!(static_cast<double>(minus.size()) < 0.1 * core)) {
      bad.push_back(tag + "removal " + describe(minus) +
                    " not below 0.1 |core|");
    }
    if (intersects(plus, minus)) {
      bad.push_back(tag + "removal and extension intersect");
    }
    for (std::size_t t = node.level - 1; t < levels; ++t) {
      for (std::size_t a : node.lp_cluster) {
        for (std::size_t b : node.lp_cluster) {
          if (a < b && !(run.x(t, a, b) < 0.2 + tol)) {
            bad.push_back(tag + "LP diameter not below 0.2 at level " +
                          std::to_string(t + 1));
          }
        }
      }
    }
  }
  std::vector<std::size_t> covered;
  for (const auto& p : root_parts) covered.insert(covered.end(), p.begin(), p.end());
  std::sort(covered.begin(), covered.end());
  std::vector<std::size_t> all(f.n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (covered != all) bad.push_back("root extended clusters do not partition");

  for (std::size_t t = 0; t < run.families.num_levels(); ++t) {
    const double delta = run.instance.deltas[t];
    for (const auto& c : run.families.levels[t]) {
      const double bound = 0.02 * delta * static_cast<double>(c.input.size());
      for (std::size_t i : set_minus(c.input, c.members)) {
        const double cost = species_cost(run.instance, run.x, t, i);
        if (cost < bound - tol * delta) {
          bad.push_back("species " + std::to_string(i) + " removed at level " +
                        std::to_string(t + 1) + " with LP cost below bound");
        }
      }
    }
  }
  return bad;
}

}  // namespace treefit
