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

#include "treefit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treefit/error.hpp"
#include "treefit/ultrafit.hpp"

namespace treefit {

namespace {

void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap) {
    throw DataError(std::string(what) + ": at most " + std::to_string(cap) +
                    " elements supported, got " + std::to_string(n));
  }
}

// Number of disagreements between `e` and the partition with block ids `b`.
std::size_t disagreements(const EdgeSet& e, std::span<const std::size_t> b) {
  const std::size_t n = b.size();
  std::size_t cost = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      cost += e.contains(i, j) != (b[i] == b[j]);
    }
  }
  return cost;
}

// True iff the partition with block ids `fine` refines the one with `coarse`.
bool refines(const std::vector<std::size_t>& fine,
             const std::vector<std::size_t>& coarse) {
  std::vector<std::size_t> image(fine.size(), fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    std::size_t& m = image[fine[i]];
    if (m == fine.size()) {
      m = coarse[i];
    } else if (m != coarse[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::pair<Partition, std::size_t> exact_corr_cluster(const EdgeSet& e) {
  check_cap(e.universe_size(), kOracleCorrClustCap, "exact_corr_cluster");
  std::vector<std::size_t> best;
  std::size_t best_cost = std::numeric_limits<std::size_t>::max();
  for_each_partition(e.universe_size(), [&](std::span<const std::size_t> rgs) {
    const std::size_t c = disagreements(e, rgs);
    if (c < best_cost) {
      best_cost = c;
      best.assign(rgs.begin(), rgs.end());
    }
  });
  return {Partition::from_assignment(best), best_cost};
}

std::pair<HierarchySequence, double> exact_hcc(const HccInstance& inst) {
  inst.validate();
  check_cap(inst.n, kOracleUltrametricCap, "exact_hcc");
  std::vector<std::vector<std::size_t>> parts;
  for_each_partition(inst.n, [&](std::span<const std::size_t> rgs) {
    parts.emplace_back(rgs.begin(), rgs.end());
  });
  const std::size_t m = parts.size();
  // finer[b] lists every partition that refines partition b.
  std::vector<std::vector<std::size_t>> finer(m);
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      if (refines(parts[a], parts[b])) finer[b].push_back(a);
    }
  }
  const std::size_t levels = inst.num_levels();
  std::vector<std::vector<double>> best(levels, std::vector<double>(m));
  std::vector<std::vector<std::size_t>> from(levels,
                                             std::vector<std::size_t>(m, 0));
  for (std::size_t t = 0; t < levels; ++t) {
    for (std::size_t b = 0; b < m; ++b) {
      const double own =
          inst.deltas[t] *
          static_cast<double>(disagreements(inst.edge_sets[t], parts[b]));
      if (t == 0) {
        best[t][b] = own;
        continue;
      }
      double low = std::numeric_limits<double>::infinity();
      for (std::size_t a : finer[b]) {
        if (best[t - 1][a] < low) {
          low = best[t - 1][a];
          from[t][b] = a;
        }
      }
      best[t][b] = own + low;
    }
  }
  std::size_t end = 0;
  for (std::size_t b = 1; b < m; ++b) {
    if (best[levels - 1][b] < best[levels - 1][end]) end = b;
  }
  std::vector<Partition> chain(levels);
  std::size_t cur = end;
  for (std::size_t t = levels; t-- > 0;) {
    chain[t] = Partition::from_assignment(parts[cur]);
    cur = from[t][cur];
  }
  return {HierarchySequence(std::move(chain)), best[levels - 1][end]};
}

std::pair<HierarchySequence, double> exact_hca(std::span<const Partition> q,
                                               std::vector<double> deltas) {
  if (!q.empty()) check_cap(q.front().universe_size(), kOracleHcaCap, "exact_hca");
  if (q.size() > kOracleHcaLevelCap) {
    throw DataError("exact_hca: at most " + std::to_string(kOracleHcaLevelCap) +
                    " levels supported, got " + std::to_string(q.size()));
  }
  return exact_hcc(HccInstance::from_partitions(q, std::move(deltas)));
}

std::pair<UltrametricTree, double> exact_ultrametric_l1(
    const DistanceMatrix& d) {
  check_cap(d.size(), kOracleUltrametricCap, "exact_ultrametric_l1");
  if (d.size() == 0) throw DataError("exact_ultrametric_l1: no labels");
  if (d.size() == 1) {
    return {UltrametricTree(d.labels(), {UltrametricTree::Node{0.0, 0, {}}}, 0),
            0.0};
  }
  const UltrametricReduction r = hcc_instance_from_distances(d);
  HierarchySequence p;
  if (r.instance) p = exact_hcc(*r.instance).first;
  UltrametricTree tree = hierarchy_to_ultrametric(p, r.levels, d.labels());
  const double cost = lp_norm_error(tree, d, 1.0);
  return {std::move(tree), cost};
}

UltrametricTree flatten_to_12(const UltrametricTree& u,
                              const DistanceMatrix& d) {
  constexpr double kTol = 1e-9;
  for (double v : d.pairs().values()) {
    if (std::abs(v - 1.0) > kTol && std::abs(v - 2.0) > kTol) {
      throw DataError("flatten_to_12: input distances must be 1 or 2");
    }
  }
  const std::size_t n = d.size();
  PairMatrix clipped =
      distances_in_label_order(u.distances(), u.labels(), d.labels());
  for (double& v : clipped.values()) v = std::clamp(v, 1.0, 2.0);
  if (n < 2) return UltrametricTree::from_distances(d.labels(), clipped);
  const UltrametricTree base = UltrametricTree::from_distances(d.labels(),
                                                               clipped);

  struct Work {
    double height;
    int leaf;
    std::vector<std::size_t> children;
    std::size_t parent;
    bool alive;
  };
  const std::size_t none = base.nodes().size();
  std::vector<Work> w;
  for (const auto& node : base.nodes()) {
    w.push_back(Work{node.height, node.leaf, node.children, none, true});
  }
  for (std::size_t v = 0; v < w.size(); ++v) {
    for (std::size_t c : w[v].children) w[c].parent = v;
  }
  auto leaves_below = [&](std::size_t v) {
    std::vector<std::size_t> out;
    std::vector<std::size_t> stack{v};
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      if (w[x].leaf >= 0) out.push_back(static_cast<std::size_t>(w[x].leaf));
      for (std::size_t c : w[x].children) stack.push_back(c);
    }
    return out;
  };
  auto in_gap = [&](double h) { return h > 0.5 + kTol && h < 1.0 - kTol; };

  for (;;) {
    std::size_t pick = none;
    for (std::size_t v = 0; v < w.size(); ++v) {
      if (!w[v].alive || w[v].leaf >= 0 || !in_gap(w[v].height)) continue;
      if (pick == none || w[v].height < w[pick].height) pick = v;
    }
    if (pick == none) break;
    Work& node = w[pick];
    std::size_t x1 = 0, x2 = 0;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t c : node.children) groups.push_back(leaves_below(c));
    for (std::size_t a = 0; a < groups.size(); ++a) {
      for (std::size_t b = a + 1; b < groups.size(); ++b) {
        for (std::size_t i : groups[a]) {
          for (std::size_t j : groups[b]) {
            if (d(i, j) < 1.5) {
              ++x1;
            } else {
              ++x2;
            }
          }
        }
      }
    }
    if (x2 >= x1) {
      if (node.parent == none) {
        node.height = 1.0;
      } else {
        Work& parent = w[node.parent];
        parent.children.erase(std::find(parent.children.begin(),
                                        parent.children.end(), pick));
        for (std::size_t c : node.children) {
          parent.children.push_back(c);
          w[c].parent = node.parent;
        }
        node.children.clear();
        node.alive = false;
      }
      continue;
    }
    double lowered = 0.5;
    for (std::size_t c : node.children) {
      if (w[c].leaf < 0) lowered = std::max(lowered, w[c].height);
    }
    node.height = lowered;
    std::vector<std::size_t> kids;
    for (std::size_t c : node.children) {
      if (w[c].leaf < 0 && std::abs(w[c].height - lowered) <= kTol) {
        for (std::size_t g : w[c].children) {
          kids.push_back(g);
          w[g].parent = pick;
        }
        w[c].children.clear();
        w[c].alive = false;
      } else {
        kids.push_back(c);
      }
    }
    node.children = std::move(kids);
  }

  std::size_t root = base.root();
  std::vector<UltrametricTree::Node> out;
  std::vector<std::size_t> id(w.size(), none);
  for (std::size_t v = 0; v < w.size(); ++v) {
    if (!w[v].alive) continue;
    id[v] = out.size();
    out.push_back(UltrametricTree::Node{w[v].height, w[v].leaf, {}});
  }
  for (std::size_t v = 0; v < w.size(); ++v) {
    if (!w[v].alive) continue;
    for (std::size_t c : w[v].children) out[id[v]].children.push_back(id[c]);
  }
  return UltrametricTree(d.labels(), std::move(out), id[root]);
}

}  // namespace treefit
