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

// Test-only helpers: random instance generators and brute-force reference
// solvers written independently of the library's own search code.

#ifndef TREEFIT_TESTS_SUPPORT_TESTLIB_HPP_
#define TREEFIT_TESTS_SUPPORT_TESTLIB_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "treefit/core.hpp"
#include "treefit/lp.hpp"
#include "treefit/trees.hpp"

namespace testlib {

using Blocks = std::vector<int>;  // block id per element

/// Every set partition of {0..n-1}, built by inserting elements one at a
/// time into an existing block or a new one.
inline std::vector<Blocks> brute_partitions(int n) {
  std::vector<Blocks> out;
  Blocks cur(static_cast<std::size_t>(n), -1);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      cur[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

inline bool brute_refines(const Blocks& fine, const Blocks& coarse) {
  for (std::size_t i = 0; i < fine.size(); ++i) {
    for (std::size_t j = i + 1; j < fine.size(); ++j) {
      if (fine[i] == fine[j] && coarse[i] != coarse[j]) return false;
    }
  }
  return true;
}

inline std::size_t brute_disagreements(const treefit::EdgeSet& e,
                                       const Blocks& b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      c += e.contains(i, j) != (b[i] == b[j]);
    }
  }
  return c;
}

inline std::size_t brute_corr_cluster(const treefit::EdgeSet& e) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& b : brute_partitions(static_cast<int>(e.universe_size()))) {
    best = std::min(best, brute_disagreements(e, b));
  }
  return best;
}

/// Calls fn(chain, cost) for every refinement chain of the instance.
inline void for_each_chain(
    const treefit::HccInstance& inst,
    const std::function<void(const std::vector<Blocks>&, double)>& fn) {
  const auto parts = brute_partitions(static_cast<int>(inst.n));
  std::vector<Blocks> chain;
  std::function<void(std::size_t, double)> rec = [&](std::size_t t,
                                                     double cost) {
    if (t == inst.num_levels()) {
      fn(chain, cost);
      return;
    }
    for (const auto& p : parts) {
      if (!chain.empty() && !brute_refines(chain.back(), p)) continue;
      chain.push_back(p);
      rec(t + 1, cost + inst.deltas[t] * static_cast<double>(
                                             brute_disagreements(
                                                 inst.edge_sets[t], p)));
      chain.pop_back();
    }
  };
  rec(0, 0.0);
}

inline double brute_hierarchy_opt(const treefit::HccInstance& inst) {
  double best = std::numeric_limits<double>::infinity();
  for_each_chain(inst, [&](const std::vector<Blocks>&, double c) {
    best = std::min(best, c);
  });
  return best;
}

/// L1 error of the best ultrametric among those using input distances only,
/// found by enumerating every chain directly.
inline double brute_ultrametric_l1(const treefit::DistanceMatrix& d) {
  std::vector<double> v = d.distinct_values();
  if (v.size() <= 1) return 0.0;
  const std::size_t n = d.size();
  double best = std::numeric_limits<double>::infinity();
  treefit::HccInstance inst;
  inst.n = n;
  for (std::size_t t = 0; t + 1 < v.size(); ++t) {
    inst.deltas.push_back(v[t + 1] - v[t]);
    inst.edge_sets.emplace_back(n);
  }
  for_each_chain(inst, [&](const std::vector<Blocks>& chain, double) {
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double u = v.back();
        for (std::size_t t = 0; t < chain.size(); ++t) {
          if (chain[t][i] == chain[t][j]) {
            u = v[t];
            break;
          }
        }
        err += std::abs(u - d(i, j));
      }
    }
    best = std::min(best, err);
  });
  return best;
}

inline treefit::Partition to_partition(const Blocks& b) {
  std::vector<std::size_t> a(b.begin(), b.end());
  return treefit::Partition::from_assignment(a);
}

/// Uniformly random block assignment with at most `max_blocks` blocks.
inline treefit::Partition random_partition(std::size_t n, std::size_t max_blocks,
                                           std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, max_blocks - 1);
  std::vector<std::size_t> a(n);
  for (auto& x : a) x = pick(rng);
  return treefit::Partition::from_assignment(a);
}

/// Random refinement chain: each level merges random groups of the previous
/// level's blocks.
inline std::vector<treefit::Partition> random_hierarchy(std::size_t n,
                                                        std::size_t levels,
                                                        std::mt19937_64& rng) {
  std::vector<treefit::Partition> out;
  std::vector<std::size_t> block(n);
  std::iota(block.begin(), block.end(), std::size_t{0});
  for (std::size_t t = 0; t < levels; ++t) {
    std::size_t blocks = *std::max_element(block.begin(), block.end()) + 1;
    std::uniform_int_distribution<std::size_t> pick(
        0, std::max<std::size_t>(1, blocks * 2 / 3) - 1);
    std::vector<std::size_t> merged(blocks);
    for (auto& m : merged) m = pick(rng);
    for (auto& b : block) b = merged[b];
    out.push_back(treefit::Partition::from_assignment(block));
    // Re-index to keep ids dense.
    const auto& p = out.back();
    for (std::size_t i = 0; i < n; ++i) block[i] = p.part_of(i);
  }
  return out;
}

inline std::vector<std::string> labels(std::size_t n, const std::string& p = "s") {
  std::vector<std::string> l;
  for (std::size_t i = 0; i < n; ++i) l.push_back(p + std::to_string(i));
  return l;
}

/// Ultrametric with exactly `levels` distinct distances: a random chain of
/// levels-1 partitions below the whole set, with distance values v[t] at
/// which pairs first merge.
inline treefit::DistanceMatrix planted_ultrametric(std::size_t n,
                                                   std::size_t levels,
                                                   std::mt19937_64& rng) {
  for (;;) {
    auto chain = random_hierarchy(n, levels - 1, rng);
    std::vector<double> v;
    double x = 0.0;
    std::uniform_int_distribution<int> step(1, 8);
    for (std::size_t t = 0; t < levels; ++t) {
      x += step(rng) * 0.25;
      v.push_back(x);
    }
    treefit::PairMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double u = v.back();
        for (std::size_t t = 0; t < chain.size(); ++t) {
          if (chain[t].same_part(i, j)) {
            u = v[t];
            break;
          }
        }
        d.set(i, j, u);
      }
    }
    treefit::DistanceMatrix m(labels(n), d);
    if (m.distinct_values().size() == levels) return m;
  }
}

/// Tree metric of a random tree whose leaves are the labels: leaves are
/// attached one at a time to the middle of a random existing edge. Edge
/// weights are multiples of 1/16 so all arithmetic is exact.
inline treefit::WeightedTree random_tree(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 48);
  auto weight = [&] { return w(rng) / 16.0; };
  std::vector<treefit::WeightedTree::Edge> edges;
  std::vector<std::size_t> node_of(n);
  std::size_t nodes = 0;
  if (n == 1) return treefit::WeightedTree(labels(1), 1, {}, {0});
  node_of[0] = nodes++;
  node_of[1] = nodes++;
  edges.push_back({node_of[0], node_of[1], weight()});
  for (std::size_t i = 2; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    const std::size_t e = pick(rng);
    const std::size_t mid = nodes++;
    const auto old = edges[e];
    edges[e] = {old.a, mid, weight()};
    edges.push_back({mid, old.b, weight()});
    node_of[i] = nodes++;
    edges.push_back({mid, node_of[i], weight()});
  }
  return treefit::WeightedTree(labels(n), nodes, edges, node_of);
}

inline treefit::DistanceMatrix tree_metric(std::size_t n, std::mt19937_64& rng) {
  const auto t = random_tree(n, rng);
  return treefit::DistanceMatrix(t.labels(), t.distances());
}

/// Random matrix with entries drawn from `values`.
inline treefit::DistanceMatrix random_matrix(std::size_t n,
                                             const std::vector<double>& values,
                                             std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  treefit::PairMatrix d(n);
  for (auto& x : d.values()) x = values[pick(rng)];
  return treefit::DistanceMatrix(labels(n), d);
}

inline treefit::EdgeSet random_edges(std::size_t n, double p,
                                     std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  treefit::EdgeSet e(n);
  for (std::size_t k = 0; k < treefit::num_pairs(n); ++k) e.set_index(k, coin(rng));
  return e;
}

/// Random ultrametric with heights drawn uniformly from (lo, hi).
inline treefit::PairMatrix random_ultrametric(std::size_t n, double lo,
                                              double hi,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  // Random merge order with increasing merge values.
  std::vector<double> merges(n > 0 ? n - 1 : 0);
  for (auto& m : merges) m = u(rng);
  std::sort(merges.begin(), merges.end());
  std::vector<std::size_t> block(n);
  std::iota(block.begin(), block.end(), std::size_t{0});
  treefit::PairMatrix d(n);
  for (double m : merges) {
    std::vector<std::size_t> ids(block);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t a = ids[0], b = ids[1];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if ((block[i] == a && block[j] == b) ||
            (block[i] == b && block[j] == a)) {
          d.set(i, j, m);
        }
      }
    }
    for (auto& x : block) {
      if (x == b) x = a;
    }
  }
  return d;
}

}  // namespace testlib

#endif  // TREEFIT_TESTS_SUPPORT_TESTLIB_HPP_
