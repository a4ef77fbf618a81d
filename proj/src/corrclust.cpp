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

#include "treefit/corrclust.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "treefit/error.hpp"
#include "treefit/oracle.hpp"

namespace treefit {

std::size_t corr_cluster_cost(const EdgeSet& e, const Partition& p) {
  if (e.universe_size() != p.universe_size()) {
    throw DataError("corr_cluster_cost: edge set and partition differ in size");
  }
  const std::size_t n = e.universe_size();
  std::size_t cost = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      cost += e.contains(i, j) != p.same_part(i, j);
    }
  }
  return cost;
}

CorrClustResult kwik_cluster(const EdgeSet& e,
                             const std::vector<std::size_t>& pivot_order) {
  const std::size_t n = e.universe_size();
  std::vector<std::size_t> block(n, n);
  CorrClustResult out;
  std::size_t next_block = 0;
  for (std::size_t pivot : pivot_order) {
    if (pivot >= n) throw DataError("kwik_cluster: pivot out of range");
    if (block[pivot] != n) continue;
    PivotStep step;
    step.pivot = pivot;
    for (std::size_t j = 0; j < n; ++j) {
      if (block[j] == n && (j == pivot || e.contains(pivot, j))) {
        block[j] = next_block;
        step.members.push_back(j);
      }
    }
    ++next_block;
    out.trace.push_back(std::move(step));
  }
  if (std::find(block.begin(), block.end(), n) != block.end()) {
    throw DataError("kwik_cluster: pivot order does not cover the universe");
  }
  out.partition = Partition::from_assignment(block);
  out.cost = corr_cluster_cost(e, out.partition);
  return out;
}

CorrClustResult corr_cluster(const EdgeSet& e, CorrClustStrategy strategy,
                             std::uint64_t seed) {
  const std::size_t n = e.universe_size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  switch (strategy) {
    case CorrClustStrategy::kExact: {
      auto [p, cost] = exact_corr_cluster(e);
      return CorrClustResult{std::move(p), cost, {}};
    }
    case CorrClustStrategy::kRandomPivot: {
      std::mt19937_64 rng(seed);
      std::shuffle(order.begin(), order.end(), rng);
      return kwik_cluster(e, order);
    }
    case CorrClustStrategy::kPivotSweep:
      break;
  }
  if (n == 0) return kwik_cluster(e, order);
  CorrClustResult best;
  bool have = false;
  std::vector<std::size_t> run(n);
  for (std::size_t first = 0; first < n; ++first) {
    run[0] = first;
    std::size_t k = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != first) run[k++] = j;
    }
    CorrClustResult r = kwik_cluster(e, run);
    if (!have || r.cost < best.cost) {
      best = std::move(r);
      have = true;
      if (best.cost == 0) break;
    }
  }
  return best;
}

}  // namespace treefit
