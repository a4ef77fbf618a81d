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

#include <random>

#include "doctest.h"
#include "support/testlib.hpp"
#include "treefit/corrclust.hpp"

using namespace treefit;

TEST_CASE("trivial graphs") {
  EdgeSet complete(4);
  for (std::size_t k = 0; k < num_pairs(4); ++k) complete.set_index(k, true);
  auto r = corr_cluster(complete);
  CHECK(r.partition == Partition::whole(4));
  CHECK(r.cost == 0);
  r = corr_cluster(EdgeSet(4));
  CHECK(r.partition == Partition::singletons(4));
  CHECK(r.cost == 0);
}

TEST_CASE("path on three vertices") {
  const EdgeSet path(3, {{0, 1}, {1, 2}});
  CHECK(testlib::brute_corr_cluster(path) == 1);
  for (auto s : {CorrClustStrategy::kPivotSweep, CorrClustStrategy::kRandomPivot,
                 CorrClustStrategy::kExact}) {
    CHECK(corr_cluster(path, s, 3).cost == 1);
  }
}

TEST_CASE("disagreement counting") {
  const EdgeSet e(3, {{0, 1}});
  CHECK(corr_cluster_cost(e, Partition(3, {{0, 1}, {2}})) == 0);
  CHECK(corr_cluster_cost(e, Partition::singletons(3)) == 1);
  EdgeSet k4(4);
  for (std::size_t k = 0; k < num_pairs(4); ++k) k4.set_index(k, true);
  k4.erase(2, 3);
  CHECK(corr_cluster_cost(k4, Partition::whole(4)) == 1);
}

TEST_CASE("KwikCluster follows the pivot order") {
  const EdgeSet e(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto r = kwik_cluster(e, {1, 0, 2, 3});
  CHECK(r.partition == Partition(4, {{0, 1, 2}, {3}}));
  REQUIRE(r.trace.size() == 2);
  CHECK(r.trace[0].pivot == 1);
  CHECK(r.trace[1].pivot == 3);
  CHECK(r.cost == corr_cluster_cost(e, r.partition));
}

TEST_CASE("strategies against brute force") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 80; ++rep) {
    const std::size_t n = 3 + rep % 6;
    const auto e = testlib::random_edges(n, 0.45, rng);
    const std::size_t opt = testlib::brute_corr_cluster(e);
    const auto exact = corr_cluster(e, CorrClustStrategy::kExact);
    CHECK(exact.cost == opt);
    CHECK(corr_cluster_cost(e, exact.partition) == opt);
    const auto sweep = corr_cluster(e);
    CHECK(sweep.cost >= opt);
    CHECK(sweep.cost == corr_cluster_cost(e, sweep.partition));
    const auto rnd = corr_cluster(e, CorrClustStrategy::kRandomPivot, rep);
    CHECK(rnd.cost >= opt);
  }
}

TEST_CASE("seeded runs are reproducible") {
  std::mt19937_64 rng(47);
  const auto e = testlib::random_edges(12, 0.5, rng);
  const auto a = corr_cluster(e, CorrClustStrategy::kRandomPivot, 99);
  const auto b = corr_cluster(e, CorrClustStrategy::kRandomPivot, 99);
  CHECK(a.partition == b.partition);
  CHECK(corr_cluster(e).partition == corr_cluster(e).partition);
}
