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
#include "treefit/hca.hpp"
#include "treefit/hcc.hpp"
#include "treefit/ultrafit.hpp"

using namespace treefit;

TEST_CASE("nested clique sets are reproduced") {
  const std::vector<Partition> p{Partition(5, {{0, 1}, {2}, {3}, {4}}),
                                 Partition(5, {{0, 1, 2}, {3, 4}})};
  const auto inst = HccInstance::from_partitions(p, {2.0, 1.0});
  const auto run = fit_hcc(inst);
  CHECK(run.cost == 0.0);
  CHECK(run.hierarchy.levels() == p);
  REQUIRE(run.lp_lower_bound.has_value());
  CHECK(*run.lp_lower_bound == 0.0);
}

TEST_CASE("single level costs at least the clustering optimum") {
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 3 + rep % 6;
    HccInstance inst;
    inst.n = n;
    inst.deltas = {1.0};
    inst.edge_sets = {testlib::random_edges(n, 0.5, rng)};
    const auto run = fit_hcc(inst);
    const double opt =
        static_cast<double>(testlib::brute_corr_cluster(inst.edge_sets[0]));
    CHECK(run.cost >= opt);
    CHECK(*run.lp_lower_bound <= opt + 1e-9);
  }
}

TEST_CASE("reduction of a two-value matrix") {
  PairMatrix d(3);
  d.set(0, 1, 1.0);
  d.set(0, 2, 2.0);
  d.set(1, 2, 2.0);
  const auto red = hcc_instance_from_distances(DistanceMatrix({"1", "2", "3"}, d));
  REQUIRE(red.instance.has_value());
  const auto run = fit_hcc(*red.instance);
  CHECK(run.cost == 0.0);
  CHECK(run.hierarchy.level(0) == Partition(3, {{0, 1}, {2}}));
}

TEST_CASE("sandwich on random small instances") {
  std::mt19937_64 rng(67);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 3 + rep % 3;
    HccInstance inst;
    inst.n = n;
    for (int t = 0; t < 1 + rep % 3; ++t) {
      inst.deltas.push_back(1.0 + static_cast<double>(t));
      inst.edge_sets.push_back(testlib::random_edges(n, 0.4, rng));
    }
    HccOptions o;
    o.seed = static_cast<std::uint64_t>(rep);
    const auto run = fit_hcc(inst, o);
    const double opt = testlib::brute_hierarchy_opt(inst);
    CHECK(*run.lp_lower_bound <= opt + 1e-9);
    CHECK(opt <= run.cost + 1e-9);
    CHECK(run.cost == doctest::Approx(hierarchy_cost(inst, run.hierarchy)));
  }
}

TEST_CASE("runs are deterministic") {
  std::mt19937_64 rng(71);
  HccInstance inst;
  inst.n = 7;
  inst.deltas = {1.0, 1.0};
  inst.edge_sets = {testlib::random_edges(7, 0.3, rng),
                    testlib::random_edges(7, 0.6, rng)};
  const auto a = fit_hcc(inst);
  const auto b = fit_hcc(inst);
  CHECK(a.hierarchy == b.hierarchy);
  CHECK(a.cost == b.cost);
}
