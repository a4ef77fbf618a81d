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
#include "treefit/core.hpp"
#include "treefit/error.hpp"
#include "treefit/trees.hpp"

using namespace treefit;

namespace {

PairMatrix matrix3(double ab, double ac, double bc) {
  PairMatrix m(3);
  m.set(0, 1, ab);
  m.set(0, 2, ac);
  m.set(1, 2, bc);
  return m;
}

}  // namespace

TEST_CASE("pair indexing round trips") {
  for (std::size_t n = 2; n < 9; ++n) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        CHECK(pair_index(n, i, j) == k);
        CHECK(pair_from_index(n, k) == std::pair{i, j});
      }
    }
    CHECK(k == num_pairs(n));
  }
}

TEST_CASE("clique edges of small partitions") {
  CHECK(clique_edges(Partition(3, {{0, 1}, {2}})) == EdgeSet(3, {{0, 1}}));
  CHECK(clique_edges(Partition::singletons(3)).count() == 0);
  CHECK(clique_edges(Partition::whole(3)) == EdgeSet(3, {{0, 1}, {0, 2}, {1, 2}}));

  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = testlib::random_partition(9, 4, rng);
    std::size_t expected = 0;
    for (const auto& part : p.parts()) expected += num_pairs(part.size());
    CHECK(clique_edges(p).count() == expected);
  }
}

TEST_CASE("symmetric difference sizes") {
  const EdgeSet a(3, {{0, 1}, {1, 2}});
  CHECK(sym_diff_size(a, a) == 0);
  CHECK(sym_diff_size(EdgeSet(3, {{0, 1}}), EdgeSet(3)) == 1);
  CHECK(sym_diff_size(a, EdgeSet(3, {{1, 2}, {0, 2}})) == 2);
  CHECK_THROWS_AS(sym_diff_size(EdgeSet(3), EdgeSet(4)), DataError);
}

TEST_CASE("partition validation and canonical form") {
  CHECK_THROWS_AS(Partition(3, {{0, 1}}), DataError);
  CHECK_THROWS_AS(Partition(3, {{0, 1}, {1, 2}}), DataError);
  CHECK_THROWS_AS(Partition(3, {{0, 1}, {}, {2}}), DataError);
  CHECK(Partition(4, {{3, 1}, {2, 0}}) == Partition(4, {{0, 2}, {1, 3}}));
  CHECK(Partition(3, {{0}, {1, 2}}).refines(Partition::whole(3)));
  CHECK_FALSE(Partition::whole(3).refines(Partition(3, {{0}, {1, 2}})));
}

TEST_CASE("partition enumeration matches brute force") {
  for (int n = 1; n <= 7; ++n) {
    const auto mine = all_partitions(static_cast<std::size_t>(n));
    const auto ref = testlib::brute_partitions(n);
    REQUIRE(mine.size() == ref.size());
    std::vector<Partition> refp;
    for (const auto& b : ref) refp.push_back(testlib::to_partition(b));
    for (const auto& p : mine) {
      CHECK(std::find(refp.begin(), refp.end(), p) != refp.end());
    }
  }
  CHECK(all_partitions(5).size() == 52);
}

TEST_CASE("hierarchy sequences enforce refinement") {
  const Partition fine(4, {{0, 1}, {2}, {3}});
  const Partition coarse(4, {{0, 1, 2}, {3}});
  CHECK_NOTHROW(HierarchySequence({fine, coarse}));
  CHECK_THROWS_AS(HierarchySequence({coarse, fine}), DataError);
  const std::vector<Partition> bad{Partition(4, {{0, 1}, {2, 3}}),
                                   Partition(4, {{0, 2}, {1, 3}})};
  CHECK_FALSE(is_hierarchical(bad));
}

TEST_CASE("strong triangle inequality") {
  CHECK(is_ultrametric(matrix3(1, 3, 3)));
  CHECK_FALSE(is_ultrametric(matrix3(1, 2, 3)));
  PairMatrix two(2);
  two.set(0, 1, 5.0);
  CHECK(is_ultrametric(two));
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    CHECK(is_ultrametric(testlib::random_ultrametric(7, 0.1, 2.0, rng)));
  }
}

TEST_CASE("L_p errors of small trees") {
  const auto u = UltrametricTree::from_distances({"1", "2", "3"}, matrix3(1, 3, 3));
  const DistanceMatrix d({"1", "2", "3"}, matrix3(1, 2, 3));
  CHECK(lp_norm_error(u, d, 1.0) == doctest::Approx(1.0));
  CHECK(lp_norm_error(u, d, kInfNorm) == doctest::Approx(1.0));
  CHECK(lp_norm_error(u, DistanceMatrix({"1", "2", "3"}, matrix3(1, 3, 3)), 1.0) ==
        0.0);
  PairMatrix a = matrix3(1, 1, 1), b = matrix3(2, 3, 1);
  CHECK(lp_norm_error(a, b, 2.0) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("distance matrices reject bad input") {
  CHECK_THROWS_AS(DistanceMatrix({"a", "b"}, PairMatrix(2, 0.0)), DataError);
  CHECK_THROWS_AS(DistanceMatrix({"a", "a"}, PairMatrix(2, 1.0)), DataError);
  CHECK_THROWS_AS(DistanceMatrix({"a", "b", "c"}, PairMatrix(2, 1.0)), DataError);
  const DistanceMatrix d({"a", "b", "c"}, matrix3(1, 2, 1 + 1e-14));
  CHECK(d.distinct_values().size() == 2);
  CHECK(d.index_of("c") == 2u);
  CHECK_FALSE(d.index_of("z").has_value());
}

TEST_CASE("weighted trees realize path lengths") {
  std::mt19937_64 rng(11);
  const auto t = testlib::random_tree(6, rng);
  CHECK(t.is_metric());
  const auto& dist = t.distances();
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      for (std::size_t k = 0; k < 6; ++k) {
        if (i == j || j == k || i == k) continue;
        CHECK(dist(i, k) <= dist(i, j) + dist(j, k) + 1e-12);
      }
    }
  }
}
