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

#include "treefit/tree_metric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "treefit/error.hpp"

namespace treefit {

RestrictedInstance gromov_transform(const DistanceMatrix& d,
                                    std::size_t pivot) {
  const std::size_t n = d.size();
  if (pivot >= n) throw DataError("gromov_transform: pivot out of range");
  RestrictedInstance r;
  r.pivot = pivot;
  r.h.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.h[i] = d(pivot, i);
  const double m = *std::max_element(r.h.begin(), r.h.end());
  r.gamma = m;
  r.beta.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.beta[i] = m - r.h[i];
  PairMatrix u(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (i == pivot || j == pivot) {
        u.set(i, j, m);
      } else {
        u.set(i, j, m - 0.5 * (r.h[i] + r.h[j] - d(i, j)));
      }
    }
  }
  r.transformed = DistanceMatrix(d.labels(), std::move(u));
  return r;
}

namespace {

double squeeze_value(double v, const RestrictedInstance& r, std::size_t i,
                     std::size_t j) {
  return std::min(r.gamma, std::max({v, r.beta[i], r.beta[j]}));
}

}  // namespace

DistanceMatrix squeeze(const DistanceMatrix& d_in,
                       const RestrictedInstance& r) {
  if (d_in.size() != r.beta.size()) {
    throw DataError("squeeze: matrix and restriction differ in size");
  }
  const std::size_t n = d_in.size();
  PairMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.set(i, j, squeeze_value(d_in(i, j), r, i, j));
    }
  }
  return DistanceMatrix(d_in.labels(), std::move(out));
}

PairMatrix clamp_to_restricted(const PairMatrix& u,
                               const RestrictedInstance& r) {
  if (u.size() != r.beta.size()) {
    throw DataError("clamp_to_restricted: matrix and restriction differ");
  }
  const std::size_t n = u.size();
  PairMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.set(i, j, squeeze_value(u(i, j), r, i, j));
    }
  }
  return out;
}

WeightedTree restricted_to_tree(const PairMatrix& u,
                                const RestrictedInstance& r,
                                const std::vector<std::string>& labels,
                                double tol) {
  const std::size_t n = labels.size();
  if (u.size() != n || r.beta.size() != n) {
    throw DataError("restricted_to_tree: sizes differ");
  }
  const double scale = std::max(1.0, r.gamma);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = u(i, j);
      const bool pivot_pair = i == r.pivot || j == r.pivot;
      if ((pivot_pair && std::abs(v - r.gamma) > tol * scale) ||
          v > r.gamma + tol * scale ||
          v < std::max(r.beta[i], r.beta[j]) - tol * scale) {
        throw DataError("restricted_to_tree: ultrametric violates the "
                        "restriction at (" + labels[i] + ", " + labels[j] +
                        ")");
      }
    }
  }
  if (n == 1) return WeightedTree(labels, 1, {}, {0});

  const UltrametricTree ut = UltrametricTree::from_distances(labels, u, tol);
  const auto& nodes = ut.nodes();
  std::vector<WeightedTree::Edge> edges;
  std::vector<std::size_t> node_of_label(n);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    for (std::size_t c : nodes[v].children) {
      double w = 2.0 * (nodes[v].height - nodes[c].height);
      if (nodes[c].leaf >= 0) {
        const auto label = static_cast<std::size_t>(nodes[c].leaf);
        w = 2.0 * nodes[v].height - r.beta[label];
        node_of_label[label] = c;
      }
      if (std::abs(w) <= tol * scale) w = 0.0;
      if (w < 0.0) {
        throw DataError("restricted_to_tree: negative edge weight");
      }
      edges.push_back(WeightedTree::Edge{v, c, w});
    }
  }
  return WeightedTree(labels, nodes.size(), std::move(edges),
                      std::move(node_of_label));
}

WeightedTree pseudometric_to_metric(const WeightedTree& t,
                                    const DistanceMatrix& d, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DataError("pseudometric_to_metric: alpha must lie in (0, 1]");
  }
  const std::size_t n = t.size();
  if (d.size() != n) throw DataError("pseudometric_to_metric: size mismatch");
  const PairMatrix fitted = distances_in_label_order(t.distances(), t.labels(),
                                                     d.labels());
  double d_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fitted.values().size(); ++k) {
    const double dev = std::abs(fitted.values()[k] - d.pairs().values()[k]);
    if (dev > 0.0) d_min = std::min(d_min, dev);
  }

  // Contract zero-weight edges.
  std::vector<std::size_t> uf(t.num_nodes());
  std::iota(uf.begin(), uf.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& e : t.edges()) {
    if (e.weight == 0.0) uf[find(e.a)] = find(e.b);
  }
  std::vector<std::size_t> new_id(t.num_nodes(), t.num_nodes());
  std::size_t count = 0;
  for (std::size_t v = 0; v < t.num_nodes(); ++v) {
    const std::size_t r = find(v);
    if (new_id[r] == t.num_nodes()) new_id[r] = count++;
    new_id[v] = new_id[r];
  }
  std::vector<WeightedTree::Edge> edges;
  for (const auto& e : t.edges()) {
    if (e.weight > 0.0) edges.push_back({new_id[e.a], new_id[e.b], e.weight});
  }
  std::vector<std::size_t> at(n);
  std::vector<std::size_t> labels_here(count, 0);
  for (std::size_t i = 0; i < n; ++i) {
    at[i] = new_id[t.node_of_label(i)];
    ++labels_here[at[i]];
  }
  // Coinciding labels imply a nonzero deviation, so d_min is finite here.
  const double eps = alpha * d_min / (8.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_here[at[i]] > 1 && std::isfinite(eps)) {
      edges.push_back({at[i], count, eps});
      at[i] = count++;
    }
  }
  return WeightedTree(t.labels(), count, std::move(edges), std::move(at));
}

namespace {

TreeCandidate fit_pivot(const DistanceMatrix& d, std::size_t pivot,
                        const TreeFitOptions& options) {
  TreeCandidate c;
  c.pivot = pivot;
  c.restricted = gromov_transform(d, pivot);
  c.squeezed = squeeze(c.restricted.transformed, c.restricted);
  const FittedTree ultra = fit_ultrametric(c.squeezed, options.ultrametric);
  c.fitted = distances_in_label_order(ultra.distances(), ultra.labels(),
                                      d.labels());
  c.clamped = clamp_to_restricted(c.fitted, c.restricted);
  c.tree = restricted_to_tree(c.clamped, c.restricted, d.labels());
  c.l1_error = lp_norm_error(c.tree, d, 1.0);
  c.lp_lower_bound = ultra.lp_lower_bound;
  c.num_levels = ultra.num_levels;
  c.lp_dump = ultra.lp_dump;
  return c;
}

}  // namespace

TreeFit fit_tree_metric_detailed(const DistanceMatrix& d,
                                 const TreeFitOptions& options) {
  const std::size_t n = d.size();
  if (n == 0) throw DataError("fit_tree_metric: empty distance matrix");
  TreeFit out;
  out.fitted.mode = FitMode::kTreeMetric;
  if (n == 1) {
    out.fitted.tree = WeightedTree(d.labels(), 1, {}, {0});
    return out;
  }
  std::vector<std::size_t> pivots;
  if (options.pivot) {
    if (*options.pivot >= n) throw DataError("fit_tree_metric: bad pivot");
    pivots.push_back(*options.pivot);
  } else {
    pivots.resize(n);
    std::iota(pivots.begin(), pivots.end(), std::size_t{0});
  }

  out.candidates.resize(pivots.size());
  std::vector<std::exception_ptr> errors(pivots.size());
  std::size_t workers = options.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, pivots.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < pivots.size(); k = next++) {
      try {
        out.candidates[k] = fit_pivot(d, pivots[k], options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t k = 1; k < out.candidates.size(); ++k) {
    if (out.candidates[k].l1_error < out.candidates[out.best].l1_error) {
      out.best = k;
    }
  }
  const TreeCandidate& best = out.candidates[out.best];
  const WeightedTree tree = pseudometric_to_metric(
      best.tree, d, 1.0 / static_cast<double>(n));
  out.fitted.l1_error = lp_norm_error(tree, d, 1.0);
  out.fitted.num_levels = best.num_levels;
  out.fitted.lp_dump = best.lp_dump;
  out.fitted.tree = tree;
  return out;
}

FittedTree fit_tree_metric(const DistanceMatrix& d,
                           const TreeFitOptions& options) {
  return fit_tree_metric_detailed(d, options).fitted;
}

}  // namespace treefit
