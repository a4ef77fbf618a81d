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

#include "treefit/treefit.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treefit/corrclust.hpp"
#include "treefit/error.hpp"
#include "treefit/hca.hpp"
#include "treefit/io.hpp"
#include "treefit/oracle.hpp"
#include "treefit/tree_metric.hpp"
#include "treefit/ultrafit.hpp"

struct tf_matrix {
  treefit::DistanceMatrix d;
  std::vector<std::string> warnings;
};

struct tf_result {
  treefit::FittedTree fit;
  treefit::PairMatrix dist;  // in source-matrix label order
  std::string newick;
};

struct tf_clustering {
  std::vector<treefit::Partition> levels;
  double cost = 0.0;
  std::optional<double> algorithm_cost;
  std::optional<double> lp_bound;
};

namespace {

thread_local std::string g_last_error;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename F>
tf_status guarded(F&& f) {
  try {
    f();
    return TF_OK;
  } catch (const UsageError& e) {
    g_last_error = e.what();
    return TF_ERR_USAGE;
  } catch (const treefit::DataError& e) {
    g_last_error = e.what();
    return TF_ERR_DATA;
  } catch (const treefit::SolverError& e) {
    g_last_error = e.what();
    return TF_ERR_SOLVER;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TF_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw UsageError(what);
}

treefit::UltrametricFitOptions ultra_options(const tf_options& o) {
  treefit::UltrametricFitOptions u;
  u.hcc.strategy = static_cast<treefit::CorrClustStrategy>(o.corrclust_strategy);
  u.hcc.seed = o.seed;
  u.hcc.hca.lp.feas_tol = o.lp_tol > 0.0 ? o.lp_tol : 1e-7;
  u.dump_lp = o.dump_lp != 0;
  return u;
}

tf_options resolve(const tf_options* options) {
  tf_options o;
  tf_options_init(&o);
  if (options) o = *options;
  require(o.corrclust_strategy >= TF_CC_PIVOT_SWEEP &&
              o.corrclust_strategy <= TF_CC_EXACT,
          "unknown correlation clustering strategy");
  require(!std::isnan(o.lp_tol), "LP tolerance is not a number");
  return o;
}

tf_result* make_result(treefit::FittedTree fit, const treefit::DistanceMatrix& d) {
  auto* r = new tf_result;
  r->dist = treefit::distances_in_label_order(fit.distances(), fit.labels(),
                                              d.labels());
  r->newick = treefit::to_newick(fit);
  r->fit = std::move(fit);
  return r;
}

treefit::EdgeSet threshold_edges(const treefit::DistanceMatrix& d,
                                 double threshold) {
  treefit::EdgeSet e(d.size());
  for (std::size_t k = 0; k < d.pairs().values().size(); ++k) {
    e.set_index(k, d.pairs().values()[k] <= threshold);
  }
  return e;
}

}  // namespace

extern "C" {

void tf_options_init(tf_options* options) {
  if (!options) return;
  options->seed = 0;
  options->lp_tol = 1e-7;
  options->corrclust_strategy = TF_CC_PIVOT_SWEEP;
  options->pivot = nullptr;
  options->dump_lp = 0;
  options->threads = 0;
}

const char* tf_last_error(void) { return g_last_error.c_str(); }

const char* tf_version(void) { return "0.1.0"; }

tf_status tf_matrix_load(const char* path, tf_format format, tf_matrix** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto parsed = treefit::read_matrix_file(
        path, static_cast<treefit::MatrixFormat>(format));
    *out = new tf_matrix{std::move(parsed.matrix), std::move(parsed.warnings)};
  });
}

tf_status tf_matrix_parse(const char* text, tf_format format, tf_matrix** out) {
  return guarded([&] {
    require(text && out, "null argument");
    auto parsed = treefit::parse_matrix_text(
        text, static_cast<treefit::MatrixFormat>(format));
    *out = new tf_matrix{std::move(parsed.matrix), std::move(parsed.warnings)};
  });
}

tf_status tf_matrix_create(size_t n, const char* const* labels,
                           const double* condensed, tf_matrix** out) {
  return guarded([&] {
    require(out && (n == 0 || labels) && (n < 2 || condensed),
            "null argument");
    std::vector<std::string> names;
    for (size_t i = 0; i < n; ++i) {
      require(labels[i] != nullptr, "null label");
      names.emplace_back(labels[i]);
    }
    treefit::PairMatrix p(n);
    for (size_t k = 0; k < treefit::num_pairs(n); ++k) {
      p.values()[k] = condensed[k];
    }
    *out = new tf_matrix{treefit::DistanceMatrix(std::move(names), std::move(p)),
                         {}};
  });
}

void tf_matrix_free(tf_matrix* m) { delete m; }

size_t tf_matrix_size(const tf_matrix* m) { return m ? m->d.size() : 0; }

const char* tf_matrix_label(const tf_matrix* m, size_t i) {
  return m && i < m->d.size() ? m->d.label(i).c_str() : nullptr;
}

double tf_matrix_get(const tf_matrix* m, size_t i, size_t j) {
  return m && i < m->d.size() && j < m->d.size() ? m->d(i, j) : NAN;
}

size_t tf_matrix_warning_count(const tf_matrix* m) {
  return m ? m->warnings.size() : 0;
}

const char* tf_matrix_warning(const tf_matrix* m, size_t k) {
  return m && k < m->warnings.size() ? m->warnings[k].c_str() : nullptr;
}

tf_status tf_fit_ultrametric(const tf_matrix* m, const tf_options* options,
                             tf_result** out) {
  return guarded([&] {
    require(m && out, "null argument");
    const tf_options o = resolve(options);
    *out = make_result(treefit::fit_ultrametric(m->d, ultra_options(o)), m->d);
  });
}

tf_status tf_fit_tree(const tf_matrix* m, const tf_options* options,
                      tf_result** out) {
  return guarded([&] {
    require(m && out, "null argument");
    const tf_options o = resolve(options);
    treefit::TreeFitOptions t;
    t.ultrametric = ultra_options(o);
    t.threads = o.threads;
    if (o.pivot) {
      const auto idx = m->d.index_of(o.pivot);
      require(idx.has_value(),
              ("unknown pivot label '" + std::string(o.pivot) + "'").c_str());
      t.pivot = *idx;
    }
    *out = make_result(treefit::fit_tree_metric(m->d, t), m->d);
  });
}

tf_status tf_oracle_ultrametric(const tf_matrix* m, tf_result** out) {
  return guarded([&] {
    require(m && out, "null argument");
    auto [tree, cost] = treefit::exact_ultrametric_l1(m->d);
    treefit::FittedTree fit;
    fit.mode = treefit::FitMode::kUltrametric;
    fit.l1_error = cost;
    fit.num_levels = m->d.size() < 2 ? 0 : m->d.distinct_values().size() - 1;
    fit.tree = std::move(tree);
    *out = make_result(std::move(fit), m->d);
  });
}

void tf_result_free(tf_result* r) { delete r; }

tf_mode tf_result_mode(const tf_result* r) {
  return r && r->fit.mode == treefit::FitMode::kTreeMetric ? TF_MODE_TREE
                                                           : TF_MODE_ULTRAMETRIC;
}

size_t tf_result_size(const tf_result* r) { return r ? r->dist.size() : 0; }

double tf_result_l1_error(const tf_result* r) {
  return r ? r->fit.l1_error : NAN;
}

int tf_result_lp_lower_bound(const tf_result* r, double* bound) {
  if (!r || !r->fit.lp_lower_bound) return 0;
  if (bound) *bound = *r->fit.lp_lower_bound;
  return 1;
}

size_t tf_result_num_levels(const tf_result* r) {
  return r ? r->fit.num_levels : 0;
}

double tf_result_distance(const tf_result* r, size_t i, size_t j) {
  return r && i < r->dist.size() && j < r->dist.size() ? r->dist(i, j) : NAN;
}

const char* tf_result_newick(const tf_result* r) {
  return r ? r->newick.c_str() : nullptr;
}

const char* tf_result_lp_dump(const tf_result* r) {
  return r ? r->fit.lp_dump.c_str() : nullptr;
}

tf_status tf_corrclust(const tf_matrix* m, double threshold,
                       tf_corrclust_strategy strategy, uint64_t seed,
                       tf_clustering** out) {
  return guarded([&] {
    require(m && out, "null argument");
    require(strategy >= TF_CC_PIVOT_SWEEP && strategy <= TF_CC_EXACT,
            "unknown correlation clustering strategy");
    const auto e = threshold_edges(m->d, threshold);
    auto r = treefit::corr_cluster(
        e, static_cast<treefit::CorrClustStrategy>(strategy), seed);
    auto* c = new tf_clustering;
    c->levels.push_back(std::move(r.partition));
    c->cost = static_cast<double>(r.cost);
    *out = c;
  });
}

tf_status tf_oracle_hca(const tf_matrix* m, const tf_options* options,
                        tf_clustering** out) {
  return guarded([&] {
    require(m && out, "null argument");
    const tf_options o = resolve(options);
    const auto red = treefit::hcc_instance_from_distances(m->d);
    auto c = std::make_unique<tf_clustering>();
    if (!red.instance) {
      *out = c.release();
      return;
    }
    const auto& inst = *red.instance;
    std::vector<treefit::Partition> q;
    for (std::size_t t = 0; t < inst.num_levels(); ++t) {
      q.push_back(treefit::corr_cluster(
                      inst.edge_sets[t],
                      static_cast<treefit::CorrClustStrategy>(o.corrclust_strategy),
                      o.seed + t)
                      .partition);
    }
    auto [hier, cost] = treefit::exact_hca(q, inst.deltas);
    treefit::HcaOptions hca;
    hca.lp.feas_tol = o.lp_tol > 0.0 ? o.lp_tol : 1e-7;
    const auto run = treefit::fit_hca(q, inst.deltas, hca);
    c->levels = hier.levels();
    c->cost = cost;
    c->algorithm_cost = run.cost;
    c->lp_bound = std::max(0.0, run.x.objective);
    *out = c.release();
  });
}

void tf_clustering_free(tf_clustering* c) { delete c; }

size_t tf_clustering_num_levels(const tf_clustering* c) {
  return c ? c->levels.size() : 0;
}

size_t tf_clustering_num_parts(const tf_clustering* c, size_t level) {
  return c && level < c->levels.size() ? c->levels[level].num_parts() : 0;
}

size_t tf_clustering_part_size(const tf_clustering* c, size_t level,
                               size_t part) {
  if (!c || level >= c->levels.size()) return 0;
  const auto& p = c->levels[level];
  return part < p.num_parts() ? p.part(part).size() : 0;
}

size_t tf_clustering_member(const tf_clustering* c, size_t level, size_t part,
                            size_t k) {
  if (!c || level >= c->levels.size()) return SIZE_MAX;
  const auto& p = c->levels[level];
  if (part >= p.num_parts() || k >= p.part(part).size()) return SIZE_MAX;
  return p.part(part)[k];
}

double tf_clustering_cost(const tf_clustering* c) { return c ? c->cost : NAN; }

int tf_clustering_algorithm_cost(const tf_clustering* c, double* cost) {
  if (!c || !c->algorithm_cost) return 0;
  if (cost) *cost = *c->algorithm_cost;
  return 1;
}

int tf_clustering_lp_lower_bound(const tf_clustering* c, double* bound) {
  if (!c || !c->lp_bound) return 0;
  if (bound) *bound = *c->lp_bound;
  return 1;
}

tf_status tf_eval_newick(const char* newick, const tf_matrix* m, double p,
                         double* error) {
  return guarded([&] {
    require(newick && m && error, "null argument");
    require(p >= 1.0, "norm exponent must be at least 1");
    const auto tree = treefit::parse_newick(newick);
    *error = treefit::lp_norm_error(tree, m->d, p);
  });
}

}  // extern "C"
