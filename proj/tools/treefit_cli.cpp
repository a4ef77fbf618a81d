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

// Command-line front end of the treefit library.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver or internal
// failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "treefit/treefit.h"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code(tf_status s) {
  switch (s) {
    case TF_OK:
      return kExitOk;
    case TF_ERR_USAGE:
      return kExitUsage;
    case TF_ERR_DATA:
      return kExitData;
    default:
      return kExitSolver;
  }
}

void check(tf_status s) {
  if (s != TF_OK) throw Failure{exit_code(s), tf_last_error()};
}

struct MatrixDeleter {
  void operator()(tf_matrix* m) const { tf_matrix_free(m); }
};
struct ResultDeleter {
  void operator()(tf_result* r) const { tf_result_free(r); }
};
struct ClusteringDeleter {
  void operator()(tf_clustering* c) const { tf_clustering_free(c); }
};
using MatrixPtr = std::unique_ptr<tf_matrix, MatrixDeleter>;
using ResultPtr = std::unique_ptr<tf_result, ResultDeleter>;
using ClusteringPtr = std::unique_ptr<tf_clustering, ClusteringDeleter>;

struct Globals {
  std::uint64_t seed = 0;
  double lp_tol = 1e-7;
  std::string json_out;
  std::string dump_lp;
  std::string newick_out;
  std::string format = "auto";
  unsigned threads = 0;
  bool omit_timing = false;
  bool quiet = false;
};

tf_format parse_format(const std::string& f) {
  if (f == "csv") return TF_FORMAT_CSV;
  if (f == "phylip") return TF_FORMAT_PHYLIP;
  return TF_FORMAT_AUTO;
}

MatrixPtr load_matrix(const std::string& path, const Globals& g) {
  tf_matrix* m = nullptr;
  check(tf_matrix_load(path.c_str(), parse_format(g.format), &m));
  MatrixPtr out(m);
  for (std::size_t k = 0; k < tf_matrix_warning_count(m); ++k) {
    std::cerr << "warning: " << path << ": " << tf_matrix_warning(m, k) << "\n";
  }
  return out;
}

tf_options make_options(const Globals& g) {
  tf_options o;
  tf_options_init(&o);
  o.seed = g.seed;
  o.lp_tol = g.lp_tol;
  o.dump_lp = g.dump_lp.empty() ? 0 : 1;
  o.threads = g.threads;
  return o;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitData, "cannot write '" + path + "'"};
  out << text;
  if (!out) throw Failure{kExitData, "write to '" + path + "' failed"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void emit(const Globals& g, ordered_json report, const Timer& timer) {
  report["wall_ms"] = g.omit_timing ? 0.0 : std::round(timer.ms() * 1000) / 1000;
  const std::string text = report.dump(2) + "\n";
  if (g.json_out == "-") {
    std::cout << text;
  } else if (!g.json_out.empty()) {
    write_file(g.json_out, text);
  }
}

ordered_json fit_report(const tf_matrix* m, const tf_result* r,
                        const std::string& mode) {
  double bound = 0.0;
  std::optional<double> lp;
  if (tf_result_lp_lower_bound(r, &bound)) lp = bound;
  const double err = tf_result_l1_error(r);
  std::optional<double> ratio;
  if (lp) {
    if (*lp > 0.0) {
      ratio = err / *lp;
    } else if (err <= 1e-9) {
      ratio = 1.0;
    }
  }
  ordered_json j;
  j["n"] = tf_matrix_size(m);
  j["mode"] = mode;
  j["l1_error"] = err;
  j["lp_lower_bound"] = number_or_null(lp);
  j["num_levels"] = tf_result_num_levels(r);
  j["ratio_to_lp"] = number_or_null(ratio);
  j["tree_newick"] = tf_result_newick(r);
  return j;
}

void print_fit(const Globals& g, const ordered_json& j) {
  if (g.quiet || g.json_out == "-") return;
  std::cout << "mode        " << j["mode"].get<std::string>() << "\n"
            << "n           " << j["n"] << "\n"
            << "l1_error    " << j["l1_error"] << "\n"
            << "lp_bound    " << j["lp_lower_bound"] << "\n"
            << "levels      " << j["num_levels"] << "\n"
            << "ratio_to_lp " << j["ratio_to_lp"] << "\n"
            << j["tree_newick"].get<std::string>() << "\n";
}

void finish_fit(const Globals& g, const tf_matrix* m, const tf_result* r,
                const std::string& mode, const Timer& timer) {
  if (!g.dump_lp.empty()) {
    const std::string dump = tf_result_lp_dump(r);
    if (dump.empty()) {
      std::cerr << "note: no LP was solved; --dump-lp file left empty\n";
    }
    write_file(g.dump_lp, dump);
  }
  if (!g.newick_out.empty()) {
    write_file(g.newick_out, std::string(tf_result_newick(r)) + "\n");
  }
  ordered_json j = fit_report(m, r, mode);
  print_fit(g, j);
  emit(g, std::move(j), timer);
}

ordered_json clustering_json(const tf_matrix* m, const tf_clustering* c,
                             std::size_t level) {
  ordered_json parts = ordered_json::array();
  for (std::size_t p = 0; p < tf_clustering_num_parts(c, level); ++p) {
    ordered_json part = ordered_json::array();
    for (std::size_t k = 0; k < tf_clustering_part_size(c, level, p); ++k) {
      part.push_back(tf_matrix_label(m, tf_clustering_member(c, level, p, k)));
    }
    parts.push_back(std::move(part));
  }
  return parts;
}

double min_distance(const tf_matrix* m) {
  double lo = std::numeric_limits<double>::infinity();
  const std::size_t n = tf_matrix_size(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) lo = std::min(lo, tf_matrix_get(m, i, j));
  }
  return lo;
}

void run_corrclust(const Globals& g, const std::string& file,
                   std::optional<double> threshold, tf_corrclust_strategy s,
                   const std::string& mode) {
  Timer timer;
  MatrixPtr m = load_matrix(file, g);
  const double th = threshold ? *threshold : min_distance(m.get());
  tf_clustering* c = nullptr;
  check(tf_corrclust(m.get(), th, s, g.seed, &c));
  ClusteringPtr cp(c);
  ordered_json j;
  j["n"] = tf_matrix_size(m.get());
  j["mode"] = mode;
  j["threshold"] = number_or_null(th);
  j["cost"] = tf_clustering_cost(c);
  j["clusters"] = clustering_json(m.get(), c, 0);
  if (!g.quiet && g.json_out != "-") {
    std::cout << "cost " << j["cost"] << "\n";
    for (const auto& part : j["clusters"]) std::cout << part.dump() << "\n";
  }
  emit(g, std::move(j), timer);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit ultrametrics and tree metrics to distance matrices under "
               "the L1 norm."};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized clustering");
  app.add_option("--lp-tol", g.lp_tol, "LP feasibility tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--json-out", g.json_out,
                 "Write the JSON report to this path ('-' for stdout)");
  app.add_option("--dump-lp", g.dump_lp,
                 "Write the lower-bound LP and its solution as text");
  app.add_option("--newick-out", g.newick_out, "Write the fitted tree");
  app.add_option("--format", g.format, "Input format")
      ->check(CLI::IsMember({"auto", "csv", "phylip"}));
  app.add_option("--threads", g.threads, "Worker threads for pivot sweeps");
  app.add_flag("--omit-timing", g.omit_timing,
               "Report wall_ms as 0 for reproducible reports");
  app.add_flag("-q,--quiet", g.quiet, "Suppress the text summary");

  std::string file;
  std::string tree_file;
  std::string pivot;
  bool all_pivots = false;
  bool exact = false;
  bool random = false;
  std::optional<double> threshold;

  auto* fit = app.add_subcommand("fit", "Fit a tree to a distance matrix");
  fit->require_subcommand(1);
  auto* fit_u = fit->add_subcommand("ultrametric", "Fit an ultrametric");
  fit_u->add_option("file", file, "Distance matrix (CSV or PHYLIP)")->required();
  auto* fit_t = fit->add_subcommand("tree", "Fit a tree metric");
  fit_t->add_option("file", file, "Distance matrix (CSV or PHYLIP)")->required();
  auto* pivot_opt = fit_t->add_option("--pivot", pivot, "Use a single pivot label");
  auto* all_opt = fit_t->add_flag("--all-pivots", all_pivots,
                                  "Try every pivot (default)");
  pivot_opt->excludes(all_opt);

  auto* cc = app.add_subcommand("corrclust",
                                "Correlation clustering of a threshold graph");
  cc->add_option("file", file, "Distance matrix (CSV or PHYLIP)")->required();
  cc->add_flag("--exact", exact, "Exhaustive optimum (at most 9 labels)");
  cc->add_flag("--random", random, "One randomized pivot run from --seed");
  cc->add_option("--threshold", threshold,
                 "Edges are pairs with distance <= threshold "
                 "(default: the smallest distance)");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive reference solvers");
  oracle->require_subcommand(1);
  auto* or_u = oracle->add_subcommand("ultrametric",
                                      "L1-optimal ultrametric (<= 7 labels)");
  or_u->add_option("file", file, "Distance matrix")->required();
  auto* or_h = oracle->add_subcommand(
      "hca", "Optimal hierarchy for the per-level clusterings (<= 6 labels, "
             "<= 3 levels)");
  or_h->add_option("file", file, "Distance matrix")->required();
  auto* or_c = oracle->add_subcommand("corrclust",
                                      "Optimal correlation clustering");
  or_c->add_option("file", file, "Distance matrix")->required();
  or_c->add_option("--threshold", threshold,
                   "Edges are pairs with distance <= threshold");

  auto* ev = app.add_subcommand("eval", "Error of a Newick tree");
  ev->add_option("tree", tree_file, "Newick file")->required();
  ev->add_option("dist", file, "Distance matrix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    Timer timer;
    if (*fit_u) {
      MatrixPtr m = load_matrix(file, g);
      const tf_options o = make_options(g);
      tf_result* r = nullptr;
      check(tf_fit_ultrametric(m.get(), &o, &r));
      ResultPtr rp(r);
      finish_fit(g, m.get(), r, "ultrametric", timer);
    } else if (*fit_t) {
      MatrixPtr m = load_matrix(file, g);
      tf_options o = make_options(g);
      if (!pivot.empty()) o.pivot = pivot.c_str();
      tf_result* r = nullptr;
      check(tf_fit_tree(m.get(), &o, &r));
      ResultPtr rp(r);
      finish_fit(g, m.get(), r, "tree", timer);
    } else if (*cc) {
      if (exact && random) throw Failure{kExitUsage, "--exact and --random conflict"};
      run_corrclust(g, file, threshold,
                    exact    ? TF_CC_EXACT
                    : random ? TF_CC_RANDOM_PIVOT
                             : TF_CC_PIVOT_SWEEP,
                    "corrclust");
    } else if (*or_c) {
      run_corrclust(g, file, threshold, TF_CC_EXACT, "oracle-corrclust");
    } else if (*or_u) {
      MatrixPtr m = load_matrix(file, g);
      tf_result* r = nullptr;
      check(tf_oracle_ultrametric(m.get(), &r));
      ResultPtr rp(r);
      finish_fit(g, m.get(), r, "oracle-ultrametric", timer);
    } else if (*or_h) {
      MatrixPtr m = load_matrix(file, g);
      const tf_options o = make_options(g);
      tf_clustering* c = nullptr;
      check(tf_oracle_hca(m.get(), &o, &c));
      ClusteringPtr cp(c);
      ordered_json j;
      j["n"] = tf_matrix_size(m.get());
      j["mode"] = "oracle-hca";
      j["num_levels"] = tf_clustering_num_levels(c);
      j["exact_cost"] = tf_clustering_cost(c);
      double v = 0.0;
      j["algorithm_cost"] =
          tf_clustering_algorithm_cost(c, &v) ? ordered_json(v) : nullptr;
      j["lp_lower_bound"] =
          tf_clustering_lp_lower_bound(c, &v) ? ordered_json(v) : nullptr;
      ordered_json levels = ordered_json::array();
      for (std::size_t t = 0; t < tf_clustering_num_levels(c); ++t) {
        levels.push_back(clustering_json(m.get(), c, t));
      }
      j["hierarchy"] = std::move(levels);
      if (!g.quiet && g.json_out != "-") {
        std::cout << "exact_cost     " << j["exact_cost"] << "\n"
                  << "algorithm_cost " << j["algorithm_cost"] << "\n"
                  << "lp_bound       " << j["lp_lower_bound"] << "\n";
        for (const auto& level : j["hierarchy"]) std::cout << level.dump() << "\n";
      }
      emit(g, std::move(j), timer);
    } else if (*ev) {
      MatrixPtr m = load_matrix(file, g);
      const std::string text = read_file(tree_file);
      double l1 = 0.0, l2 = 0.0, linf = 0.0;
      check(tf_eval_newick(text.c_str(), m.get(), 1.0, &l1));
      check(tf_eval_newick(text.c_str(), m.get(), 2.0, &l2));
      check(tf_eval_newick(text.c_str(), m.get(), INFINITY, &linf));
      ordered_json j;
      j["n"] = tf_matrix_size(m.get());
      j["mode"] = "eval";
      j["l1_error"] = l1;
      j["l2_error"] = l2;
      j["linf_error"] = linf;
      if (!g.quiet && g.json_out != "-") {
        std::cout << "l1_error   " << j["l1_error"] << "\n"
                  << "l2_error   " << j["l2_error"] << "\n"
                  << "linf_error " << j["linf_error"] << "\n";
      }
      emit(g, std::move(j), timer);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
