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

#include "treefit/hcc.hpp"

namespace treefit {

HccRun fit_hcc(const HccInstance& inst, const HccOptions& options) {
  inst.validate();
  HccRun run;
  for (std::size_t t = 0; t < inst.num_levels(); ++t) {
    run.q.push_back(
        corr_cluster(inst.edge_sets[t], options.strategy, options.seed + t)
            .partition);
  }
  if (options.lower_bound) {
    LpSolution x = solve_hcc_lp(inst, options.hca.lp);
    run.lp_lower_bound = x.objective;
    run.lp_solution = std::move(x);
  }
  run.hca = fit_hca(run.q, inst.deltas, options.hca);
  run.hierarchy = run.hca.hierarchy;
  run.cost = hierarchy_cost(inst, run.hierarchy);
  return run;
}

}  // namespace treefit
