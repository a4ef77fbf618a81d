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

#ifndef TREEFIT_ERROR_HPP_
#define TREEFIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace treefit {

/// Raised on malformed or out-of-contract input data (bad matrices,
/// mismatched universes, non-hierarchical sequences, size caps).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the LP solver cannot reach an optimum.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace treefit

#endif  // TREEFIT_ERROR_HPP_
