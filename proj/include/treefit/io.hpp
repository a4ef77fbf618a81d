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

// Distance-matrix readers and Newick serialization.
//
// CSV: a header row whose cells after the first are the labels, then one row
// per label starting with that label. The diagonal must be zero. Mirror
// entries are averaged; a warning is recorded when they differ by more than
// 1e-9 relative.
//
// PHYLIP: the label count on the first line, then one row per label with the
// label followed by either the strict lower triangle, the lower triangle with
// the zero diagonal, or the full row. The layout is taken from the first row.

#ifndef TREEFIT_IO_HPP_
#define TREEFIT_IO_HPP_

#include <istream>
#include <string>
#include <vector>

#include "treefit/core.hpp"
#include "treefit/trees.hpp"

namespace treefit {

enum class MatrixFormat { kAuto, kCsv, kPhylip };

struct ParsedMatrix {
  DistanceMatrix matrix;
  std::vector<std::string> warnings;
};

/// Throws DataError with row and column context on malformed input.
ParsedMatrix parse_matrix(std::istream& in, MatrixFormat format = MatrixFormat::kAuto);
ParsedMatrix parse_matrix_text(const std::string& text,
                               MatrixFormat format = MatrixFormat::kAuto);
/// Throws DataError if the file cannot be read.
ParsedMatrix read_matrix_file(const std::string& path,
                              MatrixFormat format = MatrixFormat::kAuto);

/// Shortest round-trip decimal, always with a fractional part ("1.0").
std::string format_length(double v);

/// Ultrametric trees are rooted at their top node; leaf branch lengths equal
/// the parent height, so every leaf sits at depth equal to the root height.
/// A single label serializes as "(a:0.0);".
std::string to_newick(const UltrametricTree& t);

/// Rooted at the first vertex of degree at least two. Labels carried by
/// internal vertices are written as zero-length leaves.
std::string to_newick(const WeightedTree& t);

std::string to_newick(const FittedTree& t);

/// Reads a Newick tree with branch lengths on every non-root edge. Named
/// internal nodes become labels too. Throws DataError on syntax errors,
/// missing lengths or repeated labels.
WeightedTree parse_newick(const std::string& text);

}  // namespace treefit

#endif  // TREEFIT_IO_HPP_
