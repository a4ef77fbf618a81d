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

#include "treefit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <variant>

#include "treefit/error.hpp"

namespace treefit {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split_cells(const std::string& line) {
  const char sep = line.find('\t') != std::string::npos &&
                           line.find(',') == std::string::npos
                       ? '\t'
                       : ',';
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      cells.push_back(unquote(trim(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(unquote(trim(cur)));
  return cells;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw DataError(where + ": '" + s + "' is not a number");
  }
  return v;
}

std::vector<std::string> content_lines(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

void check_labels(const std::vector<std::string>& labels) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) {
      throw DataError("label " + std::to_string(i + 1) + " is empty");
    }
    if (!seen.insert(labels[i]).second) {
      throw DataError("duplicate label '" + labels[i] + "'");
    }
  }
}

// Assembles a matrix from full rows, checking diagonal, sign and symmetry.
ParsedMatrix assemble(std::vector<std::string> labels,
                      const std::vector<std::vector<double>>& full) {
  check_labels(labels);
  const std::size_t n = labels.size();
  ParsedMatrix out;
  PairMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(full[i][i]) > kDistanceTol) {
      throw DataError("row " + std::to_string(i + 1) + " (" + labels[i] +
                      "): diagonal entry must be 0");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = full[i][j], b = full[j][i];
      for (auto [r, c, v] : {std::tuple{i, j, a}, std::tuple{j, i, b}}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw DataError("row " + std::to_string(r + 1) + ", column " +
                          std::to_string(c + 1) + " (" + labels[r] + ", " +
                          labels[c] + "): distance must be positive, got " +
                          format_length(v));
        }
      }
      if (std::abs(a - b) > kDistanceTol * std::max({1.0, a, b})) {
        out.warnings.push_back("asymmetric entries for (" + labels[i] + ", " +
                               labels[j] + "): " + format_length(a) + " vs " +
                               format_length(b) + ", using the mean");
      }
      d.set(i, j, a == b ? a : 0.5 * (a + b));
    }
  }
  out.matrix = DistanceMatrix(std::move(labels), std::move(d));
  return out;
}

ParsedMatrix parse_csv(const std::vector<std::string>& lines) {
  if (lines.empty()) throw DataError("CSV: empty input");
  const auto header = split_cells(lines[0]);
  std::vector<std::string> labels(header.begin() + 1, header.end());
  const std::size_t n = labels.size();
  if (lines.size() != n + 1) {
    throw DataError("CSV: header names " + std::to_string(n) +
                    " labels but there are " +
                    std::to_string(lines.size() - 1) + " data rows");
  }
  std::vector<std::vector<double>> full(n, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto cells = split_cells(lines[r + 1]);
    const std::string where = "CSV row " + std::to_string(r + 1);
    if (cells.size() != n + 1) {
      throw DataError(where + ": expected " + std::to_string(n + 1) +
                      " cells, found " + std::to_string(cells.size()));
    }
    if (cells[0] != labels[r]) {
      throw DataError(where + ": row label '" + cells[0] +
                      "' does not match column label '" + labels[r] + "'");
    }
    for (std::size_t c = 0; c < n; ++c) {
      full[r][c] = parse_number(cells[c + 1],
                                where + ", column " + std::to_string(c + 1));
    }
  }
  return assemble(std::move(labels), full);
}

ParsedMatrix parse_phylip(const std::vector<std::string>& lines) {
  if (lines.empty()) throw DataError("PHYLIP: empty input");
  const auto head = split_ws(lines[0]);
  std::size_t n = 0;
  {
    const std::string& s = head.empty() ? std::string() : head[0];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (head.size() != 1 || ec != std::errc() || ptr != s.data() + s.size()) {
      throw DataError("PHYLIP: first line must hold the label count");
    }
  }
  if (lines.size() != n + 1) {
    throw DataError("PHYLIP: expected " + std::to_string(n) + " rows, found " +
                    std::to_string(lines.size() - 1));
  }
  std::vector<std::string> labels;
  std::vector<std::vector<double>> full(n, std::vector<double>(n, 0.0));
  // Values per row as a function of the row index, fixed by the first row.
  enum class Layout { kStrictLower, kLower, kSquare } layout = Layout::kStrictLower;
  for (std::size_t r = 0; r < n; ++r) {
    const auto tok = split_ws(lines[r + 1]);
    const std::string where = "PHYLIP row " + std::to_string(r + 1);
    if (tok.empty()) throw DataError(where + ": missing label");
    const std::size_t values = tok.size() - 1;
    if (r == 0) {
      if (values == 0) {
        layout = Layout::kStrictLower;
      } else if (values == n && n > 1) {
        layout = Layout::kSquare;
      } else if (values == 1) {
        layout = Layout::kLower;
      } else {
        throw DataError(where + ": cannot infer the matrix layout from " +
                        std::to_string(values) + " values");
      }
    }
    const std::size_t expected = layout == Layout::kSquare ? n
                                 : layout == Layout::kLower ? r + 1
                                                            : r;
    if (values != expected) {
      throw DataError(where + ": expected " + std::to_string(expected) +
                      " values, found " + std::to_string(values));
    }
    labels.push_back(tok[0]);
    for (std::size_t c = 0; c < values; ++c) {
      const double v = parse_number(
          tok[c + 1], where + ", column " + std::to_string(c + 1));
      full[r][c] = v;
      if (layout != Layout::kSquare) full[c][r] = v;
    }
  }
  return assemble(std::move(labels), full);
}

bool looks_like_phylip(const std::vector<std::string>& lines) {
  if (lines.empty()) return false;
  const auto tok = split_ws(lines[0]);
  if (tok.size() != 1 || tok[0].find(',') != std::string::npos) return false;
  return std::all_of(tok[0].begin(), tok[0].end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

ParsedMatrix parse_matrix(std::istream& in, MatrixFormat format) {
  const auto lines = content_lines(in);
  if (format == MatrixFormat::kAuto) {
    format = looks_like_phylip(lines) ? MatrixFormat::kPhylip
                                      : MatrixFormat::kCsv;
  }
  return format == MatrixFormat::kPhylip ? parse_phylip(lines)
                                         : parse_csv(lines);
}

ParsedMatrix parse_matrix_text(const std::string& text, MatrixFormat format) {
  std::istringstream is(text);
  return parse_matrix(is, format);
}

ParsedMatrix read_matrix_file(const std::string& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_matrix(in, format);
}

std::string format_length(double v) {
  if (v == 0.0) return "0.0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, end);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

bool needs_quotes(const std::string& s) {
  return s.find_first_of(" \t\r\n()[]':;,_") != std::string::npos;
}

std::string newick_name(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

}  // namespace

std::string to_newick(const UltrametricTree& t) {
  const auto& nodes = t.nodes();
  if (t.size() == 1) return "(" + newick_name(t.labels()[0]) + ":0.0);";
  std::string out;
  auto emit = [&](auto&& self, std::size_t v) -> void {
    const auto& node = nodes[v];
    if (node.leaf >= 0) {
      out += newick_name(t.labels()[static_cast<std::size_t>(node.leaf)]);
      return;
    }
    out += '(';
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      if (k) out += ',';
      const std::size_t c = node.children[k];
      self(self, c);
      out += ':';
      out += format_length(node.height - nodes[c].height);
    }
    out += ')';
  };
  emit(emit, t.root());
  return out + ";";
}

std::string to_newick(const WeightedTree& t) {
  const std::size_t nv = t.num_nodes();
  std::vector<std::vector<std::size_t>> labels_at(nv);
  for (std::size_t i = 0; i < t.size(); ++i) {
    labels_at[t.node_of_label(i)].push_back(i);
  }
  std::size_t root = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    if (t.incident(v).size() >= 2) {
      root = v;
      break;
    }
  }
  std::string out;
  auto emit = [&](auto&& self, std::size_t v, std::size_t from) -> void {
    std::vector<std::pair<std::size_t, double>> kids;
    for (std::size_t e : t.incident(v)) {
      const auto& edge = t.edges()[e];
      const std::size_t other = edge.a == v ? edge.b : edge.a;
      if (other != from) kids.emplace_back(other, edge.weight);
    }
    if (kids.empty() && labels_at[v].size() == 1 && v != root) {
      out += newick_name(t.labels()[labels_at[v][0]]);
      return;
    }
    out += '(';
    bool first = true;
    for (std::size_t i : labels_at[v]) {
      if (!first) out += ',';
      first = false;
      out += newick_name(t.labels()[i]) + ":0.0";
    }
    for (auto [c, w] : kids) {
      if (!first) out += ',';
      first = false;
      self(self, c, v);
      out += ':';
      out += format_length(w);
    }
    out += ')';
  };
  emit(emit, root, nv);
  return out + ";";
}

std::string to_newick(const FittedTree& t) {
  return std::visit([](const auto& tree) { return to_newick(tree); }, t.tree);
}

namespace {

class NewickParser {
 public:
  explicit NewickParser(const std::string& s) : s_(s) {}

  WeightedTree parse() {
    skip_ws();
    const std::size_t root = subtree();
    skip_ws();
    if (peek() == ':') {
      ++pos_;
      length();
    }
    skip_ws();
    if (peek() != ';') fail("expected ';'");
    ++pos_;
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    (void)root;
    if (labels_.empty()) fail("tree has no labels");
    return WeightedTree(labels_, num_nodes_, edges_, node_of_label_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("Newick: " + what + " at offset " + std::to_string(pos_));
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '[') {
        const auto close = s_.find(']', pos_);
        if (close == std::string::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  std::string name() {
    skip_ws();
    std::string out;
    if (peek() == '\'') {
      ++pos_;
      for (;;) {
        if (pos_ >= s_.size()) fail("unterminated quoted label");
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            out += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        out += s_[pos_++];
      }
      return out;
    }
    while (pos_ < s_.size() &&
           std::string_view("(),:;[").find(s_[pos_]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      const char c = s_[pos_++];
      out += c == '_' ? ' ' : c;
    }
    return out;
  }

  double length() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           std::string_view("0123456789+-.eE").find(s_[pos_]) !=
               std::string_view::npos) {
      ++pos_;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_ || start == pos_) {
      fail("bad branch length");
    }
    if (!(v >= 0.0) || !std::isfinite(v)) fail("negative branch length");
    return v;
  }

  void add_label(const std::string& label, std::size_t node) {
    if (label.empty()) return;
    if (std::find(labels_.begin(), labels_.end(), label) != labels_.end()) {
      fail("repeated label '" + label + "'");
    }
    labels_.push_back(label);
    node_of_label_.push_back(node);
  }

  std::size_t subtree() {
    skip_ws();
    const std::size_t v = num_nodes_++;
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        const std::size_t c = subtree();
        skip_ws();
        if (peek() != ':') fail("missing branch length");
        ++pos_;
        edges_.push_back(WeightedTree::Edge{v, c, length()});
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
      add_label(name(), v);
    } else {
      const std::string label = name();
      if (label.empty()) fail("missing leaf label");
      add_label(label, v);
    }
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t num_nodes_ = 0;
  std::vector<WeightedTree::Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> node_of_label_;
};

}  // namespace

WeightedTree parse_newick(const std::string& text) {
  return NewickParser(text).parse();
}

}  // namespace treefit
