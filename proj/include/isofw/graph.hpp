// Copyright 2026 The isofw Authors
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

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace isofw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Thrown for malformed graph files. `line` is 1-based, 0 when the error is
// not tied to a particular line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A permutation of {0, ..., n-1}. image(j) is the vertex that j is sent to.
// The matrix form has P(i, j) = 1 iff image(j) == i.
class Permutation {
 public:
  Permutation() = default;
  // Throws std::invalid_argument unless `map` is a bijection.
  explicit Permutation(std::vector<int> map);

  static Permutation identity(int n);
  // 1-based images, as printed in certificates and sidecar files.
  static Permutation from_one_based(std::span<const int> images);

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int j) const { return map_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& map() const { return map_; }

  Permutation inverse() const;
  Matrix matrix() const;
  std::vector<int> one_based() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> map_;
};

// Undirected simple graph with real edge weights, stored as a dense symmetric
// adjacency matrix. Immutable after construction.
class WeightedGraph {
 public:
  struct Edge {
    int u;  // 0-based, u < v
    int v;
    double weight;
  };

  WeightedGraph() = default;
  // Throws std::invalid_argument if adj is not square, not exactly
  // symmetric, has a nonzero diagonal entry, or is empty.
  explicit WeightedGraph(Matrix adj);
  // Edges with 0-based endpoints; duplicate edges and self-loops rejected.
  static WeightedGraph from_edges(int n, std::span<const Edge> edges);
  // Unit-weight convenience overload (0-based endpoints).
  static WeightedGraph from_pairs(int n,
                                  std::span<const std::pair<int, int>> pairs);

  int n() const { return static_cast<int>(adj_.rows()); }
  const Matrix& adj() const { return adj_; }
  bool is_integer() const { return is_integer_; }
  double weight(int i, int j) const { return adj_(i, j); }

  std::vector<Edge> edges() const;
  std::size_t edge_count() const;
  // Sum of weights incident to i.
  double degree(int i) const { return adj_.row(i).sum(); }
  // True if every vertex has the same weighted degree.
  bool is_regular() const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.adj_.rows() == b.adj_.rows() && a.adj_ == b.adj_;
  }

 private:
  Matrix adj_;
  bool is_integer_ = true;
};

// Returns B = P A P^T, so that p is an isomorphism from g onto the result:
// B(p(i), p(j)) == A(i, j).
WeightedGraph apply_permutation(const WeightedGraph& g, const Permutation& p);

// Absolute entrywise tolerance used when either graph has non-integer
// weights. Integer-weighted pairs are compared exactly.
inline constexpr double kVerifyTolerance = 1e-9;

// True iff P A == B P, i.e. b(p(i), p(j)) == a(i, j) for all i, j.
bool verify_isomorphism(const WeightedGraph& a, const WeightedGraph& b,
                        const Permutation& p);

// Text format: "n m" header, then m lines "i j [w]" with 1-based i < j.
// Blank lines and '#' comments are ignored.
WeightedGraph parse_graph(std::istream& in);
WeightedGraph read_graph(const std::filesystem::path& path);
void format_graph(const WeightedGraph& g, std::ostream& out);
void write_graph(const WeightedGraph& g, const std::filesystem::path& path);

// Permutation sidecar: a single line of n 1-based images.
Permutation read_permutation(const std::filesystem::path& path);
void write_permutation(const Permutation& p, const std::filesystem::path& path);

}  // namespace isofw
