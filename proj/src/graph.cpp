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

#include "isofw/graph.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace isofw {

namespace {

bool is_integral(double w) { return std::isfinite(w) && std::floor(w) == w; }

std::string format_weight(double w) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, res.ptr);
}

}  // namespace

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)) {
  std::vector<char> seen(map_.size(), 0);
  for (int v : map_) {
    if (v < 0 || static_cast<std::size_t>(v) >= map_.size() ||
        seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("permutation is not a bijection");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
  return Permutation(std::move(m));
}

Permutation Permutation::from_one_based(std::span<const int> images) {
  std::vector<int> m;
  m.reserve(images.size());
  for (int v : images) m.push_back(v - 1);
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (std::size_t j = 0; j < map_.size(); ++j) {
    inv[static_cast<std::size_t>(map_[j])] = static_cast<int>(j);
  }
  return Permutation(std::move(inv));
}

Matrix Permutation::matrix() const {
  const int n = size();
  Matrix p = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) p((*this)(j), j) = 1.0;
  return p;
}

std::vector<int> Permutation::one_based() const {
  std::vector<int> out(map_);
  for (int& v : out) ++v;
  return out;
}

WeightedGraph::WeightedGraph(Matrix adj) : adj_(std::move(adj)) {
  if (adj_.rows() == 0 || adj_.rows() != adj_.cols()) {
    throw std::invalid_argument("adjacency matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < adj_.rows(); ++i) {
    if (adj_(i, i) != 0.0) {
      throw std::invalid_argument("self-loops are not supported");
    }
    for (Eigen::Index j = 0; j < adj_.cols(); ++j) {
      if (adj_(i, j) != adj_(j, i)) {
        throw std::invalid_argument("adjacency matrix is not symmetric");
      }
      if (!std::isfinite(adj_(i, j))) {
        throw std::invalid_argument("edge weights must be finite");
      }
      if (!is_integral(adj_(i, j))) is_integer_ = false;
    }
  }
}

WeightedGraph WeightedGraph::from_edges(int n, std::span<const Edge> edges) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  Matrix adj = Matrix::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.u == e.v) throw std::invalid_argument("self-loops are not supported");
    if (adj(e.u, e.v) != 0.0) {
      throw std::invalid_argument("duplicate edge");
    }
    adj(e.u, e.v) = e.weight;
    adj(e.v, e.u) = e.weight;
  }
  return WeightedGraph(std::move(adj));
}

WeightedGraph WeightedGraph::from_pairs(
    int n, std::span<const std::pair<int, int>> pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
  return from_edges(n, edges);
}

std::vector<WeightedGraph::Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < n(); ++i) {
    for (int j = i + 1; j < n(); ++j) {
      if (adj_(i, j) != 0.0) out.push_back({i, j, adj_(i, j)});
    }
  }
  return out;
}

std::size_t WeightedGraph::edge_count() const {
  std::size_t m = 0;
  for (int i = 0; i < n(); ++i) {
    for (int j = i + 1; j < n(); ++j) m += adj_(i, j) != 0.0;
  }
  return m;
}

bool WeightedGraph::is_regular() const {
  const Vector deg = adj_.rowwise().sum();
  return (deg.array() == deg(0)).all();
}

WeightedGraph apply_permutation(const WeightedGraph& g, const Permutation& p) {
  if (p.size() != g.n()) {
    throw std::invalid_argument("permutation size does not match graph");
  }
  Matrix b(g.n(), g.n());
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) b(p(i), p(j)) = g.weight(i, j);
  }
  return WeightedGraph(std::move(b));
}

bool verify_isomorphism(const WeightedGraph& a, const WeightedGraph& b,
                        const Permutation& p) {
  if (a.n() != b.n() || p.size() != a.n()) return false;
  const bool exact = a.is_integer() && b.is_integer();
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      const double lhs = a.weight(i, j);
      const double rhs = b.weight(p(i), p(j));
      if (exact ? lhs != rhs : std::abs(lhs - rhs) > kVerifyTolerance) {
        return false;
      }
    }
  }
  return true;
}

WeightedGraph parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  long n = -1;
  long m = -1;
  std::vector<WeightedGraph::Edge> edges;
  Matrix seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    auto as_long = [&](const std::string& s) {
      long v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("expected an integer, got '" + s + "'", lineno);
      }
      return v;
    };

    if (n < 0) {
      if (tok.size() != 2) throw ParseError("header must be 'n m'", lineno);
      n = as_long(tok[0]);
      m = as_long(tok[1]);
      if (n < 1) throw ParseError("vertex count must be positive", lineno);
      if (m < 0) throw ParseError("edge count must be non-negative", lineno);
      seen = Matrix::Zero(n, n);
      continue;
    }
    if (tok.size() != 2 && tok.size() != 3) {
      throw ParseError("edge line must be 'i j' or 'i j w'", lineno);
    }
    const long i = as_long(tok[0]);
    const long j = as_long(tok[1]);
    double w = 1.0;
    if (tok.size() == 3) {
      const std::string& s = tok[2];
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(w)) {
        throw ParseError("bad weight '" + s + "'", lineno);
      }
    }
    if (i < 1 || j < 1 || i > n || j > n) {
      throw ParseError("vertex index out of range", lineno);
    }
    if (i == j) throw ParseError("self-loop on vertex " + tok[0], lineno);
    if (i > j) throw ParseError("edge must be listed with i < j", lineno);
    if (seen(i - 1, j - 1) != 0.0) throw ParseError("duplicate edge", lineno);
    seen(i - 1, j - 1) = 1.0;
    if (w != 0.0) {
      edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), w});
    }
  }
  if (n < 0) throw ParseError("missing header", lineno);
  const auto listed = static_cast<long>(seen.sum());
  if (listed != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, found " +
                         std::to_string(listed),
                     0);
  }
  return WeightedGraph::from_edges(static_cast<int>(n), edges);
}

WeightedGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return parse_graph(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void format_graph(const WeightedGraph& g, std::ostream& out) {
  const auto edges = g.edges();
  out << g.n() << ' ' << edges.size() << '\n';
  for (const auto& e : edges) {
    out << e.u + 1 << ' ' << e.v + 1;
    if (e.weight != 1.0) out << ' ' << format_weight(e.weight);
    out << '\n';
  }
}

void write_graph(const WeightedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  format_graph(g, out);
}

Permutation read_permutation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<int> images;
  for (int v; in >> v;) images.push_back(v);
  if (!in.eof()) throw ParseError(path.string() + ": bad permutation entry", 0);
  try {
    return Permutation::from_one_based(images);
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void write_permutation(const Permutation& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto images = p.one_based();
  for (std::size_t i = 0; i < images.size(); ++i) {
    out << (i ? " " : "") << images[i];
  }
  out << '\n';
}

}  // namespace isofw
