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

#include "isofw/named_graphs.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace isofw {

namespace {

using Pair = std::pair<int, int>;

// Edge lists below are 1-based, exactly as drawn.
constexpr std::array<Pair, 15> kPetersenEdges = {{
    {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}, {1, 6}, {2, 7}, {3, 8},
    {4, 9}, {5, 10}, {6, 8}, {6, 9}, {7, 9}, {7, 10}, {8, 10},
}};

constexpr std::array<Pair, 15> kFig1bEdges = {{
    {1, 4}, {1, 6}, {1, 7}, {2, 3}, {2, 4}, {2, 9}, {3, 7}, {3, 8},
    {4, 10}, {5, 7}, {5, 9}, {5, 10}, {6, 8}, {6, 9}, {8, 10},
}};

constexpr std::array<Pair, 18> kFruchtEdges = {{
    {1, 2}, {1, 3}, {1, 5}, {2, 3}, {2, 12}, {3, 10}, {4, 5}, {4, 6}, {4, 8},
    {5, 6}, {6, 10}, {7, 8}, {7, 9}, {7, 12}, {8, 9}, {9, 11}, {10, 11},
    {11, 12},
}};

// Coset graph of S4 in PSL(2,17); intersection array
// {3,2,2,2,1,1,1; 1,1,1,1,1,1,3}.
constexpr std::array<Pair, 153> kBiggsSmithEdges = {{
    {1, 2}, {1, 83}, {1, 84}, {2, 85}, {2, 86}, {3, 27}, {3, 54}, {3, 61},
    {4, 31}, {4, 51}, {4, 62}, {5, 34}, {5, 55}, {5, 65}, {6, 32}, {6, 53},
    {6, 64}, {7, 33}, {7, 52}, {7, 66}, {8, 29}, {8, 58}, {8, 63}, {9, 30},
    {9, 57}, {9, 59}, {10, 28}, {10, 56}, {10, 60}, {11, 23}, {11, 40}, {11,
    94}, {12, 26}, {12, 38}, {12, 90}, {13, 24}, {13, 39}, {13, 88}, {14,
    19}, {14, 36}, {14, 91}, {15, 21}, {15, 37}, {15, 93}, {16, 22}, {16,
    35}, {16, 89}, {17, 25}, {17, 41}, {17, 87}, {18, 20}, {18, 42}, {18,
    92}, {19, 44}, {19, 99}, {20, 43}, {20, 101}, {21, 45}, {21, 97}, {22,
    46}, {22, 102}, {23, 47}, {23, 95}, {24, 48}, {24, 100}, {25, 50}, {25,
    96}, {26, 49}, {26, 98}, {27, 69}, {27, 81}, {28, 73}, {28, 78}, {29,
    70}, {29, 77}, {30, 71}, {30, 75}, {31, 74}, {31, 76}, {32, 68}, {32,
    79}, {33, 72}, {33, 80}, {34, 67}, {34, 82}, {35, 48}, {35, 78}, {36,
    45}, {36, 81}, {37, 47}, {37, 75}, {38, 43}, {38, 82}, {39, 49}, {39,
    80}, {40, 50}, {40, 77}, {41, 46}, {41, 79}, {42, 44}, {42, 76}, {43,
    100}, {44, 98}, {45, 101}, {46, 95}, {47, 99}, {48, 96}, {49, 102}, {50,
    97}, {51, 53}, {51, 96}, {52, 57}, {52, 97}, {53, 101}, {54, 56}, {54,
    102}, {55, 58}, {55, 95}, {56, 99}, {57, 100}, {58, 98}, {59, 67}, {59,
    94}, {60, 71}, {60, 88}, {61, 72}, {61, 93}, {62, 73}, {62, 91}, {63,
    74}, {63, 87}, {64, 69}, {64, 89}, {65, 68}, {65, 92}, {66, 70}, {66,
    90}, {67, 86}, {68, 83}, {69, 85}, {70, 86}, {71, 84}, {72, 84}, {73,
    85}, {74, 83}, {75, 92}, {76, 88}, {77, 91}, {78, 94}, {79, 93}, {80,
    87}, {81, 90}, {82, 89}
}};

template <std::size_t N>
WeightedGraph from_one_based(int n, const std::array<Pair, N>& edges) {
  std::vector<Pair> zero_based;
  zero_based.reserve(N);
  for (auto [u, v] : edges) zero_based.emplace_back(u - 1, v - 1);
  return WeightedGraph::from_pairs(n, zero_based);
}

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

}  // namespace

WeightedGraph petersen_graph() { return from_one_based(10, kPetersenEdges); }
WeightedGraph fig1b_graph() { return from_one_based(10, kFig1bEdges); }
WeightedGraph frucht_graph() { return from_one_based(12, kFruchtEdges); }
WeightedGraph biggs_smith_graph() {
  return from_one_based(102, kBiggsSmithEdges);
}

WeightedGraph paley_graph(int q) {
  if (!is_prime(q) || q % 4 != 1) {
    throw std::invalid_argument("paley modulus must be a prime = 1 mod 4, got " +
                                std::to_string(q));
  }
  std::vector<char> residue(static_cast<std::size_t>(q), 0);
  for (long x = 1; x < q; ++x) residue[static_cast<std::size_t>(x * x % q)] = 1;
  std::vector<Pair> edges;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      if (residue[static_cast<std::size_t>(j - i)]) edges.emplace_back(i, j);
    }
  }
  return WeightedGraph::from_pairs(q, edges);
}

WeightedGraph square_graph(char variant) {
  std::array<double, 4> w{};
  switch (variant) {
    case 'a': w = {1, 2, 3, 4}; break;
    case 'b': w = {1, 2, 2, 2}; break;
    case 'c': w = {1, 2, 1, 2}; break;
    case 'd': w = {1, 1, 1, 1}; break;
    default:
      throw std::invalid_argument(std::string("unknown square variant '") +
                                  variant + "'");
  }
  const std::array<WeightedGraph::Edge, 4> edges = {{
      {0, 1, w[0]}, {1, 2, w[1]}, {2, 3, w[2]}, {0, 3, w[3]},
  }};
  return WeightedGraph::from_edges(4, edges);
}

WeightedGraph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<Pair> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(0, n - 1);
  return WeightedGraph::from_pairs(n, edges);
}

WeightedGraph complete_graph(int n) {
  if (n < 1) throw std::invalid_argument("complete graph needs n >= 1");
  std::vector<Pair> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return WeightedGraph::from_pairs(n, edges);
}

WeightedGraph star_graph(int n) {
  if (n < 2) throw std::invalid_argument("star needs n >= 2");
  std::vector<Pair> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
  return WeightedGraph::from_pairs(n, edges);
}

WeightedGraph generate(std::string_view name, const GeneratorParams& params) {
  if (name == "petersen") return petersen_graph();
  if (name == "fig1b") return fig1b_graph();
  if (name == "frucht") return frucht_graph();
  if (name == "biggs_smith") return biggs_smith_graph();
  if (name == "paley") return paley_graph(params.q);
  if (name == "cycle") return cycle_graph(params.n);
  if (name == "complete") return complete_graph(params.n);
  if (name == "star") return star_graph(params.n);
  if (name == "square") {
    if (params.variant.size() != 1) {
      throw std::invalid_argument("square needs a variant a..d");
    }
    return square_graph(params.variant[0]);
  }
  if (name.size() == 8 && name.starts_with("square_")) {
    return square_graph(name.back());
  }
  throw std::invalid_argument("unknown graph name '" + std::string(name) + "'");
}

std::vector<std::string> generator_names() {
  return {"petersen", "fig1b",    "frucht",   "paley",    "biggs_smith",
          "square_a", "square_b", "square_c", "square_d", "cycle",
          "complete", "star"};
}

}  // namespace isofw
