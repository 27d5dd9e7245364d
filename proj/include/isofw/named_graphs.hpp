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

#include <string>
#include <string_view>
#include <vector>

#include "isofw/graph.hpp"

namespace isofw {

struct GeneratorParams {
  int q = 0;            // paley modulus
  int n = 0;            // cycle / complete / star size
  std::string variant;  // square: "a".."d"
};

// Named graphs:
//   petersen      Petersen graph, outer 5-cycle 1..5, spokes i -> i+5.
//   fig1b         strongly regular 10-vertex graph drawn with permuted
//                 labels; isomorphic to petersen.
//   frucht        Frucht graph (12 vertices, cubic, trivial automorphisms).
//   paley         Paley graph on Z_q, q prime with q = 1 mod 4.
//   biggs_smith   Biggs-Smith graph (102 vertices, cubic, distance-regular).
//   square_a..d   weighted 4-cycles 1-2-3-4-1 with weights (1,2,3,4),
//                 (1,2,2,2), (1,2,1,2), (1,1,1,1). "square" + variant works too.
//   cycle, complete, star   on params.n vertices (star: vertex 1 is the hub).
// Throws std::invalid_argument for unknown names or bad parameters.
WeightedGraph generate(std::string_view name, const GeneratorParams& params = {});

std::vector<std::string> generator_names();

WeightedGraph petersen_graph();
WeightedGraph fig1b_graph();
WeightedGraph frucht_graph();
WeightedGraph paley_graph(int q);
WeightedGraph biggs_smith_graph();
WeightedGraph square_graph(char variant);
WeightedGraph cycle_graph(int n);
WeightedGraph complete_graph(int n);
WeightedGraph star_graph(int n);

}  // namespace isofw
