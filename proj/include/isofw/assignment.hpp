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

#include "isofw/graph.hpp"

namespace isofw {

// Permutation maximizing <P, X> = sum_j X(p(j), j) over all permutations,
// by the O(n^3) Hungarian method. X must be square.
Permutation max_weight_assignment(const Matrix& x);

}  // namespace isofw
