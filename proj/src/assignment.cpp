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

#include "isofw/assignment.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace isofw {

Permutation max_weight_assignment(const Matrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("assignment: matrix not square");
  const int n = static_cast<int>(x.rows());
  if (n == 0) return Permutation();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Rows of the cost matrix are the columns j of X, columns are images i.
  // 1-based potentials with a sentinel column 0.
  auto cost = [&](int j, int i) { return -x(i - 1, j - 1); };
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> owner(n + 1, 0), way(n + 1, 0);
  for (int j = 1; j <= n; ++j) {
    owner[0] = j;
    int col0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int row0 = owner[col0];
      double delta = kInf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(row0, c) - u[row0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[owner[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    do {
      const int col1 = way[col0];
      owner[col0] = owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<int> map(static_cast<std::size_t>(n));
  for (int c = 1; c <= n; ++c) map[static_cast<std::size_t>(owner[c] - 1)] = c - 1;
  return Permutation(std::move(map));
}

}  // namespace isofw
