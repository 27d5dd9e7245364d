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

#include <vector>

#include "isofw/graph.hpp"

namespace isofw {

struct SpectralTolerances {
  // Raw eigenvalues closer than group * max(1, ||A||_2) are merged; the
  // relation is closed transitively along the sorted spectrum.
  double group = 1e-8;
  // A column u is friendly iff |<u, 1>| > friendly * sqrt(n).
  double friendly = 1e-8;
  // Entry tolerance for the sorted-multiset comparison of u and -u.
  double entry = 1e-8;
};

// Eigendecomposition of a symmetric adjacency matrix with eigenvalues grouped
// by multiplicity.
//
// Block k holds an orthonormal basis of the k-th eigenspace. The basis is
// normalized so that the projection w[k] = blocks[k]^T 1 is (|w|, 0, ..., 0):
// at most the first column of a block is friendly. Simple eigenvectors carry
// the canonical sign returned by canonical_sign().
struct GroupedSpectrum {
  int n = 0;
  std::vector<double> lambda;  // strictly decreasing
  std::vector<int> mu;         // sums to n
  std::vector<Matrix> blocks;  // n x mu[k]
  std::vector<Vector> w;       // blocks[k]^T 1
  // Per block, per column. Ambiguity is only meaningful for simple
  // eigenvalues; columns of repeated blocks are never flagged ambiguous.
  std::vector<std::vector<bool>> friendly;
  std::vector<std::vector<bool>> ambiguous;

  int m() const { return static_cast<int>(lambda.size()); }
  bool all_distinct() const { return m() == n; }
  // All eigenvalues distinct and every eigenvector friendly.
  bool is_friendly() const;
  // [U^(1), ..., U^(m)] as a single n x n orthogonal matrix.
  Matrix eigenvectors() const;
  // sum_k lambda_k U^(k) U^(k)^T
  Matrix reconstruct() const;
};

// Throws std::runtime_error if the eigensolver does not converge.
GroupedSpectrum decompose(const WeightedGraph& g,
                          const SpectralTolerances& tol = {});
GroupedSpectrum decompose(const Matrix& symmetric,
                          const SpectralTolerances& tol = {});

struct SpectrumComparison {
  bool isospectral = false;
  bool matched_multiplicities = false;
  // Largest gap between the sorted raw eigenvalue lists (infinite when the
  // sizes differ).
  double max_eigenvalue_gap = 0.0;
};

// Isospectral iff the group counts and multiplicities agree and every group
// eigenvalue matches within tol * max(1, max |lambda|).
SpectrumComparison compare_spectra(const GroupedSpectrum& sa,
                                   const GroupedSpectrum& sb,
                                   double tol = 1e-8);

// True iff the sorted entries of u and -u agree within tol_entry, i.e. some
// permutation maps u to -u.
bool classify_ambiguous(const Vector& u, double tol_entry = 1e-8);

// Sign in {+1, -1} that is invariant under permutations of the entries of u:
// the sign of <u, 1> when that is clearly nonzero, otherwise the sign making
// the descending sorted entry vector lexicographically largest. Ambiguous
// vectors get +1.
int canonical_sign(const Vector& u, double tol = 1e-8);

int count_unfriendly(const GroupedSpectrum& s);
int count_ambiguous(const GroupedSpectrum& s);

}  // namespace isofw
