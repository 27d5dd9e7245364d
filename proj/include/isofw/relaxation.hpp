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

#include <span>
#include <utility>
#include <vector>

#include "isofw/graph.hpp"
#include "isofw/spectral.hpp"

namespace isofw {

// Column-stacking vectorization: vec(X)[j * n + i] == X(i, j).
// These two functions are the only place where matrix entries are mapped to
// positions of an n^2 vector.
Vector vec(const Matrix& x);
Matrix unvec(const Vector& x, int n);

// H = (A (x) I - I (x) B)^2 applied matrix-free. With the vec convention above,
// (A (x) I - I (x) B) vec(X) = vec(X A - B X), so H x costs two O(n^3)
// products and H itself is never formed.
class HOperator {
 public:
  HOperator(Matrix a, Matrix b);
  HOperator(const WeightedGraph& a, const WeightedGraph& b)
      : HOperator(a.adj(), b.adj()) {}

  int n() const { return static_cast<int>(a_.rows()); }
  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }

  // X A - B X
  Matrix commutator(const Matrix& x) const { return x * a_ - b_ * x; }
  // H vec(X), returned as a matrix.
  Matrix apply(const Matrix& x) const { return commutator(commutator(x)); }
  Vector apply(const Vector& x) const;
  // x^T H x = ||X A - B X||_F^2
  double quadratic_form(const Matrix& x) const {
    return commutator(x).squaredNorm();
  }

 private:
  Matrix a_;
  Matrix b_;
};

Vector h_matvec(const HOperator& h, const Vector& x);

// n^2 - sum_k mu_k^2. Throws std::invalid_argument if mu does not sum to n.
long rank_of_h(std::span<const int> mu, int n);

// table(i, j) = (lambda_a[i] - lambda_b[j])^2
Matrix h_eigenvalue_table(std::span<const double> lambda_a,
                          std::span<const double> lambda_b);

// Distinct eigenvalues of H with multiplicities, from the table and the
// multiplicities of A and B. Values within tol are merged. Sorted decreasing.
std::vector<std::pair<double, long>> h_spectrum(std::span<const double> lambda_a,
                                                std::span<const int> mu_a,
                                                std::span<const double> lambda_b,
                                                std::span<const int> mu_b,
                                                double tol = 1e-9);

// Block-diagonal S with S^(k) of size mu_k x mu_k. The reduced coordinate
// vector sigma stacks the blocks in order, each block column-major.
struct SBlockMatrix {
  std::vector<Matrix> blocks;

  static SBlockMatrix identity(std::span<const int> mu);
  static SBlockMatrix from_sigma(const Vector& sigma, std::span<const int> mu);
  Vector to_sigma() const;
  Matrix dense() const;
};

// Orthonormal basis of null(H) for an isospectral pair, kept in factored
// form. Column (k, alpha, beta) is u_A^(k,alpha) (x) u_B^(k,beta), i.e.
// vec(u_B^(k,beta) u_A^(k,alpha)^T), and sits at reduced coordinate
// offset(k) + alpha * mu_k + beta.
class NullSpaceBasis {
 public:
  // Throws std::invalid_argument unless the multiplicities match.
  NullSpaceBasis(const GroupedSpectrum& a, const GroupedSpectrum& b);

  int n() const { return n_; }
  int block_count() const { return static_cast<int>(ua_.size()); }
  int block_size(int k) const { return static_cast<int>(ua_[static_cast<std::size_t>(k)].cols()); }
  int offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
  // Total dimension r = sum_k mu_k^2.
  int dim() const { return dim_; }
  std::vector<int> mu() const;
  const Matrix& ua(int k) const { return ua_[static_cast<std::size_t>(k)]; }
  const Matrix& ub(int k) const { return ub_[static_cast<std::size_t>(k)]; }

  // X = sum_k U_B^(k) S^(k) U_A^(k)^T
  Matrix expand(const Vector& sigma) const;
  // sigma with S^(k) = U_B^(k)^T X U_A^(k); the orthogonal projection of vec(X)
  // onto the null space, in reduced coordinates.
  Vector project(const Matrix& x) const;
  // Explicit column c as an n^2 vector.
  Vector column(int c) const;
  // Row (i, j) of N, i.e. the coefficients of X(i, j) in sigma.
  Vector row(int i, int j) const;

 private:
  int n_ = 0;
  int dim_ = 0;
  std::vector<Matrix> ua_;
  std::vector<Matrix> ub_;
  std::vector<int> offsets_;
};

// U_B S U_A^T. Throws std::invalid_argument on block shape mismatch.
Matrix build_x_of_s(const NullSpaceBasis& basis, const SBlockMatrix& s);

// U_B R U_A^T for block-orthogonal R. Throws std::invalid_argument for
// non-isospectral inputs or blocks that are not orthogonal to 1e-9.
Matrix orthogonal_minimizer(const GroupedSpectrum& sa, const GroupedSpectrum& sb,
                            std::span<const Matrix> r_blocks);

enum class SignStatus { kForced, kFree, kInfeasible };

struct BlockSign {
  SignStatus status = SignStatus::kFree;
  int sign = 0;  // +1 / -1 when forced
};

struct SignTolerances {
  // |w| at or below zero * sqrt(n) counts as zero.
  double zero = 1e-8;
  // Magnitudes and sorted eigenvector entries must agree within
  // match * sqrt(n) (resp. match) to be considered equal.
  double match = 1e-6;
};

// Row and column sum conditions for 1x1 blocks: s_k w_A[k] = w_B[k]. Forced
// when both are nonzero with equal magnitude, infeasible when the magnitudes
// differ, free when both vanish.
std::vector<BlockSign> sign_from_projections(std::span<const double> w_a,
                                             std::span<const double> w_b,
                                             double zero_tol, double match_tol);

struct SignEquations {
  std::vector<BlockSign> blocks;

  bool infeasible() const;
  bool all_forced() const;
  int forced_count() const;
  int free_count() const;
  // Diagonal S when every block is 1x1, using `free_sign` for free blocks.
  SBlockMatrix completion(std::span<const int> free_signs) const;
};

// Per eigenvalue group: repeated groups are free. Simple eigenvalues are
// decided by the projections w when friendly; otherwise by matching the
// sorted entries of u_B against those of +u_A and -u_A (forced when exactly
// one matches, free when both do, infeasible when neither does).
SignEquations sign_equations(const GroupedSpectrum& sa, const GroupedSpectrum& sb,
                             const SignTolerances& tol = {});

}  // namespace isofw
