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

#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace isofw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// The inequality block G z >= h of an LP. Implementations may apply G without
// storing it; the solver only needs products G z and single rows.
class ConstraintRows {
 public:
  virtual ~ConstraintRows() = default;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;
  virtual void multiply(const Vector& z, Vector& out) const = 0;
  virtual Vector row(Eigen::Index i) const = 0;
};

class DenseRows final : public ConstraintRows {
 public:
  explicit DenseRows(Matrix g) : g_(std::move(g)) {}
  Eigen::Index rows() const override { return g_.rows(); }
  Eigen::Index cols() const override { return g_.cols(); }
  void multiply(const Vector& z, Vector& out) const override { out.noalias() = g_ * z; }
  Vector row(Eigen::Index i) const override { return g_.row(i).transpose(); }

 private:
  Matrix g_;
};

struct LpOptions {
  double feas_tol = 1e-9;        // slack accepted as zero / admissible violation
  double dual_tol = 1e-9;        // relative to max(1, |c|_inf)
  double pivot_tol = 1e-9;       // smallest |g_i . d| in the ratio test, |d|_inf = 1
  double infeasible_tol = 1e-7;  // phase-1 optimum above this proves infeasibility
  int max_iterations = 200000;
  int refactor_interval = 64;  // pivots between drift probes; refactor at least every max(64, dim)
  int bland_after = 25;  // consecutive degenerate pivots before Bland's rule
};

enum class LpStatus { kOptimal, kInfeasible, kIterationLimit };

const char* to_string(LpStatus s);

// Two-phase primal simplex for
//
//   min c^T z   s.t.   E z = e,   G z >= h,   z free,
//
// where E has full row rank and the feasible region is bounded. A vertex is
// described by its basis: all rows of E plus dim - rank(E) linearly
// independent active rows of G. The solver keeps the current vertex between
// calls, so consecutive optimize() calls with different costs warm-start.
class SimplexSolver {
 public:
  SimplexSolver(Matrix eq, Vector eq_rhs, const ConstraintRows& ineq,
                Vector ineq_rhs, LpOptions options = {});
  ~SimplexSolver();
  SimplexSolver(const SimplexSolver&) = delete;
  SimplexSolver& operator=(const SimplexSolver&) = delete;

  Eigen::Index dim() const;

  // Phase 1: minimizes a single artificial violation t subject to
  // G z + t >= h, t >= 0. Starts from the projection of `hint` onto E z = e
  // when given, else from the minimum-norm solution of E z = e.
  LpStatus find_feasible_vertex(std::mt19937_64& rng, const Vector* hint = nullptr);

  // Moves from the feasible point z to a vertex along directions that do not
  // increase c^T z, then installs that vertex.
  void vertex_from_point(const Vector& z, const Vector& c, std::mt19937_64& rng);

  // Phase 2 from the current vertex.
  LpStatus optimize(const Vector& c);

  bool has_vertex() const;
  const Vector& point() const;
  // Phase-1 optimum of the most recent find_feasible_vertex() call.
  double infeasibility() const { return phase1_value_; }
  long pivots() const;
  // Rows of G in the current basis.
  const std::vector<Eigen::Index>& basis() const;
  // G z - h at the current point.
  const Vector& slacks() const;

 private:
  class Search;

  Matrix eq_;
  Vector eq_rhs_;
  const ConstraintRows& ineq_;
  Vector ineq_rhs_;
  LpOptions options_;
  std::unique_ptr<Search> search_;
  double phase1_value_ = 0.0;
  long phase1_pivots_ = 0;
};

}  // namespace isofw
