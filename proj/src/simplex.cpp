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

#include "isofw/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace isofw {

using Index = Eigen::Index;

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

// [G 1; 0 1] acting on (z, t): the phase-1 rows G z + t >= h and t >= 0.
class Phase1Rows final : public ConstraintRows {
 public:
  explicit Phase1Rows(const ConstraintRows& g) : g_(g) {}
  Index rows() const override { return g_.rows() + 1; }
  Index cols() const override { return g_.cols() + 1; }
  void multiply(const Vector& z, Vector& out) const override {
    const Index d = g_.cols();
    Vector head(g_.rows());
    g_.multiply(z.head(d), head);
    out.resize(rows());
    out.head(g_.rows()) = head.array() + z(d);
    out(g_.rows()) = z(d);
  }
  Vector row(Index i) const override {
    Vector r = Vector::Zero(cols());
    if (i < g_.rows()) r.head(g_.cols()) = g_.row(i);
    r(g_.cols()) = 1.0;
    return r;
  }

 private:
  const ConstraintRows& g_;
};

Vector min_norm_solution(const Matrix& e, const Vector& rhs, Index dim) {
  if (e.rows() == 0) return Vector::Zero(dim);
  // E has full row rank: z = E^T (E E^T)^{-1} rhs.
  const Matrix gram = e * e.transpose();
  return e.transpose() * gram.ldlt().solve(rhs);
}

}  // namespace

// Vertex bookkeeping for one LP: basis rows, explicit basis inverse, point and
// slacks.
class SimplexSolver::Search {
 public:
  Search(const Matrix& eq, const Vector& eq_rhs, const ConstraintRows& ineq,
         const Vector& ineq_rhs, const LpOptions& options)
      : eq_(eq), eq_rhs_(eq_rhs), g_(ineq), h_(ineq_rhs), opt_(options) {
    dim_ = g_.cols();
    me_ = eq_.rows();
    if (eq_.cols() != dim_ && me_ > 0) {
      throw std::invalid_argument("equality and inequality blocks differ in width");
    }
    if (h_.size() != g_.rows() || eq_rhs_.size() != me_) {
      throw std::invalid_argument("right-hand side has the wrong length");
    }
    if (me_ > dim_) throw std::invalid_argument("more equalities than variables");
  }

  Index dim() const { return dim_; }
  bool ready() const { return ready_; }
  const Vector& z() const { return z_; }
  const Vector& slack() const { return slack_; }
  const std::vector<Index>& basis() const { return basis_; }
  const Matrix& binv() const { return binv_; }
  long pivots() const { return pivots_; }

  void crash(const Vector& start, const Vector& c, std::mt19937_64& rng) {
    z_ = start;
    g_.multiply(z_, slack_);
    slack_ -= h_;

    Matrix q(dim_, dim_);
    Index k = 0;
    auto add_row = [&](const Vector& v) {
      Vector r = v;
      for (int pass = 0; pass < 2 && k > 0; ++pass) {
        r -= q.leftCols(k) * (q.leftCols(k).transpose() * r);
      }
      const double norm = r.norm();
      if (norm <= 1e-9 * std::max(1.0, v.norm())) return false;
      q.col(k++) = r / norm;
      return true;
    };
    auto project_out = [&](Vector v) {
      for (int pass = 0; pass < 2 && k > 0; ++pass) {
        v -= q.leftCols(k) * (q.leftCols(k).transpose() * v);
      }
      return v;
    };

    for (Index i = 0; i < me_; ++i) {
      if (!add_row(eq_.row(i).transpose())) {
        throw std::logic_error("equality rows are linearly dependent");
      }
    }
    basis_.clear();
    in_basis_.assign(static_cast<std::size_t>(g_.rows()), 0);

    std::vector<Index> active;
    for (Index i = 0; i < g_.rows(); ++i) {
      if (slack_(i) <= opt_.feas_tol) active.push_back(i);
    }
    std::sort(active.begin(), active.end(),
              [&](Index a, Index b) { return slack_(a) < slack_(b); });
    for (Index i : active) {
      if (k == dim_) break;
      if (add_row(g_.row(i))) take(i);
    }

    std::normal_distribution<double> gauss;
    Vector gp;
    while (k < dim_) {
      Vector p = -project_out(c);
      bool neutral = p.norm() <= 1e-12 * std::max(1.0, c.norm());
      if (neutral) {
        Vector v(dim_);
        for (Index i = 0; i < dim_; ++i) v(i) = gauss(rng);
        p = project_out(v);
      }
      p /= p.cwiseAbs().maxCoeff();
      g_.multiply(p, gp);
      Index hit = ratio(gp, opt_.pivot_tol);
      if (hit < 0 && neutral) {
        p = -p;
        gp = -gp;
        hit = ratio(gp, opt_.pivot_tol);
      }
      if (hit < 0) throw std::runtime_error("LP is unbounded");
      const double t = std::max(slack_(hit), 0.0) / -gp(hit);
      z_ += t * p;
      slack_ += t * gp;
      slack_(hit) = 0.0;
      if (!add_row(g_.row(hit))) {
        throw std::runtime_error("crash: blocking row is dependent");
      }
      take(hit);
    }
    refactor();
  }

  void set_basis(std::vector<Index> rows) {
    basis_.clear();
    in_basis_.assign(static_cast<std::size_t>(g_.rows()), 0);
    for (Index i : rows) take(i);
    refactor();
  }

  LpStatus optimize(const Vector& c) {
    if (!ready_) throw std::logic_error("optimize called without a vertex");
    const double dual_tol = opt_.dual_tol * std::max(1.0, c.cwiseAbs().maxCoeff());
    int degenerate_streak = 0;
    bool bland = false;
    Vector gd;
    for (long iter = 0;; ++iter) {
      if (iter >= opt_.max_iterations) return LpStatus::kIterationLimit;
      if (since_refactor_ >= std::max<Index>(opt_.refactor_interval, dim_) ||
          (since_refactor_ > 0 && since_refactor_ % opt_.refactor_interval == 0 &&
           drifted())) {
        refactor();
      }

      const Vector y = binv_.transpose() * c;
      Index enter = -1;
      double best = 0.0;
      for (Index j = me_; j < dim_; ++j) {
        if (y(j) >= -dual_tol) continue;
        if (bland) {
          if (enter < 0 || basis_[static_cast<std::size_t>(j - me_)] <
                               basis_[static_cast<std::size_t>(enter - me_)]) {
            enter = j;
          }
        } else {
          const double score = y(j) / binv_.col(j).norm();
          if (score < best) {
            best = score;
            enter = j;
          }
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      const Vector d0 = binv_.col(enter);
      const double scale = d0.cwiseAbs().maxCoeff();
      const Vector d = d0 / scale;
      g_.multiply(d, gd);
      const Index leave = bland ? ratio(gd, opt_.pivot_tol) : harris_ratio(gd);
      if (leave < 0) throw std::runtime_error("LP is unbounded");
      const double t = std::max(slack_(leave), 0.0) / -gd(leave);

      z_ += t * d;
      slack_ += t * gd;
      slack_(leave) = 0.0;
      pivot(enter, leave, d0);

      if (t <= 1e-12) {
        if (++degenerate_streak >= opt_.bland_after) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
    }
  }

  // Rebuilds the basis inverse and snaps z onto the vertex.
  void refactor() {
    Matrix b(dim_, dim_);
    Vector rhs(dim_);
    if (me_ > 0) {
      b.topRows(me_) = eq_;
      rhs.head(me_) = eq_rhs_;
    }
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const Index row = me_ + static_cast<Index>(j);
      b.row(row) = g_.row(basis_[j]).transpose();
      rhs(row) = h_(basis_[j]);
    }
    Eigen::PartialPivLU<Matrix> lu(b);
    if (!(lu.rcond() > 1e-13)) throw std::runtime_error("simplex basis is singular");
    binv_ = lu.inverse();
    z_ = binv_ * rhs;
    g_.multiply(z_, slack_);
    slack_ -= h_;
    for (Index i : basis_) slack_(i) = 0.0;
    since_refactor_ = 0;
    ready_ = true;
  }

 private:
  // Row r of the basis matrix.
  Vector basis_row(Index r) const {
    if (r < me_) return eq_.row(r).transpose();
    return g_.row(basis_[static_cast<std::size_t>(r - me_)]);
  }

  // Probes one basis row against the updated inverse and the point.
  bool drifted() const {
    const Index r = pivots_ % dim_;
    const Vector row = basis_row(r);
    Vector e = binv_.transpose() * row;
    e(r) -= 1.0;
    const double rhs = r < me_ ? eq_rhs_(r) : h_(basis_[static_cast<std::size_t>(r - me_)]);
    return e.cwiseAbs().maxCoeff() > 1e-9 || std::abs(row.dot(z_) - rhs) > 1e-10;
  }

  void take(Index i) {
    basis_.push_back(i);
    in_basis_[static_cast<std::size_t>(i)] = 1;
  }

  // Smallest-ratio blocking row, ties to the lowest index (Bland).
  Index ratio(const Vector& gd, double tol) const {
    Index best = -1;
    double best_t = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < gd.size(); ++i) {
      if (in_basis_[static_cast<std::size_t>(i)] || gd(i) >= -tol) continue;
      // Slacks within feas_tol count as zero so that degenerate ties are
      // resolved by index.
      const double t = slack_(i) <= opt_.feas_tol ? 0.0 : slack_(i) / -gd(i);
      if (best < 0 || t < best_t - 1e-12 * std::max(1.0, best_t)) {
        best_t = t;
        best = i;
      }
    }
    return best;
  }

  // Two-pass Harris test: admit rows within feas_tol of the minimum ratio and
  // take the one with the largest pivot.
  Index harris_ratio(const Vector& gd) const {
    double bound = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < gd.size(); ++i) {
      if (in_basis_[static_cast<std::size_t>(i)] || gd(i) >= -opt_.pivot_tol) continue;
      bound = std::min(bound, (std::max(slack_(i), 0.0) + opt_.feas_tol) / -gd(i));
    }
    Index best = -1;
    double best_pivot = 0.0;
    for (Index i = 0; i < gd.size(); ++i) {
      if (in_basis_[static_cast<std::size_t>(i)] || gd(i) >= -opt_.pivot_tol) continue;
      if (std::max(slack_(i), 0.0) / -gd(i) <= bound && -gd(i) > best_pivot) {
        best_pivot = -gd(i);
        best = i;
      }
    }
    return best;
  }

  // Replaces basis position `pos` by inequality row `row`; d0 = binv e_pos.
  void pivot(Index pos, Index row, const Vector& d0) {
    const Vector g = g_.row(row);
    Vector rho = binv_.transpose() * g;
    const double alpha = rho(pos);
    if (std::abs(alpha) < 1e-14) throw std::runtime_error("simplex pivot is singular");
    rho(pos) -= 1.0;
    binv_.noalias() -= (d0 / alpha) * rho.transpose();

    const auto slot = static_cast<std::size_t>(pos - me_);
    in_basis_[static_cast<std::size_t>(basis_[slot])] = 0;
    basis_[slot] = row;
    in_basis_[static_cast<std::size_t>(row)] = 1;
    ++pivots_;
    ++since_refactor_;
  }

  const Matrix& eq_;
  const Vector& eq_rhs_;
  const ConstraintRows& g_;
  const Vector& h_;
  const LpOptions& opt_;
  Index dim_ = 0;
  Index me_ = 0;

  std::vector<Index> basis_;
  std::vector<char> in_basis_;
  Matrix binv_;
  Vector z_;
  Vector slack_;
  bool ready_ = false;
  int since_refactor_ = 0;
  long pivots_ = 0;
};

SimplexSolver::SimplexSolver(Matrix eq, Vector eq_rhs, const ConstraintRows& ineq,
                             Vector ineq_rhs, LpOptions options)
    : eq_(std::move(eq)),
      eq_rhs_(std::move(eq_rhs)),
      ineq_(ineq),
      ineq_rhs_(std::move(ineq_rhs)),
      options_(options) {
  if (eq_.rows() == 0) eq_.resize(0, ineq_.cols());
  search_ = std::make_unique<Search>(eq_, eq_rhs_, ineq_, ineq_rhs_, options_);
}

SimplexSolver::~SimplexSolver() = default;

Index SimplexSolver::dim() const { return search_->dim(); }
bool SimplexSolver::has_vertex() const { return search_->ready(); }
const Vector& SimplexSolver::point() const { return search_->z(); }
long SimplexSolver::pivots() const { return search_->pivots() + phase1_pivots_; }
const std::vector<Index>& SimplexSolver::basis() const { return search_->basis(); }
const Vector& SimplexSolver::slacks() const { return search_->slack(); }

LpStatus SimplexSolver::find_feasible_vertex(std::mt19937_64& rng, const Vector* hint) {
  const Index dim = search_->dim();
  Vector z0;
  if (hint != nullptr) {
    z0 = *hint;
    if (eq_.rows() > 0) {
      z0 += min_norm_solution(eq_, eq_rhs_ - eq_ * z0, dim);
    }
  } else {
    z0 = min_norm_solution(eq_, eq_rhs_, dim);
  }
  if (eq_.rows() > 0) {
    const double resid = (eq_ * z0 - eq_rhs_).cwiseAbs().maxCoeff();
    if (resid > options_.infeasible_tol) {
      phase1_value_ = resid;
      return LpStatus::kInfeasible;
    }
  }

  Vector s;
  ineq_.multiply(z0, s);
  s -= ineq_rhs_;
  const double t0 = std::max(0.0, -s.minCoeff());
  if (t0 <= options_.feas_tol) {
    phase1_value_ = 0.0;
    search_->crash(z0, Vector::Zero(dim), rng);
    return LpStatus::kOptimal;
  }

  // Phase 1 on (z, t).
  Phase1Rows rows(ineq_);
  Matrix eq1 = Matrix::Zero(eq_.rows(), dim + 1);
  eq1.leftCols(dim) = eq_;
  Vector h1(ineq_rhs_.size() + 1);
  h1.head(ineq_rhs_.size()) = ineq_rhs_;
  h1(ineq_rhs_.size()) = 0.0;
  Vector start(dim + 1);
  start.head(dim) = z0;
  start(dim) = t0;
  Vector c1 = Vector::Zero(dim + 1);
  c1(dim) = 1.0;

  Search phase1(eq1, eq_rhs_, rows, h1, options_);
  phase1.crash(start, c1, rng);
  const LpStatus st = phase1.optimize(c1);
  phase1_pivots_ += phase1.pivots();
  if (st != LpStatus::kOptimal) return st;
  phase1_value_ = std::max(0.0, phase1.z()(dim));
  if (phase1_value_ > options_.infeasible_tol) return LpStatus::kInfeasible;

  // Carry the phase-1 basis over: t >= 0 must be in the basis, then drop it.
  const Index t_row = ineq_.rows();
  std::vector<Index> rows1 = phase1.basis();
  auto it = std::find(rows1.begin(), rows1.end(), t_row);
  if (it == rows1.end()) {
    const Index me = eq_.rows();
    Index best = -1;
    double best_coef = 0.0;
    for (Index j = me; j < dim + 1; ++j) {
      const double coef = std::abs(phase1.binv()(dim, j));
      if (coef > best_coef) {
        best_coef = coef;
        best = j;
      }
    }
    if (best < 0) throw std::runtime_error("phase 1: cannot pivot t into the basis");
    rows1[static_cast<std::size_t>(best - me)] = t_row;
    it = rows1.begin() + (best - me);
  }
  rows1.erase(it);
  search_->set_basis(std::move(rows1));
  if (search_->slack().minCoeff() < -1e3 * options_.feas_tol) {
    // Basis drifted; rebuild from the phase-1 point instead.
    search_->crash(phase1.z().head(dim), Vector::Zero(dim), rng);
  }
  return LpStatus::kOptimal;
}

void SimplexSolver::vertex_from_point(const Vector& z, const Vector& c,
                                      std::mt19937_64& rng) {
  search_->crash(z, c, rng);
}

LpStatus SimplexSolver::optimize(const Vector& c) { return search_->optimize(c); }

}  // namespace isofw
