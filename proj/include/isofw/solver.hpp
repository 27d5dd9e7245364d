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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "isofw/graph.hpp"
#include "isofw/relaxation.hpp"
#include "isofw/simplex.hpp"
#include "isofw/spectral.hpp"

namespace isofw {

struct SolverConfig {
  double tol_group = 1e-8;
  double tol_friendly = 1e-8;
  double tol_entry = 1e-8;
  double tol_bin = 1e-6;
  double tol_eq = 1e-8;
  double tol_pos = 1e-8;
  int max_iters = 200;     // LMO calls per restart
  int max_restarts = 20;
  std::uint64_t seed = 1;
  int size_cap = 128;
  double perturb_min = 0.1;
  double perturb_max = 0.5;
  double escalate_min = 0.9;  // perturbation range after a restart lands in the same basin
  int stall_window = 5;       // 0 disables stall detection
  double stall_tol = 0.01;    // relative decrease of f over stall_window steps
  int tie_samples = 4;     // extra vertices drawn when the LMO cost is zero
  int tie_max_dim = 1024;  // skip tie sampling above this LP dimension
  bool snapshots = false;  // keep X^(k) for every trace row
  std::optional<std::filesystem::path> trace_path;  // written by the CLI

  // Throws std::invalid_argument on non-positive tolerances, caps below one
  // or an empty perturbation range.
  void validate() const;
};

// Reads ISOFW_SIZE_CAP into cfg.size_cap when set.
void apply_environment(SolverConfig& cfg);

// The LP of the relaxation in reduced coordinates.
//
//   x(z) = x_fixed + N_free z
//
// x_fixed collects the simple eigenvalue blocks whose sign is forced; the
// free coordinates z are the remaining entries of S. Constraints are the
// row and column sums of X (E z = d after removing dependent rows) and
// X >= 0 (G z >= h with G = N_free applied implicitly).
class ReducedLp {
 public:
  ReducedLp(const NullSpaceBasis& basis, const SignEquations& signs,
            double tol_eq = 1e-8);
  ~ReducedLp();
  ReducedLp(const ReducedLp&) = delete;
  ReducedLp& operator=(const ReducedLp&) = delete;

  int n() const { return n_; }
  Eigen::Index dim() const { return dim_; }
  int fixed_blocks() const { return fixed_blocks_; }

  // All 2n sum constraints: rows 0..n-1 are row sums, n..2n-1 column sums.
  const Matrix& eq_full() const { return eq_full_; }
  const Vector& eq_full_rhs() const { return eq_full_rhs_; }
  // Linearly independent subset used by the simplex.
  const Matrix& eq() const { return eq_; }
  const Vector& eq_rhs() const { return eq_rhs_; }
  const std::vector<int>& eq_rows() const { return eq_rows_; }
  // False when the dropped rows contradict the kept ones.
  bool consistent() const { return consistent_; }
  double consistency_residual() const { return consistency_residual_; }

  const ConstraintRows& ineq() const;
  const Vector& ineq_rhs() const { return ineq_rhs_; }

  const Matrix& x_fixed() const { return x_fixed_; }
  Matrix expand(const Vector& z) const;
  // N_free^T vec(X - x_fixed)
  Vector project(const Matrix& x) const;
  // -||x(z)||_F^2; x_fixed is orthogonal to the free columns.
  double objective(const Vector& z) const { return -(fixed_norm2_ + z.squaredNorm()); }

  // max |row/column sum - 1| and max(0, -min entry) of x(z).
  double eq_residual(const Vector& z) const;
  double pos_residual(const Vector& z) const;

 private:
  class Rows;

  // x += sum over free blocks of U_B S U_A^T
  void accumulate(const Vector& z, Eigen::Ref<Matrix> x) const;

  int n_ = 0;
  Eigen::Index dim_ = 0;
  int fixed_blocks_ = 0;
  std::vector<Matrix> ua_;  // free blocks
  std::vector<Matrix> ub_;
  std::vector<Eigen::Index> offsets_;
  Matrix x_fixed_;
  double fixed_norm2_ = 0.0;
  Matrix eq_full_;
  Vector eq_full_rhs_;
  Matrix eq_;
  Vector eq_rhs_;
  std::vector<int> eq_rows_;
  bool consistent_ = true;
  double consistency_residual_ = 0.0;
  std::unique_ptr<Rows> rows_;
  Vector ineq_rhs_;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Vector z;
};

// Warm-started LP oracle over a ReducedLp.
class LpOracle {
 public:
  explicit LpOracle(const ReducedLp& lp, LpOptions options = {});

  // Phase 1. kInfeasible proves the LP has no feasible point.
  LpStatus initialize(std::mt19937_64& rng, const Vector* hint = nullptr);
  bool initialized() const { return simplex_.has_vertex(); }
  // Vertex minimizing c^T z, starting from the previous vertex.
  LpResult minimize(const Vector& c);
  double infeasibility() const { return simplex_.infeasibility(); }
  long pivots() const { return simplex_.pivots(); }

 private:
  const ReducedLp& lp_;
  SimplexSolver simplex_;
};

// Cold-start convenience: phase 1, then phase 2 on c.
LpResult solve_lp(const ReducedLp& lp, const Vector& c, std::mt19937_64& rng);

enum class VerdictKind { kIsomorphic, kNotIsomorphic, kInconclusive };
enum class NotIsoReason { kNone, kSpectralGate, kSignInfeasible, kLpInfeasible };

const char* to_string(VerdictKind kind);
const char* to_string(NotIsoReason reason);

struct IsoVerdict {
  VerdictKind kind = VerdictKind::kInconclusive;
  NotIsoReason reason = NotIsoReason::kNone;
  std::optional<Permutation> certificate;  // kIsomorphic
  Matrix best_x;                           // kInconclusive
  double best_f = 0.0;
};

struct TraceRow {
  int restart = 0;
  int iter = 0;
  double f = 0.0;
  double fw_gap = 0.0;
  double eq_resid = 0.0;
  double pos_resid = 0.0;
  double h_resid = 0.0;
};

struct Snapshot {
  int restart = 0;
  int iter = 0;
  Matrix x;
};

struct SolverState {
  Vector sigma;  // free reduced coordinates
  Vector x;      // vec(x_fixed + N_free sigma)
  double f = 0.0;
  int iter = 0;
  int restart = 0;
  std::vector<TraceRow> trace;
};

SolverState make_state(const ReducedLp& lp, const Vector& sigma, int restart = 0);

// Starting point: the projection of J/n when it is feasible, else the mean of
// the phase-1 vertex and a few random vertices. With rng_perturb the point is
// additionally mixed with a random vertex. nullopt when the LP is infeasible.
std::optional<Vector> initial_point(const ReducedLp& lp, LpOracle& oracle,
                                    std::mt19937_64& rng,
                                    std::mt19937_64* rng_perturb = nullptr);

struct StepResult {
  double gamma = 0.0;  // 0 or 1
  double fw_gap = 0.0;
  LpStatus status = LpStatus::kOptimal;
};

// One Frank-Wolfe step on f = -||x||^2. The concave line search is decided at
// the endpoints: gamma = 1 iff f(y) < f(x) - tol_progress * max(1, |f(x)|).
// When the LMO cost vanishes (sigma == 0) and tie_rng is given, the LMO
// answer is the best of the current vertex and tie_samples random vertices.
StepResult frank_wolfe_step(SolverState& state, const ReducedLp& lp, LpOracle& oracle,
                            std::mt19937_64* tie_rng = nullptr, int tie_samples = 0,
                            double tol_progress = 1e-10);

// Permutation read off a near-binary matrix: every row and column must have
// exactly one entry >= 1 - tol_bin with the rest <= tol_bin.
std::optional<Permutation> round_to_permutation(const Vector& x, int n, double tol_bin);
std::optional<Permutation> round_to_permutation(const Matrix& x, double tol_bin);

// x' = (1 - eps) x + eps y with y the vertex of a random cost and eps drawn
// from [perturb_min, perturb_max]. Bumps state.restart and resets state.iter.
// A state already at f = -n is returned unchanged (false).
bool perturb_restart(SolverState& state, const ReducedLp& lp, LpOracle& oracle,
                     std::mt19937_64& rng, const SolverConfig& cfg);

struct CheckReport {
  IsoVerdict verdict;
  std::string stage;  // last pipeline stage reached
  GroupedSpectrum spectrum_a;
  GroupedSpectrum spectrum_b;
  SpectrumComparison comparison;
  long rank_h = -1;
  int forced_signs = 0;
  int free_signs = 0;
  Eigen::Index lp_dim = 0;
  int lp_equalities = 0;
  int iterations = 0;  // LMO calls over all restarts
  int restarts = 0;
  long lp_pivots = 0;
  std::vector<TraceRow> trace;
  std::vector<Snapshot> snapshots;
};

// Full pipeline: spectral gate, sign fixing and the all-forced fast path,
// phase-1 feasibility, Frank-Wolfe with restarts, rounding and exact
// verification. Throws std::length_error when n exceeds cfg.size_cap.
CheckReport check(const WeightedGraph& a, const WeightedGraph& b,
                  const SolverConfig& cfg = {});

}  // namespace isofw
