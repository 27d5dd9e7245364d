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

#include "isofw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "isofw/assignment.hpp"

namespace isofw {

using Index = Eigen::Index;

namespace {

constexpr double kConsistencyTol = 1e-6;
constexpr int kInteriorSamples = 3;

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

Vector gaussian(Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace

void SolverConfig::validate() const {
  for (double t : {tol_group, tol_friendly, tol_entry, tol_bin, tol_eq, tol_pos}) {
    if (!(t > 0.0)) throw std::invalid_argument("tolerances must be positive");
  }
  if (tol_bin >= 0.5) throw std::invalid_argument("tol_bin must be below 0.5");
  if (max_iters < 1 || max_restarts < 0 || size_cap < 1 || tie_samples < 0 || tie_max_dim < 0) {
    throw std::invalid_argument("iteration and size caps must be at least 1");
  }
  if (!(perturb_min > 0.0 && perturb_min <= perturb_max && perturb_max <= 1.0)) {
    throw std::invalid_argument("perturbation range must lie in (0, 1]");
  }
  if (!(escalate_min > 0.0 && escalate_min <= 1.0)) {
    throw std::invalid_argument("escalate_min must lie in (0, 1]");
  }
  if (stall_window < 0 || !(stall_tol >= 0.0)) {
    throw std::invalid_argument("stall settings must be non-negative");
  }
}

void apply_environment(SolverConfig& cfg) {
  const char* cap = std::getenv("ISOFW_SIZE_CAP");
  if (cap == nullptr || *cap == '\0') return;
  char* end = nullptr;
  const long v = std::strtol(cap, &end, 10);
  if (*end != '\0' || v < 1 || v > 1 << 20) {
    throw std::invalid_argument(std::string("bad ISOFW_SIZE_CAP: ") + cap);
  }
  cfg.size_cap = static_cast<int>(v);
}

// G = N_free as an implicit n^2 x dim operator. Row j * n + i holds the
// coefficients of X(i, j).
class ReducedLp::Rows final : public ConstraintRows {
 public:
  explicit Rows(const ReducedLp& lp) : lp_(lp) {}
  Index rows() const override { return Index{lp_.n_} * lp_.n_; }
  Index cols() const override { return lp_.dim_; }
  void multiply(const Vector& z, Vector& out) const override {
    out.resize(rows());
    Eigen::Map<Matrix> x(out.data(), lp_.n_, lp_.n_);
    x.setZero();
    lp_.accumulate(z, x);
  }
  Vector row(Index r) const override {
    const Index i = r % lp_.n_;
    const Index j = r / lp_.n_;
    Vector out(lp_.dim_);
    for (std::size_t k = 0; k < lp_.ua_.size(); ++k) {
      const Index m = lp_.ua_[k].cols();
      for (Index alpha = 0; alpha < m; ++alpha) {
        out.segment(lp_.offsets_[k] + alpha * m, m) =
            lp_.ua_[k](j, alpha) * lp_.ub_[k].row(i).transpose();
      }
    }
    return out;
  }

 private:
  const ReducedLp& lp_;
};

ReducedLp::ReducedLp(const NullSpaceBasis& basis, const SignEquations& signs,
                     double tol_eq)
    : n_(basis.n()) {
  if (static_cast<int>(signs.blocks.size()) != basis.block_count()) {
    throw std::invalid_argument("sign record does not match the null space basis");
  }
  if (signs.infeasible()) throw std::invalid_argument("sign equations are infeasible");

  x_fixed_ = Matrix::Zero(n_, n_);
  for (int k = 0; k < basis.block_count(); ++k) {
    const BlockSign& s = signs.blocks[idx(k)];
    if (basis.block_size(k) == 1 && s.status == SignStatus::kForced) {
      x_fixed_.noalias() += s.sign * basis.ub(k) * basis.ua(k).transpose();
      fixed_norm2_ += 1.0;
      ++fixed_blocks_;
      continue;
    }
    ua_.push_back(basis.ua(k));
    ub_.push_back(basis.ub(k));
    offsets_.push_back(dim_);
    dim_ += Index{basis.block_size(k)} * basis.block_size(k);
  }

  // Row sums: X 1 = sum U_B S w_A. Column sums: 1^T X = sum w_B^T S U_A^T.
  eq_full_ = Matrix::Zero(2 * n_, dim_);
  const Vector ones = Vector::Ones(n_);
  for (std::size_t k = 0; k < ua_.size(); ++k) {
    const Index m = ua_[k].cols();
    const Vector wa = ua_[k].transpose() * ones;
    const Vector wb = ub_[k].transpose() * ones;
    for (Index alpha = 0; alpha < m; ++alpha) {
      for (Index beta = 0; beta < m; ++beta) {
        const Index c = offsets_[k] + alpha * m + beta;
        eq_full_.col(c).head(n_) = wa(alpha) * ub_[k].col(beta);
        eq_full_.col(c).tail(n_) = wb(beta) * ua_[k].col(alpha);
      }
    }
  }
  eq_full_rhs_.resize(2 * n_);
  eq_full_rhs_.head(n_) = ones - x_fixed_.rowwise().sum();
  eq_full_rhs_.tail(n_) = ones - x_fixed_.colwise().sum().transpose();

  // Independent rows by column-pivoted QR of E^T.
  Index rank = 0;
  if (dim_ > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(eq_full_.transpose());
    // Absolute cutoff: for regular graphs the free rows are pure round-off.
    const double cutoff = 1e-9 * std::max(1.0, eq_full_.cwiseAbs().maxCoeff());
    const Vector diag = qr.matrixR().diagonal().cwiseAbs();
    while (rank < diag.size() && diag(rank) > cutoff) ++rank;
    for (Index i = 0; i < rank; ++i) {
      eq_rows_.push_back(static_cast<int>(qr.colsPermutation().indices()(i)));
    }
    std::sort(eq_rows_.begin(), eq_rows_.end());
  }
  eq_.resize(rank, dim_);
  eq_rhs_.resize(rank);
  for (Index i = 0; i < rank; ++i) {
    eq_.row(i) = eq_full_.row(eq_rows_[idx(static_cast<int>(i))]);
    eq_rhs_(i) = eq_full_rhs_(eq_rows_[idx(static_cast<int>(i))]);
  }

  Vector z = Vector::Zero(dim_);
  if (rank > 0) {
    z = eq_.transpose() * (eq_ * eq_.transpose()).ldlt().solve(eq_rhs_);
  }
  consistency_residual_ =
      dim_ > 0 ? (eq_full_ * z - eq_full_rhs_).cwiseAbs().maxCoeff()
               : eq_full_rhs_.cwiseAbs().maxCoeff();
  consistent_ = consistency_residual_ <= std::max(tol_eq, kConsistencyTol);

  rows_ = std::make_unique<Rows>(*this);
  ineq_rhs_ = -vec(x_fixed_);
}

ReducedLp::~ReducedLp() = default;

const ConstraintRows& ReducedLp::ineq() const { return *rows_; }

void ReducedLp::accumulate(const Vector& z, Eigen::Ref<Matrix> x) const {
  for (std::size_t k = 0; k < ua_.size(); ++k) {
    const Index m = ua_[k].cols();
    const Eigen::Map<const Matrix> s(z.data() + offsets_[k], m, m);
    x.noalias() += ub_[k] * (s * ua_[k].transpose());
  }
}

Matrix ReducedLp::expand(const Vector& z) const {
  if (z.size() != dim_) throw std::invalid_argument("reduced vector has the wrong length");
  Matrix x = x_fixed_;
  accumulate(z, x);
  return x;
}

Vector ReducedLp::project(const Matrix& x) const {
  Vector z(dim_);
  for (std::size_t k = 0; k < ua_.size(); ++k) {
    const Index m = ua_[k].cols();
    Eigen::Map<Matrix> s(z.data() + offsets_[k], m, m);
    s.noalias() = ub_[k].transpose() * x * ua_[k];
  }
  return z;
}

double ReducedLp::eq_residual(const Vector& z) const {
  const Matrix x = expand(z);
  const double rows = (x.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (x.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

double ReducedLp::pos_residual(const Vector& z) const {
  return std::max(0.0, -expand(z).minCoeff());
}

LpOracle::LpOracle(const ReducedLp& lp, LpOptions options)
    : lp_(lp), simplex_(lp.eq(), lp.eq_rhs(), lp.ineq(), lp.ineq_rhs(), options) {}

LpStatus LpOracle::initialize(std::mt19937_64& rng, const Vector* hint) {
  return simplex_.find_feasible_vertex(rng, hint);
}

LpResult LpOracle::minimize(const Vector& c) {
  if (!simplex_.has_vertex()) throw std::logic_error("LP oracle used before phase 1");
  LpResult out;
  out.status = simplex_.optimize(c);
  out.z = simplex_.point();
  return out;
}

LpResult solve_lp(const ReducedLp& lp, const Vector& c, std::mt19937_64& rng) {
  LpOracle oracle(lp);
  const LpStatus st = oracle.initialize(rng);
  if (st != LpStatus::kOptimal) return {st, Vector()};
  return oracle.minimize(c);
}

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kIsomorphic: return "isomorphic";
    case VerdictKind::kNotIsomorphic: return "not-isomorphic";
    case VerdictKind::kInconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(NotIsoReason reason) {
  switch (reason) {
    case NotIsoReason::kNone: return "none";
    case NotIsoReason::kSpectralGate: return "spectral-gate";
    case NotIsoReason::kSignInfeasible: return "sign-infeasible";
    case NotIsoReason::kLpInfeasible: return "lp-infeasible";
  }
  return "?";
}

SolverState make_state(const ReducedLp& lp, const Vector& sigma, int restart) {
  SolverState s;
  s.sigma = sigma;
  s.x = vec(lp.expand(sigma));
  s.f = lp.objective(sigma);
  s.restart = restart;
  return s;
}

std::optional<Vector> initial_point(const ReducedLp& lp, LpOracle& oracle,
                                    std::mt19937_64& rng, std::mt19937_64* rng_perturb) {
  const int n = lp.n();
  Vector z0 = lp.project(Matrix::Constant(n, n, 1.0 / n));
  const bool constant_feasible =
      lp.eq_residual(z0) <= 1e-10 && lp.pos_residual(z0) <= 1e-10;
  if (oracle.initialize(rng, &z0) != LpStatus::kOptimal) return std::nullopt;
  if (!constant_feasible) {
    // Average of several vertices: a point away from the boundary.
    Vector sum = oracle.minimize(Vector::Zero(lp.dim())).z;
    for (int s = 0; s < kInteriorSamples; ++s) {
      sum += oracle.minimize(gaussian(lp.dim(), rng)).z;
    }
    z0 = sum / (kInteriorSamples + 1);
  }
  if (rng_perturb != nullptr) {
    const Vector y = oracle.minimize(gaussian(lp.dim(), *rng_perturb)).z;
    const double eps = std::uniform_real_distribution<double>(0.1, 0.5)(*rng_perturb);
    z0 = (1.0 - eps) * z0 + eps * y;
  }
  return z0;
}

StepResult frank_wolfe_step(SolverState& state, const ReducedLp& lp, LpOracle& oracle,
                            std::mt19937_64* tie_rng, int tie_samples,
                            double tol_progress) {
  StepResult out;
  // grad f = -2x; the fixed part of x is orthogonal to every free direction.
  LpResult y = oracle.minimize(-state.sigma);
  ++state.iter;
  out.status = y.status;
  if (y.status != LpStatus::kOptimal) return out;
  if (tie_rng != nullptr && state.sigma.squaredNorm() <= 1e-24) {
    // Zero cost: every vertex is optimal. Keep the best of a few.
    double best = lp.objective(y.z);
    const double floor = -lp.n() * (1.0 - 1e-12);
    for (int s = 0; s < tie_samples && best > floor; ++s) {
      LpResult cand = oracle.minimize(gaussian(lp.dim(), *tie_rng));
      if (cand.status != LpStatus::kOptimal) continue;
      const double fc = lp.objective(cand.z);
      if (fc < best) {
        best = fc;
        y = std::move(cand);
      }
    }
  }
  out.fw_gap = 2.0 * (state.sigma.dot(y.z) - state.sigma.squaredNorm());
  const double fy = lp.objective(y.z);
  if (fy < state.f - tol_progress * std::max(1.0, std::abs(state.f))) {
    state.sigma = y.z;
    state.x = vec(lp.expand(y.z));
    state.f = fy;
    out.gamma = 1.0;
  }
  return out;
}

std::optional<Permutation> round_to_permutation(const Matrix& x, double tol_bin) {
  const Index n = x.rows();
  if (x.cols() != n) return std::nullopt;
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double v = x(i, j);
      if (v >= 1.0 - tol_bin && v <= 1.0 + tol_bin) {
        if (map[static_cast<std::size_t>(j)] >= 0 || hit[static_cast<std::size_t>(i)]) {
          return std::nullopt;
        }
        map[static_cast<std::size_t>(j)] = static_cast<int>(i);
        hit[static_cast<std::size_t>(i)] = 1;
      } else if (std::abs(v) > tol_bin) {
        return std::nullopt;
      }
    }
    if (map[static_cast<std::size_t>(j)] < 0) return std::nullopt;
  }
  return Permutation(std::move(map));
}

std::optional<Permutation> round_to_permutation(const Vector& x, int n, double tol_bin) {
  if (x.size() != Index{n} * n) throw std::invalid_argument("vector length is not n^2");
  return round_to_permutation(unvec(x, n), tol_bin);
}

bool perturb_restart(SolverState& state, const ReducedLp& lp, LpOracle& oracle,
                     std::mt19937_64& rng, const SolverConfig& cfg) {
  if (state.f <= -lp.n() + 1e-9 * lp.n()) return false;
  const LpResult y = oracle.minimize(gaussian(lp.dim(), rng));
  if (y.status != LpStatus::kOptimal) return false;
  const double eps =
      std::uniform_real_distribution<double>(cfg.perturb_min, cfg.perturb_max)(rng);
  state.sigma = (1.0 - eps) * state.sigma + eps * y.z;
  state.x = vec(lp.expand(state.sigma));
  state.f = lp.objective(state.sigma);
  state.iter = 0;
  ++state.restart;
  return true;
}

namespace {

IsoVerdict not_isomorphic(NotIsoReason reason) {
  IsoVerdict v;
  v.kind = VerdictKind::kNotIsomorphic;
  v.reason = reason;
  return v;
}

IsoVerdict isomorphic(Permutation p) {
  IsoVerdict v;
  v.kind = VerdictKind::kIsomorphic;
  v.certificate = std::move(p);
  return v;
}

// f dropped by less than stall_tol relative over the last stall_window steps.
bool stalled(const std::vector<TraceRow>& trace, int restart, double f,
             const SolverConfig& cfg) {
  const auto w = static_cast<std::size_t>(cfg.stall_window);
  if (w == 0 || trace.size() < w) return false;
  const TraceRow& old = trace[trace.size() - w];
  return old.restart == restart && old.f - f < cfg.stall_tol * std::abs(f);
}

TraceRow trace_row(const SolverState& s, const Matrix& x, const HOperator& h,
                   double fw_gap) {
  TraceRow r;
  r.restart = s.restart;
  r.iter = s.iter;
  r.f = s.f;
  r.fw_gap = fw_gap;
  r.eq_resid = std::max((x.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                        (x.colwise().sum().array() - 1.0).abs().maxCoeff());
  r.pos_resid = std::max(0.0, -x.minCoeff());
  r.h_resid = h.apply(x).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace

CheckReport check(const WeightedGraph& a, const WeightedGraph& b, const SolverConfig& cfg) {
  cfg.validate();
  CheckReport report;
  report.stage = "size";
  if (a.n() != b.n()) {
    report.verdict = not_isomorphic(NotIsoReason::kSpectralGate);
    return report;
  }
  const int n = a.n();
  if (n > cfg.size_cap) {
    throw std::length_error("graph size " + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(cfg.size_cap));
  }

  report.stage = "spectral";
  const SpectralTolerances st{cfg.tol_group, cfg.tol_friendly, cfg.tol_entry};
  report.spectrum_a = decompose(a, st);
  report.spectrum_b = decompose(b, st);
  const GroupedSpectrum& sa = report.spectrum_a;
  const GroupedSpectrum& sb = report.spectrum_b;
  report.comparison = compare_spectra(sa, sb, cfg.tol_group);
  if (!report.comparison.isospectral) {
    report.verdict = not_isomorphic(NotIsoReason::kSpectralGate);
    return report;
  }
  report.rank_h = rank_of_h(sa.mu, n);

  report.stage = "signs";
  const SignEquations signs = sign_equations(sa, sb);
  report.forced_signs = signs.forced_count();
  report.free_signs = signs.free_count();
  if (signs.infeasible()) {
    report.verdict = not_isomorphic(NotIsoReason::kSignInfeasible);
    return report;
  }
  const NullSpaceBasis basis(sa, sb);
  const HOperator h(a.adj(), b.adj());

  if (sa.all_distinct() && signs.all_forced()) {
    // Every isomorphism has S = diag(forced signs), so X* is the only
    // candidate.
    report.stage = "fast-path";
    const Matrix x = build_x_of_s(basis, signs.completion({}));
    const auto p = round_to_permutation(x, cfg.tol_bin);
    if (p && verify_isomorphism(a, b, *p)) {
      SolverState s;
      s.f = -x.squaredNorm();
      report.trace.push_back(trace_row(s, x, h, 0.0));
      if (cfg.snapshots) report.snapshots.push_back({0, 0, x});
      report.verdict = isomorphic(*p);
    } else {
      report.verdict = not_isomorphic(NotIsoReason::kSignInfeasible);
    }
    return report;
  }

  report.stage = "lp";
  const ReducedLp lp(basis, signs, cfg.tol_eq);
  report.lp_dim = lp.dim();
  report.lp_equalities = static_cast<int>(lp.eq().rows());
  if (!lp.consistent()) {
    report.verdict = not_isomorphic(NotIsoReason::kLpInfeasible);
    return report;
  }

  LpOracle oracle(lp);
  std::mt19937_64 rng(cfg.seed);
  std::optional<Vector> z0;
  try {
    z0 = initial_point(lp, oracle, rng);
  } catch (const std::runtime_error&) {
    report.verdict.kind = VerdictKind::kInconclusive;
    report.lp_pivots = oracle.pivots();
    return report;
  }
  if (!z0) {
    report.verdict = not_isomorphic(NotIsoReason::kLpInfeasible);
    report.lp_pivots = oracle.pivots();
    return report;
  }

  report.stage = "frank-wolfe";
  SolverState state = make_state(lp, *z0);
  Vector best_sigma = state.sigma;
  double best_f = state.f;
  double last_f = 0.0;
  std::optional<Permutation> found;

  auto log = [&](const Matrix& x, double gap) {
    state.trace.push_back(trace_row(state, x, h, gap));
    if (cfg.snapshots) report.snapshots.push_back({state.restart, state.iter, x});
  };

  while (!found) {
    try {
      while (state.iter < cfg.max_iters) {
        const Matrix x = unvec(state.x, n);
        TraceRow row = trace_row(state, x, h, 0.0);
        if (cfg.snapshots) report.snapshots.push_back({state.restart, state.iter, x});
        const StepResult step =
            frank_wolfe_step(state, lp, oracle, &rng,
                             lp.dim() <= cfg.tie_max_dim ? cfg.tie_samples : 0);
        ++report.iterations;
        row.fw_gap = step.fw_gap;
        state.trace.push_back(row);
        if (step.status != LpStatus::kOptimal || step.gamma == 0.0) break;
        const Matrix xn = unvec(state.x, n);
        if (auto p = round_to_permutation(xn, cfg.tol_bin); p && verify_isomorphism(a, b, *p)) {
          log(xn, 0.0);
          found = std::move(p);
          break;
        }
        if (stalled(state.trace, state.restart, state.f, cfg)) break;
      }
    } catch (const std::runtime_error&) {
      // Numerical trouble in the LP ends this restart.
    }
    if (found) break;
    if (state.f < best_f) {
      best_f = state.f;
      best_sigma = state.sigma;
    }
    if (auto p = max_weight_assignment(unvec(state.x, n)); verify_isomorphism(a, b, p)) {
      found = std::move(p);
      break;
    }
    if (state.restart >= cfg.max_restarts) break;
    // Landing where the previous restart ended means the perturbation was too
    // small to leave the basin.
    SolverConfig pcfg = cfg;
    if (std::abs(state.f - last_f) <= 1e-6 * std::abs(state.f)) {
      pcfg.perturb_min = std::max(cfg.perturb_max, cfg.escalate_min);
      pcfg.perturb_max = 1.0;
    }
    last_f = state.f;
    try {
      if (!perturb_restart(state, lp, oracle, rng, pcfg)) break;
    } catch (const std::runtime_error&) {
      break;
    }
  }

  report.restarts = state.restart;
  report.trace = std::move(state.trace);
  report.lp_pivots = oracle.pivots();
  if (found) {
    report.verdict = isomorphic(*found);
  } else {
    report.verdict.kind = VerdictKind::kInconclusive;
    report.verdict.best_x = lp.expand(best_sigma);
    report.verdict.best_f = best_f;
  }
  return report;
}

}  // namespace isofw
