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

#include <doctest.h>

#include <cstdlib>
#include <random>

#include "isofw/named_graphs.hpp"
#include "isofw/solver.hpp"
#include "oracles.hpp"

using namespace isofw;

namespace {

struct Setup {
  GroupedSpectrum sa;
  GroupedSpectrum sb;
  NullSpaceBasis basis;
  SignEquations signs;

  Setup(const WeightedGraph& a, const WeightedGraph& b)
      : sa(decompose(a)), sb(decompose(b)), basis(sa, sb), signs(sign_equations(sa, sb)) {}
};

WeightedGraph shuffled(const WeightedGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return apply_permutation(g, oracle::random_permutation(g.n(), rng));
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol_bin = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.perturb_min = 0.6;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.size_cap = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.tie_max_dim = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_restarts = 0;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("size cap from the environment") {
  SolverConfig cfg;
  ::setenv("ISOFW_SIZE_CAP", "9", 1);
  apply_environment(cfg);
  ::unsetenv("ISOFW_SIZE_CAP");
  CHECK(cfg.size_cap == 9);
  CHECK_THROWS_AS(check(petersen_graph(), fig1b_graph(), cfg), std::length_error);
  ::setenv("ISOFW_SIZE_CAP", "lots", 1);
  CHECK_THROWS_AS(apply_environment(cfg), std::invalid_argument);
  ::unsetenv("ISOFW_SIZE_CAP");
}

TEST_CASE("rounding to a permutation") {
  const Permutation p({2, 0, 3, 1});
  Matrix x = p.matrix();
  CHECK(round_to_permutation(x, 1e-6) == p);
  x(0, 0) = 5e-7;
  x(2, 0) = 1.0 - 5e-7;
  CHECK(round_to_permutation(x, 1e-6) == p);
  CHECK(round_to_permutation(vec(x), 4, 1e-6) == p);
  x(0, 0) = 2e-6;
  CHECK_FALSE(round_to_permutation(x, 1e-6));
  CHECK_FALSE(round_to_permutation(Matrix::Constant(4, 4, 0.25), 1e-6));
  Matrix twice = Matrix::Zero(3, 3);
  twice(0, 0) = twice(0, 1) = twice(2, 2) = 1.0;
  CHECK_FALSE(round_to_permutation(twice, 1e-6));
  CHECK_THROWS_AS(round_to_permutation(Vector::Zero(5), 2, 1e-6), std::invalid_argument);
}

TEST_CASE("reduced LP geometry") {
  const WeightedGraph a = frucht_graph();
  const WeightedGraph b = shuffled(a, 3);
  const Setup s(a, b);
  const ReducedLp lp(s.basis, s.signs);
  CHECK(lp.n() == 12);
  CHECK(lp.dim() == s.signs.free_count());
  CHECK(lp.fixed_blocks() == s.signs.forced_count());
  CHECK(lp.consistent());

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Vector z(lp.dim());
  for (auto& v : z) v = g(rng);
  const Matrix x = lp.expand(z);
  CHECK(lp.objective(z) == doctest::Approx(-x.squaredNorm()));
  CHECK((lp.project(x) - z).norm() < 1e-10);
  // x(z) stays in the null space of H
  CHECK(HOperator(a, b).quadratic_form(x) < 1e-16 * std::max(1.0, x.squaredNorm()));
  // residual formulas
  const double eq = std::max((x.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                             (x.colwise().sum().array() - 1.0).abs().maxCoeff());
  CHECK(lp.eq_residual(z) == doctest::Approx(eq));
  CHECK(lp.pos_residual(z) == doctest::Approx(std::max(0.0, -x.minCoeff())));
  // implicit inequality rows are the rows of N_free
  Vector gz(lp.ineq().rows());
  lp.ineq().multiply(z, gz);
  CHECK((gz - oracle::vec(x - lp.x_fixed())).norm() < 1e-10);
  CHECK((lp.ineq_rhs() + oracle::vec(lp.x_fixed())).norm() < 1e-12);
}

TEST_CASE("regular graphs start at the constant matrix") {
  // For doubly stochastic X, ||X||^2 >= 1 with equality only at J/n.
  for (const WeightedGraph& g : {petersen_graph(), paley_graph(13), cycle_graph(7)}) {
    const Setup s(g, shuffled(g, 5));
    const ReducedLp lp(s.basis, s.signs);
    LpOracle oracle(lp);
    std::mt19937_64 rng(1);
    const auto z0 = initial_point(lp, oracle, rng);
    REQUIRE(z0);
    const Matrix x = lp.expand(*z0);
    CHECK(lp.objective(*z0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK((x - Matrix::Constant(g.n(), g.n(), 1.0 / g.n())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("frank-wolfe steps never increase f and end at a vertex") {
  const WeightedGraph a = petersen_graph();
  const Setup s(a, fig1b_graph());
  const ReducedLp lp(s.basis, s.signs);
  LpOracle oracle(lp);
  std::mt19937_64 rng(2);
  SolverState st = make_state(lp, *initial_point(lp, oracle, rng));
  double f = st.f;
  for (int k = 0; k < 20; ++k) {
    const StepResult r = frank_wolfe_step(st, lp, oracle, &rng, 4);
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(st.f <= f + 1e-12);
    CHECK(r.fw_gap >= -1e-9);
    CHECK(st.f >= -10.0 - 1e-9);
    CHECK(lp.eq_residual(st.sigma) < 1e-8);
    CHECK(lp.pos_residual(st.sigma) < 1e-8);
    f = st.f;
    if (r.gamma == 0.0) break;
  }
  CHECK(st.iter > 0);
}

TEST_CASE("perturbation restarts") {
  const WeightedGraph a = cycle_graph(6);
  const Setup s(a, a);
  const ReducedLp lp(s.basis, s.signs);
  LpOracle oracle(lp);
  std::mt19937_64 rng(4);
  const SolverConfig cfg;
  SolverState st = make_state(lp, *initial_point(lp, oracle, rng));
  st.iter = 7;
  CHECK(perturb_restart(st, lp, oracle, rng, cfg));
  CHECK(st.restart == 1);
  CHECK(st.iter == 0);
  CHECK(lp.eq_residual(st.sigma) < 1e-9);
  CHECK(lp.pos_residual(st.sigma) < 1e-9);

  // at a permutation nothing happens
  SolverState done = make_state(lp, lp.project(Matrix::Identity(6, 6)));
  CHECK(done.f == doctest::Approx(-6.0));
  CHECK_FALSE(perturb_restart(done, lp, oracle, rng, cfg));
  CHECK(done.restart == 0);
}

TEST_CASE("verdicts") {
  SUBCASE("isomorphic with a verified certificate") {
    const CheckReport r = check(petersen_graph(), fig1b_graph());
    REQUIRE(r.verdict.kind == VerdictKind::kIsomorphic);
    CHECK(verify_isomorphism(petersen_graph(), fig1b_graph(), *r.verdict.certificate));
    CHECK(oracle::trace_ok(r.trace, 10));
  }
  SUBCASE("spectral gate") {
    const CheckReport r = check(petersen_graph(), star_graph(10));
    CHECK(r.verdict.kind == VerdictKind::kNotIsomorphic);
    CHECK(r.verdict.reason == NotIsoReason::kSpectralGate);
    CHECK(check(petersen_graph(), cycle_graph(5)).verdict.reason == NotIsoReason::kSpectralGate);
  }
  SUBCASE("cospectral mates are never called isomorphic") {
    const std::vector<std::pair<int, int>> star = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    const std::vector<std::pair<int, int>> c4 = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    const CheckReport r = check(WeightedGraph::from_pairs(5, star), WeightedGraph::from_pairs(5, c4));
    CHECK(r.verdict.kind == VerdictKind::kNotIsomorphic);
    CHECK(r.verdict.reason != NotIsoReason::kSpectralGate);
  }
  SUBCASE("all signs forced") {
    const WeightedGraph a = square_graph('a');
    const CheckReport r = check(a, shuffled(a, 2));
    CHECK(r.verdict.kind == VerdictKind::kIsomorphic);
    CHECK(r.stage == "fast-path");
    CHECK(r.iterations == 0);
  }
  SUBCASE("size mismatch") {
    CHECK(check(cycle_graph(5), cycle_graph(6)).verdict.reason == NotIsoReason::kSpectralGate);
  }
}

TEST_CASE("no restarts configured") {
  SolverConfig cfg;
  cfg.max_restarts = 0;
  cfg.max_iters = 1;
  const WeightedGraph a = paley_graph(29);
  const CheckReport r = check(a, shuffled(a, 1), cfg);
  CHECK(r.restarts == 0);
  CHECK(r.iterations <= 1);
  if (r.verdict.kind == VerdictKind::kInconclusive) {
    CHECK(r.verdict.best_x.rows() == 29);
    CHECK(r.verdict.best_f <= -1.0);
  }
}

TEST_CASE("same seed, same run") {
  const WeightedGraph a = paley_graph(13);
  const WeightedGraph b = shuffled(a, 9);
  SolverConfig cfg;
  cfg.seed = 17;
  const CheckReport r1 = check(a, b, cfg);
  const CheckReport r2 = check(a, b, cfg);
  REQUIRE(r1.trace.size() == r2.trace.size());
  for (std::size_t i = 0; i < r1.trace.size(); ++i) {
    CHECK(r1.trace[i].f == r2.trace[i].f);
    CHECK(r1.trace[i].fw_gap == r2.trace[i].fw_gap);
  }
  CHECK(r1.verdict.certificate == r2.verdict.certificate);
}

TEST_CASE("small random pairs against enumeration") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + trial % 3;
    const WeightedGraph a = oracle::random_graph(n, 0.5, trial % 2 ? 3 : 1, rng);
    const WeightedGraph b = trial % 3 ? apply_permutation(a, oracle::random_permutation(n, rng))
                                      : oracle::random_graph(n, 0.5, trial % 2 ? 3 : 1, rng);
    const bool truth = oracle::isomorphic(a.adj(), b.adj());
    const CheckReport r = check(a, b);
    CAPTURE(trial);
    if (r.verdict.kind == VerdictKind::kIsomorphic) {
      CHECK(truth);
      CHECK(oracle::maps(a.adj(), b.adj(), r.verdict.certificate->map()));
    }
    if (r.verdict.kind == VerdictKind::kNotIsomorphic) CHECK_FALSE(truth);
    CHECK(oracle::trace_ok(r.trace, n));
  }
}

TEST_CASE("verdict names") {
  CHECK(std::string(to_string(VerdictKind::kInconclusive)) == "inconclusive");
  CHECK(std::string(to_string(NotIsoReason::kLpInfeasible)) == "lp-infeasible");
  CHECK(std::string(to_string(NotIsoReason::kSignInfeasible)) == "sign-infeasible");
}

}  // TEST_SUITE
