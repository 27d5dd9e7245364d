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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
//
//   acceptance               criteria 1-8, Biggs-Smith without the full check
//   acceptance --only 6 --long
//                            Biggs-Smith including check() against a permuted copy

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isofw/named_graphs.hpp"
#include "isofw/relaxation.hpp"
#include "isofw/solver.hpp"
#include "isofw/spectral.hpp"
#include "oracles.hpp"

using namespace isofw;

namespace {

// Pinned tolerances.
constexpr double kEigTol = 1e-8;
constexpr double kMatvecRelTol = 1e-9;
constexpr double kQuadRelTol = 1e-9;
constexpr double kResidTol = 1e-8;
constexpr double kConstTol = 1e-12;
constexpr int kPaleyIterBound = 50;
constexpr double kPaleySeconds = 60.0;
constexpr double kSmallSeconds = 1.0;
constexpr double kBiggsCheapSeconds = 5.0;
constexpr double kBiggsFullSeconds = 1800.0;
constexpr double kInconclusiveRate = 0.05;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failures of one criterion.
struct Outcome {
  std::vector<std::string> failures;
  std::string summary;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

// Every report produced by the criteria, for criterion 8.
struct TraceLog {
  struct Entry {
    std::string name;
    int n;
    bool regular;
    CheckReport report;
  };
  std::vector<Entry> entries;

  const CheckReport& add(std::string name, const WeightedGraph& a, CheckReport r) {
    entries.push_back({std::move(name), a.n(), a.is_regular(), std::move(r)});
    return entries.back().report;
  }
};

SolverConfig with_snapshots(SolverConfig cfg = {}) {
  cfg.snapshots = true;
  return cfg;
}

WeightedGraph permuted(const WeightedGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return apply_permutation(g, oracle::random_permutation(g.n(), rng));
}

bool certified(const CheckReport& r, const WeightedGraph& a, const WeightedGraph& b) {
  return r.verdict.kind == VerdictKind::kIsomorphic && r.verdict.certificate &&
         oracle::maps(a.adj(), b.adj(), r.verdict.certificate->map());
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool is_permutation_matrix(const Matrix& x) {
  return round_to_permutation(x, 1e-9).has_value();
}

int permutation_completions(const WeightedGraph& a, const WeightedGraph& b, int* total) {
  const GroupedSpectrum sa = decompose(a);
  const GroupedSpectrum sb = decompose(b);
  const NullSpaceBasis basis(sa, sb);
  const SignEquations eqs = sign_equations(sa, sb);
  const int free = eqs.free_count();
  int hits = 0;
  for (int mask = 0; mask < (1 << free); ++mask) {
    std::vector<int> signs;
    for (int i = 0; i < free; ++i) signs.push_back((mask >> i) & 1 ? -1 : 1);
    if (is_permutation_matrix(build_x_of_s(basis, eqs.completion(signs)))) ++hits;
  }
  *total = 1 << free;
  return hits;
}

Outcome criterion1(TraceLog& log) {
  Outcome o;
  const WeightedGraph a = petersen_graph();
  const WeightedGraph b = fig1b_graph();
  const auto t0 = Clock::now();
  const CheckReport& r = log.add("petersen/fig1b", a, check(a, b, with_snapshots()));
  const double secs = seconds_since(t0);
  o.require(certified(r, a, b), "verdict is not a verified isomorphism");
  const std::vector<double> lambda{3, 1, -2};
  for (const GroupedSpectrum* s : {&r.spectrum_a, &r.spectrum_b}) {
    o.require(s->mu == std::vector<int>{1, 5, 4}, "mu != [1,5,4]");
    for (std::size_t k = 0; k < lambda.size() && k < s->lambda.size(); ++k) {
      o.require(std::abs(s->lambda[k] - lambda[k]) <= kEigTol, "lambda off");
    }
  }
  o.require(r.rank_h == 58, "rank(H) = " + std::to_string(r.rank_h));
  o.require(secs < kSmallSeconds, "runtime " + fmt("%.2f s", secs));
  o.summary = "rank(H)=" + std::to_string(r.rank_h) + ", iterations " +
              std::to_string(r.iterations) + ", " + fmt("%.3f s", secs);
  return o;
}

Outcome criterion2(TraceLog& log) {
  Outcome o;
  const WeightedGraph a = paley_graph(29);
  int worst = 0;
  double slowest = 0.0;
  std::string iters;
  for (int s = 0; s < 10; ++s) {
    const WeightedGraph b = permuted(a, 100 + static_cast<std::uint64_t>(s));
    SolverConfig cfg = with_snapshots();
    cfg.seed = static_cast<std::uint64_t>(s) + 1;
    const auto t0 = Clock::now();
    const CheckReport& r = log.add("paley seed " + std::to_string(s), a, check(a, b, cfg));
    const double secs = seconds_since(t0);
    const std::string tag = "seed " + std::to_string(s) + ": ";
    o.require(certified(r, a, b), tag + to_string(r.verdict.kind));
    o.require(r.spectrum_a.mu == std::vector<int>{1, 14, 14}, tag + "mu != [1,14,14]");
    o.require(r.rank_h == 448, tag + "rank(H) = " + std::to_string(r.rank_h));
    o.require(r.iterations <= kPaleyIterBound, tag + std::to_string(r.iterations) + " iterations");
    o.require(secs < kPaleySeconds, tag + fmt("%.1f s", secs));
    worst = std::max(worst, r.iterations);
    slowest = std::max(slowest, secs);
    iters += (s ? "," : "") + std::to_string(r.iterations);
  }
  o.summary = "iterations [" + iters + "], max " + std::to_string(worst) + " <= " +
              std::to_string(kPaleyIterBound) + ", slowest " + fmt("%.1f s", slowest);
  return o;
}

Outcome criterion3(TraceLog& log) {
  Outcome o;
  const WeightedGraph a = frucht_graph();
  const WeightedGraph b = permuted(a, 3);
  const GroupedSpectrum s = decompose(a);
  o.require(s.all_distinct(), "eigenvalues not distinct");
  const int unfriendly = count_unfriendly(s);
  const int ambiguous = count_ambiguous(s);
  o.require(unfriendly == 11, "unfriendly = " + std::to_string(unfriendly));
  o.require(ambiguous == 1, "ambiguous = " + std::to_string(ambiguous));
  const auto t0 = Clock::now();
  const CheckReport& r = log.add("frucht", a, check(a, b, with_snapshots()));
  const double secs = seconds_since(t0);
  o.require(r.lp_dim == 1, "free dimension " + std::to_string(r.lp_dim));
  o.require(certified(r, a, b), std::string("verdict ") + to_string(r.verdict.kind));
  o.require(secs < kSmallSeconds, "runtime " + fmt("%.2f s", secs));
  o.summary = std::to_string(unfriendly) + " unfriendly, " + std::to_string(ambiguous) +
              " ambiguous, free dimension " + std::to_string(r.lp_dim) + ", " +
              fmt("%.3f s", secs);
  return o;
}

Outcome criterion4(TraceLog& log) {
  Outcome o;
  int total = 0;
  const WeightedGraph a = square_graph('a');
  const CheckReport& ra = log.add("square a", a, check(a, permuted(a, 4), with_snapshots()));
  o.require(ra.stage == "fast-path" && ra.verdict.kind == VerdictKind::kIsomorphic,
            "(a) not solved on the fast path");
  const int hits_a = permutation_completions(a, a, &total);
  o.require(hits_a == 1 && total == 1, "(a) feasible point not unique");

  const WeightedGraph b = square_graph('b');
  const int hits_b = permutation_completions(b, b, &total);
  o.require(hits_b == 2 && total == 4,
            "(b) " + std::to_string(hits_b) + " of " + std::to_string(total));

  const WeightedGraph c = square_graph('c');
  const int hits_c = permutation_completions(c, c, &total);
  o.require(hits_c == 4 && total == 8,
            "(c) " + std::to_string(hits_c) + " of " + std::to_string(total));

  const GroupedSpectrum d = decompose(square_graph('d'));
  int zero_mu = 0;
  for (int k = 0; k < d.m(); ++k) {
    if (std::abs(d.lambda[static_cast<std::size_t>(k)]) <= kEigTol) zero_mu = d.mu[static_cast<std::size_t>(k)];
  }
  o.require(zero_mu == 2, "(d) multiplicity of 0 is " + std::to_string(zero_mu));

  for (char v : {'b', 'c', 'd'}) {
    const WeightedGraph g = square_graph(v);
    const WeightedGraph h = permuted(g, 5);
    const CheckReport& r = log.add(std::string("square ") + v, g, check(g, h, with_snapshots()));
    o.require(certified(r, g, h), std::string("(") + v + ") check failed");
  }
  o.summary = "(a) fast path, (b) " + std::to_string(hits_b) + "/4, (c) " +
              std::to_string(hits_c) + "/8, (d) mu(0)=" + std::to_string(zero_mu);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const std::vector<double> lambda{2, 1, 0};
  const std::vector<int> mu{2, 1, 3};
  const auto spec = h_spectrum(lambda, mu, lambda, mu);
  std::map<double, long> got(spec.begin(), spec.end());
  const std::map<double, long> want{{4.0, 12}, {1.0, 10}, {0.0, 14}};
  o.require(got == want, "multiplicities differ");
  const long rank = rank_of_h(mu, 6);
  o.require(rank == 22, "rank " + std::to_string(rank));
  std::ostringstream s;
  for (const auto& [v, m] : spec) s << v << ":" << m << " ";
  o.summary = "{" + s.str() + "} rank " + std::to_string(rank);
  return o;
}

Outcome criterion6(TraceLog& log, bool full) {
  Outcome o;
  const WeightedGraph a = biggs_smith_graph();
  auto t0 = Clock::now();
  const GroupedSpectrum s = decompose(a);
  const long rank = rank_of_h(s.mu, a.n());
  const double cheap = seconds_since(t0);
  o.require(s.mu == std::vector<int>{1, 9, 18, 16, 17, 16, 9, 16}, "mu differs");
  o.require(rank == 8860, "rank(H) = " + std::to_string(rank));
  o.require(cheap < kBiggsCheapSeconds, "spectrum took " + fmt("%.2f s", cheap));
  o.summary = "rank(H)=" + std::to_string(rank) + " in " + fmt("%.2f s", cheap);
  if (!full) {
    o.summary += "; full check skipped (run with --long)";
    return o;
  }
  const WeightedGraph b = permuted(a, 102);
  t0 = Clock::now();
  const CheckReport& r = log.add("biggs-smith", a, check(a, b));
  const double secs = seconds_since(t0);
  o.require(certified(r, a, b), std::string("verdict ") + to_string(r.verdict.kind));
  o.require(secs < kBiggsFullSeconds, "full check took " + fmt("%.0f s", secs));
  o.summary += "; check isomorphic after " + std::to_string(r.iterations) +
               " iterations in " + fmt("%.1f s", secs);
  return o;
}

// Random graphs bucketed by rounded spectrum, so that non-isomorphic
// cospectral pairs can be drawn.
std::vector<std::vector<WeightedGraph>> cospectral_buckets(int n, int max_w, int pool,
                                                          std::mt19937_64& rng) {
  std::map<std::vector<long long>, std::vector<WeightedGraph>> by_spectrum;
  for (int i = 0; i < pool; ++i) {
    WeightedGraph g = oracle::random_graph(n, 0.5, max_w, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.adj(), Eigen::EigenvaluesOnly);
    std::vector<long long> key;
    for (double v : es.eigenvalues()) key.push_back(std::llround(v * 1e6));
    auto& bucket = by_spectrum[key];
    bool fresh = true;
    for (const auto& h : bucket) fresh = fresh && !oracle::isomorphic(g.adj(), h.adj());
    if (fresh && bucket.size() < 4) bucket.push_back(std::move(g));
  }
  std::vector<std::vector<WeightedGraph>> out;
  for (auto& [key, bucket] : by_spectrum) {
    if (bucket.size() >= 2) out.push_back(std::move(bucket));
  }
  return out;
}

// Half relabelled copies, half non-isomorphic pairs. Of the latter, most are
// cospectral so that they get past the spectral gate; the rest differ by one
// moved edge.
Outcome criterion7(TraceLog& log) {
  Outcome o;
  std::mt19937_64 rng(2026);
  std::map<std::pair<int, int>, std::vector<std::vector<WeightedGraph>>> buckets;
  for (int n = 4; n <= 7; ++n) {
    for (int w : {1, 2}) buckets[{n, w}] = cospectral_buckets(n, w, 4000, rng);
  }
  int iso = 0, non_iso = 0, cospectral = 0, inconclusive_iso = 0, unsound = 0;
  int by_reason[4] = {0, 0, 0, 0};
  for (int t = 0; t < 500; ++t) {
    const int n = 4 + t % 4;
    const int max_w = (t / 4) % 2 ? 2 : 1;
    const int kind = (t / 8) % 4;
    const auto& pool = buckets[{n, max_w}];
    WeightedGraph a, b;
    if (kind >= 2 && !pool.empty() && (kind == 2 || t % 2 == 0)) {
      const auto& bucket = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
      std::uniform_int_distribution<std::size_t> pick(0, bucket.size() - 1);
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      while (j == i) j = pick(rng);
      a = bucket[i];
      b = apply_permutation(bucket[j], oracle::random_permutation(n, rng));
    } else {
      a = oracle::random_graph(n, 0.5, max_w, rng);
      Matrix adj = apply_permutation(a, oracle::random_permutation(n, rng)).adj();
      if (kind >= 2) {  // move one edge
        std::vector<std::pair<int, int>> on, off;
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) (adj(i, j) != 0 ? on : off).emplace_back(i, j);
        }
        if (!on.empty() && !off.empty()) {
          const auto [i, j] = on[std::uniform_int_distribution<std::size_t>(0, on.size() - 1)(rng)];
          const auto [k, l] = off[std::uniform_int_distribution<std::size_t>(0, off.size() - 1)(rng)];
          adj(k, l) = adj(l, k) = adj(i, j);
          adj(i, j) = adj(j, i) = 0.0;
        }
      }
      b = WeightedGraph(adj);
    }
    const bool truth = oracle::isomorphic(a.adj(), b.adj());
    const CheckReport& r = log.add("sweep " + std::to_string(t), a, check(a, b));
    const VerdictKind k = r.verdict.kind;
    if (truth) {
      ++iso;
      if (k == VerdictKind::kNotIsomorphic) ++unsound;
      if (k == VerdictKind::kIsomorphic && !certified(r, a, b)) ++unsound;
      if (k == VerdictKind::kInconclusive) ++inconclusive_iso;
    } else {
      ++non_iso;
      if (r.comparison.isospectral) ++cospectral;
      if (k == VerdictKind::kIsomorphic) ++unsound;
      if (k == VerdictKind::kNotIsomorphic) ++by_reason[static_cast<int>(r.verdict.reason)];
    }
  }
  const double rate = iso ? static_cast<double>(inconclusive_iso) / iso : 0.0;
  o.require(unsound == 0, std::to_string(unsound) + " unsound verdicts");
  o.require(rate <= kInconclusiveRate, "inconclusive rate " + fmt("%.3f", rate));
  o.require(cospectral >= 100, "only " + std::to_string(cospectral) + " cospectral pairs");
  o.summary = std::to_string(iso) + " isomorphic / " + std::to_string(non_iso) +
              " non-isomorphic pairs (" + std::to_string(cospectral) +
              " cospectral), unsound " + std::to_string(unsound) +
              ", inconclusive on isomorphic " + fmt("%.1f%%", 100 * rate) +
              ", non-isomorphic by gate/sign/lp: " + std::to_string(by_reason[1]) + "/" +
              std::to_string(by_reason[2]) + "/" + std::to_string(by_reason[3]) +
              ", inconclusive " +
              std::to_string(non_iso - by_reason[1] - by_reason[2] - by_reason[3]);
  return o;
}

Outcome criterion8(const TraceLog& log) {
  Outcome o;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  double worst_matvec = 0.0, worst_quad = 0.0;
  int vectors = 0;
  for (int n = 1; n <= 6; ++n) {
    const WeightedGraph a = oracle::random_graph(n, 0.6, 3, rng);
    const WeightedGraph b = oracle::random_graph(n, 0.6, 3, rng);
    const HOperator h(a, b);
    const Matrix dense = oracle::explicit_h(a.adj(), b.adj());
    for (int t = 0; t < 100; ++t, ++vectors) {
      Vector x(n * n);
      for (auto& v : x) v = gauss(rng);
      const Vector want = dense * x;
      const double rel = (h_matvec(h, x) - want).norm() / std::max(want.norm(), 1e-300);
      worst_matvec = std::max(worst_matvec, want.norm() == 0.0 ? 0.0 : rel);
      const Matrix xm = unvec(x, n);
      const double ref = (xm * a.adj() - b.adj() * xm).squaredNorm();
      const double q = x.dot(want);
      worst_quad = std::max(worst_quad, std::abs(q - ref) / std::max(ref, 1e-300));
    }
  }
  o.require(worst_matvec <= kMatvecRelTol, "matvec relative error " + fmt("%.2e", worst_matvec));
  o.require(worst_quad <= kQuadRelTol, "quadratic form relative error " + fmt("%.2e", worst_quad));

  long rows = 0;
  int const_checks = 0;
  for (const auto& e : log.entries) {
    const auto& tr = e.report.trace;
    for (std::size_t i = 0; i < tr.size(); ++i, ++rows) {
      const TraceRow& r = tr[i];
      const std::string at = e.name + " row " + std::to_string(i);
      if (r.eq_resid > kResidTol) o.require(false, at + ": eq_resid " + fmt("%.1e", r.eq_resid));
      if (r.pos_resid > kResidTol) o.require(false, at + ": pos_resid " + fmt("%.1e", r.pos_resid));
      if (r.f < -e.n - kResidTol || r.f > -1.0 + kResidTol) o.require(false, at + ": f out of [-n, -1]");
      if (i > 0 && tr[i - 1].restart == r.restart && r.f > tr[i - 1].f + kResidTol) {
        o.require(false, at + ": f increased within a restart");
      }
    }
    // f == -1 exactly at J/n; the first iterate of a regular pair is J/n
    // unless sign fixing removed it.
    const Matrix j = Matrix::Constant(e.n, e.n, 1.0 / e.n);
    for (const Snapshot& s : e.report.snapshots) {
      const double f = -s.x.squaredNorm();
      const bool at_const = (s.x - j).cwiseAbs().maxCoeff() <= kConstTol;
      if (std::abs(f + 1.0) <= kConstTol) {
        ++const_checks;
        o.require(at_const, e.name + ": f = -1 away from J/n");
      }
      // With more forced signs than the top block, J/n is outside the LP.
      if (e.regular && e.report.forced_signs <= 1 && s.restart == 0 && s.iter == 0) {
        o.require(at_const, e.name + ": regular pair does not start at J/n");
      }
    }
  }
  // With --only 8 there are no runs to inspect.
  o.require(rows > 0 || log.entries.empty(), "no trace rows");
  o.summary = std::to_string(vectors) + " matvecs (max rel err " + fmt("%.1e", worst_matvec) +
              "), quad form max rel err " + fmt("%.1e", worst_quad) + ", " +
              std::to_string(rows) + " trace rows from " + std::to_string(log.entries.size()) +
              " runs, " + std::to_string(const_checks) + " iterates at f=-1 all equal J/n";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  bool full = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--long")) {
      full = true;
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N] [--long]\n";
      return 2;
    }
  }

  TraceLog log;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, [&] { return criterion1(log); }},
      {2, [&] { return criterion2(log); }},
      {3, [&] { return criterion3(log); }},
      {4, [&] { return criterion4(log); }},
      {5, [&] { return criterion5(); }},
      {6, [&] { return criterion6(log, full); }},
      {7, [&] { return criterion7(log); }},
      {8, [&] { return criterion8(log); }},
  };
  const char* names[] = {"",
                         "petersen vs fig1b",
                         "paley(29), 10 seeds",
                         "frucht",
                         "weighted squares",
                         "H eigenvalue table",
                         "biggs-smith",
                         "soundness sweep",
                         "properties and trace invariants"};

  int failed = 0;
  for (const auto& [id, run] : criteria) {
    if (only && id != only) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = o.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << id << "  " << names[id] << ": " << o.summary;
    for (std::size_t i = 0; i < o.failures.size() && i < 5; ++i) std::cout << " | " << o.failures[i];
    if (o.failures.size() > 5) std::cout << " | (" << o.failures.size() - 5 << " more)";
    std::cout << std::endl;
  }
  return failed ? 1 : 0;
}
