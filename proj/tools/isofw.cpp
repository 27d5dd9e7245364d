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

// isofw command line: check, gen, permute, spectrum, heatmap, bench.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "isofw/graph.hpp"
#include "isofw/named_graphs.hpp"
#include "isofw/relaxation.hpp"
#include "isofw/solver.hpp"
#include "isofw/spectral.hpp"
#include "isofw/trace.hpp"

namespace fs = std::filesystem;
using namespace isofw;

namespace {

constexpr int kExitError = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kIsomorphic: return 0;
    case VerdictKind::kNotIsomorphic: return 1;
    case VerdictKind::kInconclusive: return 2;
  }
  return kExitError;
}

WeightedGraph load(const fs::path& path) {
  if (!fs::exists(path)) throw IoError(path.string() + ": no such file");
  try {
    return read_graph(path);
  } catch (const ParseError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(10);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

struct SolverFlags {
  SolverConfig cfg;
  std::string trace;
  std::string snapshots;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--tol-group", cfg.tol_group, "eigenvalue grouping tolerance")
        ->capture_default_str();
    cmd->add_option("--tol-bin", cfg.tol_bin, "binary rounding tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iters", cfg.max_iters, "Frank-Wolfe steps per restart")
        ->capture_default_str();
    cmd->add_option("--max-restarts", cfg.max_restarts, "perturbation restarts")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  }

  SolverConfig resolved() const {
    SolverConfig c = cfg;
    apply_environment(c);
    c.snapshots = !snapshots.empty();
    if (!trace.empty()) c.trace_path = trace;
    c.validate();
    return c;
  }
};

void print_spectrum(std::ostream& out, const char* label, const GroupedSpectrum& s) {
  out << label << " lambda = [" << join(s.lambda) << "]\n";
  out << label << " mu     = [" << join(s.mu) << "]\n";
}

int cmd_check(const std::string& path_a, const std::string& path_b, const SolverFlags& flags) {
  const SolverConfig cfg = flags.resolved();
  const WeightedGraph a = load(path_a);
  const WeightedGraph b = load(path_b);
  const CheckReport r = check(a, b, cfg);

  std::cout << "verdict: " << to_string(r.verdict.kind);
  if (r.verdict.reason != NotIsoReason::kNone) {
    std::cout << " (" << to_string(r.verdict.reason) << ")";
  }
  std::cout << "\n";
  if (r.verdict.certificate) {
    std::cout << "π = [ " << join(r.verdict.certificate->one_based()) << " ]\n";
  }
  if (r.spectrum_a.n > 0) print_spectrum(std::cout, "A", r.spectrum_a);
  if (r.spectrum_b.n > 0) print_spectrum(std::cout, "B", r.spectrum_b);
  if (r.rank_h >= 0) std::cout << "rank(H) = " << r.rank_h << "\n";
  if (r.forced_signs + r.free_signs > 0) {
    std::cout << "signs: " << r.forced_signs << " forced, " << r.free_signs << " free\n";
  }
  if (r.lp_dim > 0) {
    std::cout << "lp: " << r.lp_dim << " variables, " << r.lp_equalities
              << " equalities, " << r.lp_pivots << " pivots\n";
  }
  std::cout << "iterations: " << r.iterations << " (restarts " << r.restarts << ")\n";
  if (r.verdict.kind == VerdictKind::kInconclusive && r.verdict.best_x.size() > 0) {
    std::cout << "best f = " << std::setprecision(12) << r.verdict.best_f << "\n";
  }

  if (cfg.trace_path) {
    std::ofstream out = open_out(*cfg.trace_path);
    write_trace(out, r.trace, cfg.seed);
  }
  if (!flags.snapshots.empty()) {
    std::ofstream out = open_out(flags.snapshots);
    write_snapshots(out, r.snapshots);
  }
  return exit_code(r.verdict.kind);
}

int cmd_gen(const std::string& name, const GeneratorParams& params, const std::string& out) {
  WeightedGraph g;
  try {
    g = generate(name, params);
  } catch (const std::invalid_argument& e) {
    std::string names;
    for (const auto& n : generator_names()) names += " " + n;
    throw std::invalid_argument(std::string(e.what()) + " (known:" + names + ")");
  }
  if (out.empty() || out == "-") {
    format_graph(g, std::cout);
  } else {
    write_graph(g, out);
  }
  return 0;
}

int cmd_permute(const std::string& in, std::uint64_t seed, std::string out,
                std::string sidecar) {
  const WeightedGraph g = load(in);
  std::mt19937_64 rng(seed);
  std::vector<int> map(static_cast<std::size_t>(g.n()));
  std::iota(map.begin(), map.end(), 0);
  std::shuffle(map.begin(), map.end(), rng);
  const Permutation p(map);
  if (out.empty()) out = fs::path(in).replace_extension("").string() + ".perm.g";
  if (sidecar.empty()) sidecar = out + ".pi";
  write_graph(apply_permutation(g, p), out);
  write_permutation(p, sidecar);
  std::cout << out << "\n" << sidecar << "\n";
  return 0;
}

int cmd_spectrum(const std::vector<std::string>& paths, double tol_group,
                 const std::string& csv, bool rank_h) {
  SpectralTolerances tol;
  tol.group = tol_group;
  std::vector<GroupedSpectrum> specs;
  for (const auto& p : paths) specs.push_back(decompose(load(p), tol));

  for (std::size_t g = 0; g < specs.size(); ++g) {
    const GroupedSpectrum& s = specs[g];
    std::cout << paths[g] << ": n = " << s.n << ", " << s.m() << " distinct eigenvalues\n";
    std::cout << "  " << std::setw(4) << "k" << std::setw(18) << "lambda" << std::setw(6)
              << "mu" << "\n";
    for (int k = 0; k < s.m(); ++k) {
      std::cout << "  " << std::setw(4) << k + 1 << std::setw(18) << std::setprecision(10)
                << s.lambda[static_cast<std::size_t>(k)] << std::setw(6)
                << s.mu[static_cast<std::size_t>(k)] << "\n";
    }
    std::cout << "  unfriendly: " << count_unfriendly(s) << "\n";
    std::cout << "  ambiguous:  " << count_ambiguous(s) << "\n";
  }

  if (rank_h) {
    if (specs.size() != 2) throw std::invalid_argument("--rank-h needs two graphs");
    const auto& sa = specs[0];
    const auto& sb = specs[1];
    if (sa.n != sb.n) throw std::invalid_argument("graphs have different sizes");
    long zero = 0;
    for (const auto& [value, mult] : h_spectrum(sa.lambda, sa.mu, sb.lambda, sb.mu)) {
      if (value <= 1e-9) zero += mult;
    }
    std::cout << "rank(H) = " << static_cast<long>(sa.n) * sa.n - zero << "\n";
  }

  if (!csv.empty()) {
    std::ofstream out = open_out(csv);
    out << "graph,k,lambda,mu\n" << std::setprecision(17);
    for (std::size_t g = 0; g < specs.size(); ++g) {
      for (int k = 0; k < specs[g].m(); ++k) {
        out << g << ',' << k + 1 << ',' << specs[g].lambda[static_cast<std::size_t>(k)]
            << ',' << specs[g].mu[static_cast<std::size_t>(k)] << '\n';
      }
    }
  }
  return 0;
}

int cmd_heatmap(const std::string& source, const std::string& prefix, int only_iter) {
  std::ifstream in(source);
  if (!in) throw IoError(source + ": no such file");
  std::vector<Snapshot> snaps;
  try {
    snaps = read_snapshots(in);
  } catch (const ParseError& e) {
    throw IoError(source + ": " + e.what());
  }
  if (snaps.empty()) throw std::invalid_argument(source + ": no snapshots present");
  int written = 0;
  for (const Snapshot& s : snaps) {
    if (only_iter >= 0 && s.iter != only_iter) continue;
    const std::string stem = prefix + "_r" + std::to_string(s.restart) + "_k" + std::to_string(s.iter);
    write_matrix_csv(s.x, stem + ".csv");
    write_pgm(s.x, stem + ".pgm");
    std::cout << stem << ".pgm\n";
    ++written;
  }
  if (written == 0) throw std::invalid_argument("no snapshot matches --iter");
  return 0;
}

// Batch file: one pair of graph paths per line, '#' comments allowed.
int cmd_bench(const std::string& batch, int jobs, const SolverFlags& flags) {
  std::ifstream in(batch);
  if (!in) throw IoError(batch + ": no such file");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::string line; std::getline(in, line);) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw IoError(batch + ": line needs two paths");
    const fs::path base = fs::path(batch).parent_path();
    auto resolve = [&](const std::string& p) {
      return fs::path(p).is_absolute() ? p : (base / p).string();
    };
    pairs.emplace_back(resolve(a), resolve(b));
  }
  const SolverConfig cfg = flags.resolved();

  struct Row {
    std::string verdict = "error";
    int iterations = 0;
    int restarts = 0;
    double seconds = 0.0;
    std::string message;
  };
  std::vector<Row> rows(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < pairs.size();) {
      Row& row = rows[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const CheckReport r = check(load(pairs[i].first), load(pairs[i].second), cfg);
        row.verdict = to_string(r.verdict.kind);
        if (r.verdict.reason != NotIsoReason::kNone) {
          row.verdict += std::string("/") + to_string(r.verdict.reason);
        }
        row.iterations = r.iterations;
        row.restarts = r.restarts;
      } catch (const std::exception& e) {
        row.message = e.what();
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(pairs.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::cout << "pair,a,b,verdict,iterations,restarts,seconds\n";
  bool failed = false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Row& r = rows[i];
    std::cout << i + 1 << ',' << pairs[i].first << ',' << pairs[i].second << ',' << r.verdict
              << ',' << r.iterations << ',' << r.restarts << ',' << std::fixed
              << std::setprecision(3) << r.seconds << std::defaultfloat << '\n';
    if (!r.message.empty()) {
      std::cerr << "pair " << i + 1 << ": " << r.message << "\n";
      failed = true;
    }
  }
  return failed ? kExitError : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph isomorphism testing by a Frank-Wolfe relaxation"};
  app.require_subcommand(1);
  int code = 0;

  SolverFlags check_flags;
  std::string path_a, path_b;
  auto* check_cmd = app.add_subcommand("check", "decide whether two graphs are isomorphic");
  check_cmd->add_option("a", path_a, "first graph")->required();
  check_cmd->add_option("b", path_b, "second graph")->required();
  check_flags.add_to(check_cmd);
  check_cmd->add_option("--trace", check_flags.trace, "write the iteration trace as CSV");
  check_cmd->add_option("--snapshots", check_flags.snapshots,
                        "write every iterate X for the heatmap command");

  std::string gen_name, gen_out;
  GeneratorParams gen_params;
  auto* gen_cmd = app.add_subcommand("gen", "write a named graph");
  gen_cmd->add_option("name", gen_name, "graph name")->required();
  gen_cmd->add_option("--q", gen_params.q, "paley modulus");
  gen_cmd->add_option("--n", gen_params.n, "size for cycle, complete and star");
  gen_cmd->add_option("--variant", gen_params.variant, "square graph variant a-d");
  gen_cmd->add_option("-o,--out", gen_out, "output file (default stdout)");

  std::string perm_in, perm_out, perm_sidecar;
  std::uint64_t perm_seed = 1;
  auto* perm_cmd = app.add_subcommand("permute", "relabel a graph by a random permutation");
  perm_cmd->add_option("graph", perm_in, "input graph")->required();
  perm_cmd->add_option("--seed", perm_seed, "random seed")->capture_default_str();
  perm_cmd->add_option("-o,--out", perm_out, "output graph");
  perm_cmd->add_option("--sidecar", perm_sidecar, "permutation file (default <out>.pi)");

  std::vector<std::string> spec_paths;
  double spec_tol = SpectralTolerances{}.group;
  std::string spec_csv;
  bool spec_rank = false;
  auto* spec_cmd = app.add_subcommand("spectrum", "grouped adjacency spectrum");
  spec_cmd->add_option("graphs", spec_paths, "one or two graphs")->required()->expected(1, 2);
  spec_cmd->add_option("--tol-group", spec_tol, "eigenvalue grouping tolerance")
      ->capture_default_str();
  spec_cmd->add_option("--csv", spec_csv, "also write the spectrum as CSV");
  spec_cmd->add_flag("--rank-h", spec_rank, "print rank(H) for two graphs");

  std::string heat_src, heat_prefix = "x";
  int heat_iter = -1;
  auto* heat_cmd = app.add_subcommand("heatmap", "render iterate snapshots as CSV and PGM");
  heat_cmd->add_option("snapshots", heat_src, "file written by check --snapshots")->required();
  heat_cmd->add_option("-o,--prefix", heat_prefix, "output file prefix")->capture_default_str();
  heat_cmd->add_option("--iter", heat_iter, "only this iteration");

  SolverFlags bench_flags;
  std::string bench_file;
  int bench_jobs = 1;
  auto* bench_cmd = app.add_subcommand("bench", "run check over a batch of pairs");
  bench_cmd->add_option("batch", bench_file, "file with one 'a b' pair per line")->required();
  bench_cmd->add_option("--jobs", bench_jobs, "parallel checks")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench_flags.add_to(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*check_cmd) code = cmd_check(path_a, path_b, check_flags);
    if (*gen_cmd) code = cmd_gen(gen_name, gen_params, gen_out);
    if (*perm_cmd) code = cmd_permute(perm_in, perm_seed, perm_out, perm_sidecar);
    if (*spec_cmd) code = cmd_spectrum(spec_paths, spec_tol, spec_csv, spec_rank);
    if (*heat_cmd) code = cmd_heatmap(heat_src, heat_prefix, heat_iter);
    if (*bench_cmd) code = cmd_bench(bench_file, bench_jobs, bench_flags);
  } catch (const std::exception& e) {
    std::cerr << "isofw: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}
