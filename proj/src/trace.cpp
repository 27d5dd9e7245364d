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

#include "isofw/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace isofw {

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + s + "'", 0);
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

}  // namespace

void write_trace(std::ostream& out, std::span<const TraceRow> rows, std::uint64_t seed) {
  out << "# seed " << seed << '\n' << kTraceHeader << '\n';
  for (const TraceRow& r : rows) {
    out << r.restart << ',' << r.iter << ',' << fmt(r.f) << ',' << fmt(r.fw_gap) << ','
        << fmt(r.eq_resid) << ',' << fmt(r.pos_resid) << ',' << fmt(r.h_resid) << '\n';
  }
}

std::vector<TraceRow> read_trace(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kTraceHeader) throw ParseError("unexpected trace header", lineno);
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7) throw ParseError("expected 7 fields", lineno);
    TraceRow r;
    r.restart = std::stoi(cells[0]);
    r.iter = std::stoi(cells[1]);
    r.f = parse_double(cells[2]);
    r.fw_gap = parse_double(cells[3]);
    r.eq_resid = parse_double(cells[4]);
    r.pos_resid = parse_double(cells[5]);
    r.h_resid = parse_double(cells[6]);
    rows.push_back(r);
  }
  if (!header) throw ParseError("missing trace header", 0);
  return rows;
}

void write_snapshots(std::ostream& out, std::span<const Snapshot> snaps) {
  for (const Snapshot& s : snaps) {
    out << "X " << s.restart << ' ' << s.iter << ' ' << s.x.rows() << '\n';
    for (Eigen::Index i = 0; i < s.x.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.x.cols(); ++j) {
        out << (j ? " " : "") << fmt(s.x(i, j));
      }
      out << '\n';
    }
  }
}

std::vector<Snapshot> read_snapshots(std::istream& in) {
  std::vector<Snapshot> out;
  std::string tag;
  while (in >> tag) {
    if (tag != "X") throw ParseError("expected snapshot header 'X'", 0);
    Snapshot s;
    int n = 0;
    if (!(in >> s.restart >> s.iter >> n) || n < 1) {
      throw ParseError("bad snapshot header", 0);
    }
    s.x.resize(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::string cell;
        if (!(in >> cell)) throw ParseError("truncated snapshot", 0);
        s.x(i, j) = parse_double(cell);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_matrix_csv(const Matrix& x, const std::filesystem::path& path) {
  std::ofstream f = open_out(path);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) f << (j ? "," : "") << fmt(x(i, j));
    f << '\n';
  }
}

void write_pgm(const Matrix& x, const std::filesystem::path& path) {
  std::ofstream f = open_out(path, true);
  f << "P5\n" << x.cols() << ' ' << x.rows() << "\n255\n";
  const double top = x.size() ? x.maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      double v = top > 0.0 ? 255.0 * x(i, j) / top : 0.0;
      v = std::clamp(v, 0.0, 255.0);
      f.put(static_cast<char>(static_cast<unsigned char>(std::lround(v))));
    }
  }
}

}  // namespace isofw
