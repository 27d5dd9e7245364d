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

#include "isofw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace isofw {

namespace {

Vector sorted_entries(const Vector& u) {
  Vector s = u;
  std::sort(s.data(), s.data() + s.size());
  return s;
}

// Orthonormal basis of span(block) with the all-ones projection rotated onto
// the first column.
Matrix normalize_block(const Matrix& block, double friendly_tol) {
  const Eigen::Index n = block.rows();
  const Eigen::Index mu = block.cols();
  Eigen::HouseholderQR<Matrix> qr(block);
  Matrix q = qr.householderQ() * Matrix::Identity(n, mu);
  if (mu == 1) return q;

  const Vector w = q.transpose() * Vector::Ones(n);
  const double norm = w.norm();
  if (norm <= friendly_tol * std::sqrt(static_cast<double>(n))) return q;

  // Householder reflector sending w / |w| to e1.
  Vector v = w / norm;
  v(0) -= 1.0;
  const double vn = v.squaredNorm();
  if (vn > 1e-30) {
    const Matrix reflector =
        Matrix::Identity(mu, mu) - 2.0 * v * v.transpose() / vn;
    q = q * reflector;
  }
  return q;
}

}  // namespace

bool GroupedSpectrum::is_friendly() const {
  if (!all_distinct()) return false;
  for (const auto& f : friendly) {
    if (!f[0]) return false;
  }
  return true;
}

Matrix GroupedSpectrum::eigenvectors() const {
  Matrix u(n, n);
  Eigen::Index col = 0;
  for (const Matrix& b : blocks) {
    u.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  return u;
}

Matrix GroupedSpectrum::reconstruct() const {
  Matrix a = Matrix::Zero(n, n);
  for (int k = 0; k < m(); ++k) {
    a += lambda[static_cast<std::size_t>(k)] * blocks[static_cast<std::size_t>(k)] *
         blocks[static_cast<std::size_t>(k)].transpose();
  }
  return a;
}

GroupedSpectrum decompose(const WeightedGraph& g, const SpectralTolerances& tol) {
  return decompose(g.adj(), tol);
}

GroupedSpectrum decompose(const Matrix& symmetric, const SpectralTolerances& tol) {
  const auto n = symmetric.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge");
  }
  // Eigen sorts ascending; walk from the top.
  const Vector& ev = es.eigenvalues();
  const Matrix& evec = es.eigenvectors();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const double gap_tol = tol.group * scale;
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  GroupedSpectrum s;
  s.n = static_cast<int>(n);
  Eigen::Index hi = n - 1;
  while (hi >= 0) {
    Eigen::Index lo = hi;
    while (lo > 0 && ev(lo) - ev(lo - 1) <= gap_tol) --lo;
    const Eigen::Index mu = hi - lo + 1;
    Matrix raw(n, mu);
    for (Eigen::Index c = 0; c < mu; ++c) raw.col(c) = evec.col(hi - c);

    Matrix block = normalize_block(raw, tol.friendly);
    std::vector<bool> friendly(static_cast<std::size_t>(mu));
    std::vector<bool> ambiguous(static_cast<std::size_t>(mu), false);
    if (mu == 1) {
      block *= canonical_sign(block.col(0), tol.entry);
      ambiguous[0] = classify_ambiguous(block.col(0), tol.entry);
    }
    Vector w = block.transpose() * Vector::Ones(n);
    for (Eigen::Index c = 0; c < mu; ++c) {
      friendly[static_cast<std::size_t>(c)] =
          std::abs(w(c)) > tol.friendly * sqrt_n;
    }
    if (mu > 1 && w(0) < 0) {
      block.col(0) *= -1.0;
      w(0) = -w(0);
    }

    s.lambda.push_back(ev.segment(lo, mu).mean());
    s.mu.push_back(static_cast<int>(mu));
    s.blocks.push_back(std::move(block));
    s.w.push_back(std::move(w));
    s.friendly.push_back(std::move(friendly));
    s.ambiguous.push_back(std::move(ambiguous));
    hi = lo - 1;
  }
  return s;
}

SpectrumComparison compare_spectra(const GroupedSpectrum& sa,
                                   const GroupedSpectrum& sb, double tol) {
  SpectrumComparison out;
  if (sa.n != sb.n) {
    out.max_eigenvalue_gap = std::numeric_limits<double>::infinity();
    return out;
  }
  auto raw = [](const GroupedSpectrum& s) {
    std::vector<double> v;
    for (int k = 0; k < s.m(); ++k) {
      v.insert(v.end(), static_cast<std::size_t>(s.mu[static_cast<std::size_t>(k)]),
               s.lambda[static_cast<std::size_t>(k)]);
    }
    return v;
  };
  const auto ra = raw(sa);
  const auto rb = raw(sb);
  double scale = 1.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    out.max_eigenvalue_gap = std::max(out.max_eigenvalue_gap, std::abs(ra[i] - rb[i]));
    scale = std::max({scale, std::abs(ra[i]), std::abs(rb[i])});
  }
  out.matched_multiplicities = sa.mu == sb.mu;
  if (!out.matched_multiplicities) return out;
  double group_gap = 0.0;
  for (int k = 0; k < sa.m(); ++k) {
    group_gap = std::max(group_gap, std::abs(sa.lambda[static_cast<std::size_t>(k)] -
                                             sb.lambda[static_cast<std::size_t>(k)]));
  }
  out.isospectral = group_gap <= tol * scale;
  return out;
}

bool classify_ambiguous(const Vector& u, double tol_entry) {
  const Vector s = sorted_entries(u);
  const Eigen::Index n = s.size();
  // sorted(-u) is -reverse(sorted(u)).
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(s(i) + s(n - 1 - i)) > tol_entry) return false;
  }
  return true;
}

int canonical_sign(const Vector& u, double tol) {
  const double sum = u.sum();
  if (std::abs(sum) > tol * std::sqrt(static_cast<double>(u.size()))) {
    return sum > 0 ? 1 : -1;
  }
  // Compare descending sorted entries of u with those of -u.
  const Vector s = sorted_entries(u);
  const Eigen::Index n = s.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mine = s(n - 1 - i);
    const double flipped = -s(i);
    if (std::abs(mine - flipped) > tol) return mine > flipped ? 1 : -1;
  }
  return 1;
}

int count_unfriendly(const GroupedSpectrum& s) {
  int count = 0;
  for (const auto& f : s.friendly) {
    count += static_cast<int>(std::count(f.begin(), f.end(), false));
  }
  return count;
}

int count_ambiguous(const GroupedSpectrum& s) {
  int count = 0;
  for (const auto& a : s.ambiguous) {
    count += static_cast<int>(std::count(a.begin(), a.end(), true));
  }
  return count;
}

}  // namespace isofw
