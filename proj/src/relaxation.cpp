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

#include "isofw/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace isofw {

namespace {

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

double max_sorted_gap(const Vector& u, const Vector& v) {
  Vector su = u;
  Vector sv = v;
  std::sort(su.data(), su.data() + su.size());
  std::sort(sv.data(), sv.data() + sv.size());
  return (su - sv).cwiseAbs().maxCoeff();
}

}  // namespace

Vector vec(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& x, int n) {
  if (x.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("unvec: length is not n^2");
  }
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

HOperator::HOperator(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != a_.cols() || b_.rows() != b_.cols() || a_.rows() != b_.rows()) {
    throw std::invalid_argument("HOperator: A and B must be square of equal size");
  }
}

Vector HOperator::apply(const Vector& x) const {
  if (x.size() != a_.size()) {
    throw std::invalid_argument("HOperator: vector length must be n^2");
  }
  return vec(apply(unvec(x, n())));
}

Vector h_matvec(const HOperator& h, const Vector& x) { return h.apply(x); }

long rank_of_h(std::span<const int> mu, int n) {
  long total = 0;
  long squares = 0;
  for (int m : mu) {
    if (m < 1) throw std::invalid_argument("multiplicities must be positive");
    total += m;
    squares += static_cast<long>(m) * m;
  }
  if (total != n) {
    throw std::invalid_argument("multiplicities sum to " + std::to_string(total) +
                                ", expected " + std::to_string(n));
  }
  return static_cast<long>(n) * n - squares;
}

Matrix h_eigenvalue_table(std::span<const double> lambda_a,
                          std::span<const double> lambda_b) {
  Matrix t(static_cast<Eigen::Index>(lambda_a.size()),
           static_cast<Eigen::Index>(lambda_b.size()));
  for (std::size_t i = 0; i < lambda_a.size(); ++i) {
    for (std::size_t j = 0; j < lambda_b.size(); ++j) {
      const double d = lambda_a[i] - lambda_b[j];
      t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d * d;
    }
  }
  return t;
}

std::vector<std::pair<double, long>> h_spectrum(std::span<const double> lambda_a,
                                                std::span<const int> mu_a,
                                                std::span<const double> lambda_b,
                                                std::span<const int> mu_b,
                                                double tol) {
  if (lambda_a.size() != mu_a.size() || lambda_b.size() != mu_b.size()) {
    throw std::invalid_argument("h_spectrum: eigenvalue/multiplicity length mismatch");
  }
  const Matrix t = h_eigenvalue_table(lambda_a, lambda_b);
  std::vector<std::pair<double, long>> raw;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    for (std::size_t j = 0; j < mu_b.size(); ++j) {
      raw.emplace_back(t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                       static_cast<long>(mu_a[i]) * mu_b[j]);
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<std::pair<double, long>> out;
  for (const auto& [value, count] : raw) {
    if (!out.empty() && std::abs(out.back().first - value) <= tol) {
      out.back().second += count;
    } else {
      out.emplace_back(value, count);
    }
  }
  return out;
}

SBlockMatrix SBlockMatrix::identity(std::span<const int> mu) {
  SBlockMatrix s;
  for (int m : mu) s.blocks.push_back(Matrix::Identity(m, m));
  return s;
}

SBlockMatrix SBlockMatrix::from_sigma(const Vector& sigma, std::span<const int> mu) {
  SBlockMatrix s;
  Eigen::Index offset = 0;
  for (int m : mu) {
    if (offset + static_cast<Eigen::Index>(m) * m > sigma.size()) {
      throw std::invalid_argument("sigma is shorter than the block sizes require");
    }
    s.blocks.push_back(Eigen::Map<const Matrix>(sigma.data() + offset, m, m));
    offset += static_cast<Eigen::Index>(m) * m;
  }
  if (offset != sigma.size()) {
    throw std::invalid_argument("sigma is longer than the block sizes require");
  }
  return s;
}

Vector SBlockMatrix::to_sigma() const {
  Eigen::Index total = 0;
  for (const Matrix& b : blocks) total += b.size();
  Vector sigma(total);
  Eigen::Index offset = 0;
  for (const Matrix& b : blocks) {
    sigma.segment(offset, b.size()) = Eigen::Map<const Vector>(b.data(), b.size());
    offset += b.size();
  }
  return sigma;
}

Matrix SBlockMatrix::dense() const {
  Eigen::Index total = 0;
  for (const Matrix& b : blocks) total += b.rows();
  Matrix s = Matrix::Zero(total, total);
  Eigen::Index offset = 0;
  for (const Matrix& b : blocks) {
    s.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return s;
}

NullSpaceBasis::NullSpaceBasis(const GroupedSpectrum& a, const GroupedSpectrum& b)
    : n_(a.n) {
  if (a.n != b.n || a.mu != b.mu) {
    throw std::invalid_argument("null space basis needs matching multiplicities");
  }
  ua_ = a.blocks;
  ub_ = b.blocks;
  for (int m : a.mu) {
    offsets_.push_back(dim_);
    dim_ += m * m;
  }
}

std::vector<int> NullSpaceBasis::mu() const {
  std::vector<int> out;
  for (const Matrix& u : ua_) out.push_back(static_cast<int>(u.cols()));
  return out;
}

Matrix NullSpaceBasis::expand(const Vector& sigma) const {
  if (sigma.size() != dim_) {
    throw std::invalid_argument("sigma length does not match null space dimension");
  }
  Matrix x = Matrix::Zero(n_, n_);
  for (int k = 0; k < block_count(); ++k) {
    const int m = block_size(k);
    const Eigen::Map<const Matrix> s(sigma.data() + offset(k), m, m);
    x.noalias() += ub_[idx(k)] * s * ua_[idx(k)].transpose();
  }
  return x;
}

Vector NullSpaceBasis::project(const Matrix& x) const {
  Vector sigma(dim_);
  for (int k = 0; k < block_count(); ++k) {
    const int m = block_size(k);
    Eigen::Map<Matrix> s(sigma.data() + offset(k), m, m);
    s.noalias() = ub_[idx(k)].transpose() * x * ua_[idx(k)];
  }
  return sigma;
}

Vector NullSpaceBasis::column(int c) const {
  Vector e = Vector::Zero(dim_);
  e(c) = 1.0;
  return vec(expand(e));
}

Vector NullSpaceBasis::row(int i, int j) const {
  Vector r(dim_);
  for (int k = 0; k < block_count(); ++k) {
    const int m = block_size(k);
    const auto ua_row = ua_[idx(k)].row(j);
    const auto ub_row = ub_[idx(k)].row(i);
    for (int alpha = 0; alpha < m; ++alpha) {
      r.segment(offset(k) + alpha * m, m) = ua_row(alpha) * ub_row.transpose();
    }
  }
  return r;
}

Matrix build_x_of_s(const NullSpaceBasis& basis, const SBlockMatrix& s) {
  if (static_cast<int>(s.blocks.size()) != basis.block_count()) {
    throw std::invalid_argument("S has the wrong number of blocks");
  }
  for (int k = 0; k < basis.block_count(); ++k) {
    const Matrix& b = s.blocks[idx(k)];
    if (b.rows() != basis.block_size(k) || b.cols() != basis.block_size(k)) {
      throw std::invalid_argument("S block " + std::to_string(k) +
                                  " does not match the eigenvalue multiplicity");
    }
  }
  return basis.expand(s.to_sigma());
}

Matrix orthogonal_minimizer(const GroupedSpectrum& sa, const GroupedSpectrum& sb,
                            std::span<const Matrix> r_blocks) {
  if (!compare_spectra(sa, sb).isospectral) {
    throw std::invalid_argument("orthogonal minimizer needs isospectral inputs");
  }
  SBlockMatrix r;
  for (const Matrix& block : r_blocks) {
    const Matrix gram = block.transpose() * block;
    if (block.rows() != block.cols() ||
        (gram - Matrix::Identity(block.cols(), block.cols())).cwiseAbs().maxCoeff() >
            1e-9) {
      throw std::invalid_argument("rotation block is not orthogonal");
    }
    r.blocks.push_back(block);
  }
  return build_x_of_s(NullSpaceBasis(sa, sb), r);
}

std::vector<BlockSign> sign_from_projections(std::span<const double> w_a,
                                             std::span<const double> w_b,
                                             double zero_tol, double match_tol) {
  if (w_a.size() != w_b.size()) {
    throw std::invalid_argument("projection vectors differ in length");
  }
  std::vector<BlockSign> out(w_a.size());
  for (std::size_t k = 0; k < w_a.size(); ++k) {
    const double a = std::abs(w_a[k]);
    const double b = std::abs(w_b[k]);
    if (std::max(a, b) <= zero_tol) {
      out[k] = {SignStatus::kFree, 0};
    } else if (std::abs(a - b) > match_tol) {
      out[k] = {SignStatus::kInfeasible, 0};
    } else if (std::min(a, b) <= zero_tol) {
      // Both below the match tolerance but not clearly nonzero.
      out[k] = {SignStatus::kFree, 0};
    } else {
      out[k] = {SignStatus::kForced, (w_a[k] > 0) == (w_b[k] > 0) ? 1 : -1};
    }
  }
  return out;
}

bool SignEquations::infeasible() const {
  return std::any_of(blocks.begin(), blocks.end(), [](const BlockSign& b) {
    return b.status == SignStatus::kInfeasible;
  });
}

bool SignEquations::all_forced() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const BlockSign& b) {
    return b.status == SignStatus::kForced;
  });
}

int SignEquations::forced_count() const {
  return static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [](const BlockSign& b) {
    return b.status == SignStatus::kForced;
  }));
}

int SignEquations::free_count() const {
  return static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [](const BlockSign& b) {
    return b.status == SignStatus::kFree;
  }));
}

SBlockMatrix SignEquations::completion(std::span<const int> free_signs) const {
  if (static_cast<int>(free_signs.size()) != free_count()) {
    throw std::invalid_argument("need one sign per free block");
  }
  SBlockMatrix s;
  std::size_t next = 0;
  for (const BlockSign& b : blocks) {
    if (b.status == SignStatus::kInfeasible) {
      throw std::invalid_argument("no completion exists for infeasible signs");
    }
    const int sign = b.status == SignStatus::kForced ? b.sign : free_signs[next++];
    s.blocks.push_back(Matrix::Constant(1, 1, static_cast<double>(sign)));
  }
  return s;
}

SignEquations sign_equations(const GroupedSpectrum& sa, const GroupedSpectrum& sb,
                             const SignTolerances& tol) {
  if (sa.n != sb.n || sa.mu != sb.mu) {
    throw std::invalid_argument("sign equations need matching multiplicities");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(sa.n));
  SignEquations eq;
  for (int k = 0; k < sa.m(); ++k) {
    if (sa.mu[idx(k)] > 1) {
      eq.blocks.push_back({SignStatus::kFree, 0});
      continue;
    }
    const Vector& ua = sa.blocks[idx(k)].col(0);
    const Vector& ub = sb.blocks[idx(k)].col(0);
    const double wa = sa.w[idx(k)](0);
    const double wb = sb.w[idx(k)](0);
    BlockSign sign = sign_from_projections(std::span(&wa, 1), std::span(&wb, 1),
                                           tol.zero * sqrt_n, tol.match * sqrt_n)[0];
    const bool plus = max_sorted_gap(ub, ua) <= tol.match;
    const bool minus = max_sorted_gap(ub, -ua) <= tol.match;
    if (sign.status == SignStatus::kForced) {
      // An isomorphism maps u_A onto sign * u_B entrywise.
      if (!(sign.sign > 0 ? plus : minus)) sign = {SignStatus::kInfeasible, 0};
    } else if (sign.status == SignStatus::kFree) {
      if (plus && minus) {
        sign = {SignStatus::kFree, 0};
      } else if (plus || minus) {
        sign = {SignStatus::kForced, plus ? 1 : -1};
      } else {
        sign = {SignStatus::kInfeasible, 0};
      }
    }
    eq.blocks.push_back(sign);
  }
  return eq;
}

}  // namespace isofw
