/*
 * Copyright 2026 The fmgrasp Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#include "fmgrasp/spectral/eigenbasis.h"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"

namespace fmgrasp {
namespace {

struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

EigenPairs dense_solve(const LaplaceOperator& op, Index want) {
  const Eigen::VectorXd d = op.mass.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd s = d.asDiagonal() * Eigen::MatrixXd(op.stiffness) * d.asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  return {es.eigenvalues().head(want), d.asDiagonal() * es.eigenvectors().leftCols(want)};
}

/// Block Krylov iteration on (L - shift A)^-1 A with full A-reorthogonalization,
/// Rayleigh-Ritz extraction on L and thick restarts.
class ShiftInvertKrylov {
public:
  ShiftInvertKrylov(const LaplaceOperator& op, const EigenOptions& options)
      : op_(op), options_(options), rng_(options.seed) {
    Eigen::SparseMatrix<double> k = op.stiffness;
    k -= options.shift * Eigen::SparseMatrix<double>(op.mass.asDiagonal());
    solver_.compute(k);
    if (solver_.info() != Eigen::Success) throw NumericalError("factorization of the shifted Laplacian failed");
    kernel_ = component_indicators();
  }

  /// Pairs below `strict` must meet the tolerance; the remaining ones a looser one.
  EigenPairs solve(Index want, Index strict) {
    const Index n = op_.size();
    const Index b = std::max<Index>(1, std::min(options_.block_size, want));
    const Index cap = std::min(n, std::max(4 * want, want + 10 * b));
    q_.resize(n, cap);
    lq_.resize(n, cap);
    m_ = 0;

    // The exact kernel is locked in up front and kept out of every solve; otherwise
    // the near-singular shift amplifies its round-off and stalls the iteration.
    append(kernel_);
    Eigen::MatrixXd source = random_block(b);
    Index first_new = append(source);
    const Index first_rr = std::min(cap, want + want / 2 + b);
    Index blocks_since_rr = 0;
    double worst = 0.0;
    for (int restarts = 0;;) {
      source = apply(q_.middleCols(first_new, m_ - first_new));
      if (m_ + source.cols() > cap) source.conservativeResize(Eigen::NoChange, cap - m_);
      if (source.cols() > 0) first_new = append(source);
      ++blocks_since_rr;
      const bool full = m_ + 1 > cap || m_ == n;
      if (m_ < first_rr && !full) continue;
      if (blocks_since_rr < 4 && !full) continue;
      blocks_since_rr = 0;

      Eigen::MatrixXd h = q_.leftCols(m_).transpose() * lq_.leftCols(m_);
      h = 0.5 * (h + h.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      const Eigen::MatrixXd y = es.eigenvectors().leftCols(want);
      const Eigen::VectorXd theta = es.eigenvalues().head(want);
      const Eigen::MatrixXd x = q_.leftCols(m_) * y;
      const Eigen::MatrixXd lx = lq_.leftCols(m_) * y;
      const double scale = std::max(std::abs(theta[want - 1]), 1e-300);
      Index first_unconverged = want;
      worst = 0.0;
      for (Index i = 0; i < want; ++i) {
        const Eigen::VectorXd r = lx.col(i) - theta[i] * op_.mass.cwiseProduct(x.col(i));
        const double rn = std::sqrt(r.cwiseAbs2().cwiseQuotient(op_.mass).sum()) / scale;
        worst = std::max(worst, rn);
        const double tol = i < strict ? options_.tolerance : std::max(options_.tolerance, 1e-5);
        if (rn > tol && first_unconverged == want) first_unconverged = i;
      }
      if (first_unconverged == want || m_ == n) return {theta, x};
      if (!full) continue;
      if (++restarts > options_.max_restarts)
        throw NumericalError("eigensolver did not converge: worst relative residual " + format_double(worst, 3) +
                             " after " + std::to_string(restarts - 1) + " restarts");
      const Index keep = std::min(m_ - 1, 2 * want);
      const Eigen::MatrixXd ykeep = es.eigenvectors().leftCols(keep);
      const Eigen::MatrixXd qk = q_.leftCols(m_) * ykeep;
      const Eigen::MatrixXd lqk = lq_.leftCols(m_) * ykeep;
      q_.leftCols(keep) = qk;
      lq_.leftCols(keep) = lqk;
      m_ = keep;
      const Index take = std::min(b, keep - first_unconverged);
      source = apply(q_.middleCols(first_unconverged, take));
      first_new = append(source);
    }
  }

private:
  Eigen::MatrixXd deflate(Eigen::MatrixXd x) const {
    x -= kernel_ * (kernel_.transpose() * op_.mass.asDiagonal() * x);
    return x;
  }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd rhs = op_.mass.asDiagonal() * deflate(x);
    Eigen::MatrixXd y = solver_.solve(rhs);
    return deflate(std::move(y));
  }

  /// A-normalized indicator vectors of the connected components of the stiffness graph.
  Eigen::MatrixXd component_indicators() const {
    const Index n = op_.size();
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    int count = 0;
    std::vector<Index> stack;
    for (Index s = 0; s < n; ++s) {
      if (label[s] >= 0) continue;
      label[s] = count;
      stack.assign(1, s);
      while (!stack.empty()) {
        const Index v = stack.back();
        stack.pop_back();
        for (Eigen::SparseMatrix<double>::InnerIterator it(op_.stiffness, v); it; ++it)
          if (it.value() != 0.0 && label[it.row()] < 0) {
            label[it.row()] = count;
            stack.push_back(it.row());
          }
      }
      ++count;
    }
    Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(n, count);
    for (Index v = 0; v < n; ++v) ind(v, label[v]) = 1.0;
    for (int c = 0; c < count; ++c) ind.col(c) /= std::sqrt(ind.col(c).dot(op_.mass));
    return ind;
  }

  Eigen::MatrixXd random_block(Index cols) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd w(op_.size(), cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < w.rows(); ++i) w(i, j) = g(rng_);
    return w;
  }

  double a_norm(const Eigen::VectorXd& v) const { return std::sqrt(v.cwiseAbs2().dot(op_.mass)); }

  void orthogonalize(Eigen::VectorXd& v) const {
    for (int pass = 0; pass < 2 && m_ > 0; ++pass)
      v -= q_.leftCols(m_) * (q_.leftCols(m_).transpose() * op_.mass.cwiseProduct(v));
  }

  /// Appends the A-orthonormalized columns of `w`; returns the index of the first new one.
  Index append(const Eigen::MatrixXd& w) {
    const Index first = m_;
    for (Index j = 0; j < w.cols() && m_ < q_.cols(); ++j) {
      Eigen::VectorXd v = w.col(j);
      double before = a_norm(v);
      orthogonalize(v);
      double after = a_norm(v);
      for (int attempt = 0; !(after > 1e-10 * before) && attempt < 3; ++attempt) {
        v = random_block(1).col(0);
        before = a_norm(v);
        orthogonalize(v);
        after = a_norm(v);
      }
      if (!(after > 1e-10 * before)) continue;
      v /= after;
      q_.col(m_) = v;
      lq_.col(m_) = op_.stiffness * v;
      ++m_;
    }
    return first;
  }

  const LaplaceOperator& op_;
  const EigenOptions& options_;
  std::mt19937_64 rng_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
  Eigen::MatrixXd kernel_;
  Eigen::MatrixXd q_, lq_;
  Index m_ = 0;
};

/// Monomials x^i y^j z^l with i + j + l <= 6 of the centered, RMS-scaled positions,
/// constant first, each scaled to unit A-norm.
Eigen::MatrixXd probe_functions(const Eigen::Matrix3Xd& positions, const Eigen::VectorXd& mass) {
  constexpr int kDegree = 6;
  const Index n = positions.cols();
  const double total = mass.sum();
  const Eigen::Vector3d center = positions * mass / total;
  const Eigen::Matrix3Xd centered = positions.colwise() - center;
  const double rms = std::sqrt(centered.colwise().squaredNorm().dot(mass) / total);
  const Eigen::Matrix3Xd p = centered / (rms > 0 ? rms : 1.0);
  std::vector<Eigen::VectorXd> cols;
  for (int deg = 0; deg <= kDegree; ++deg)
    for (int i = deg; i >= 0; --i)
      for (int j = deg - i; j >= 0; --j) {
        const int l = deg - i - j;
        Eigen::VectorXd g(n);
        for (Index v = 0; v < n; ++v)
          g[v] = std::pow(p(0, v), i) * std::pow(p(1, v), j) * std::pow(p(2, v), l);
        const double norm = std::sqrt(g.cwiseAbs2().dot(mass));
        if (norm > 0) cols.push_back(g / norm);
      }
  Eigen::MatrixXd out(n, static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = cols[c];
  return out;
}

void sign_by_first_entry(Eigen::MatrixXd& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    const double cut = 1e-10 * vectors.col(c).cwiseAbs().maxCoeff();
    for (Index v = 0; v < vectors.rows(); ++v) {
      if (std::abs(vectors(v, c)) <= cut) continue;
      if (vectors(v, c) < 0) vectors.col(c) *= -1.0;
      break;
    }
  }
}

void canonicalize(const LaplaceOperator& op, EigenPairs& pairs) {
  constexpr double kProbeCut = 1e-6;
  const Index k = pairs.values.size();
  const Eigen::MatrixXd probes = probe_functions(op.positions, op.mass);
  const Eigen::MatrixXd coeff = pairs.vectors.transpose() * op.mass.asDiagonal() * probes;
  const double top = std::abs(pairs.values[k - 1]);
  Index s = 0;
  while (s < k) {
    Index e = s + 1;
    while (e < k && pairs.values[e] - pairs.values[e - 1] <= 1e-9 * std::abs(pairs.values[e]) + 1e-12 * top) ++e;
    const Index m = e - s;
    std::vector<Eigen::VectorXd> basis;
    for (Index j = 0; j < probes.cols() && static_cast<Index>(basis.size()) < m; ++j) {
      Eigen::VectorXd r = coeff.block(s, j, m, 1);
      for (const auto& b : basis) r -= b.dot(r) * b;
      for (const auto& b : basis) r -= b.dot(r) * b;
      const double norm = r.norm();
      if (norm > kProbeCut) basis.push_back(r / norm);
    }
    for (Index j = 0; j < m && static_cast<Index>(basis.size()) < m; ++j) {
      Eigen::VectorXd r = Eigen::VectorXd::Unit(m, j);
      for (const auto& b : basis) r -= b.dot(r) * b;
      for (const auto& b : basis) r -= b.dot(r) * b;
      const double norm = r.norm();
      if (norm > 1e-3) basis.push_back(r / norm);
    }
    Eigen::MatrixXd rot(m, m);
    for (Index j = 0; j < m; ++j) rot.col(j) = basis[static_cast<std::size_t>(j)];
    pairs.vectors.middleCols(s, m) = (pairs.vectors.middleCols(s, m) * rot).eval();
    if (m > 1)
      for (Index j = s; j < e; ++j) {
        const Eigen::VectorXd x = pairs.vectors.col(j);
        pairs.values[j] = x.dot(op.stiffness * x) / x.cwiseAbs2().dot(op.mass);
      }
    s = e;
  }
  for (Index j = 1; j < k; ++j) pairs.values[j] = std::max(pairs.values[j], pairs.values[j - 1]);
}

}  // namespace

SpectralBasis eigenbasis(const LaplaceOperator& op, Index k, const EigenOptions& options) {
  const Index n = op.size();
  if (k < 1 || k >= n)
    throw ConfigError("basis size k=" + std::to_string(k) + " must satisfy 1 <= k < n=" + std::to_string(n));
  if ((op.mass.array() <= 0).any()) throw ValidationError("mass matrix has non-positive entries");
  const bool probes = options.canonicalize && op.positions.cols() == n;
  // Extra pairs so that a degenerate cluster straddling index k is complete.
  const Index want = probes ? std::min(n, k + std::max<Index>(options.block_size, 1)) : k;
  EigenPairs pairs;
  if (n <= options.dense_threshold) {
    pairs = dense_solve(op, want);
  } else {
    ShiftInvertKrylov solver(op, options);
    pairs = solver.solve(want, k);
  }
  if (probes)
    canonicalize(op, pairs);
  else
    sign_by_first_entry(pairs.vectors);
  SpectralBasis basis;
  basis.eigenvalues = pairs.values.head(k);
  basis.functions = pairs.vectors.leftCols(k);
  basis.mass = op.mass;
  return basis;
}

SpectralBasis compute_basis(const TriMesh& mesh, Index k, const EigenOptions& options) {
  return eigenbasis(cotan_laplacian(mesh), k, options);
}

Eigen::VectorXd project(const SpectralBasis& basis, const Eigen::VectorXd& f) {
  if (f.size() != basis.num_vertices())
    throw ValidationError("function length " + std::to_string(f.size()) + " does not match " +
                          std::to_string(basis.num_vertices()) + " vertices");
  return basis.functions.transpose() * basis.mass.cwiseProduct(f);
}

Eigen::MatrixXd project(const SpectralBasis& basis, const Eigen::MatrixXd& f) {
  if (f.rows() != basis.num_vertices())
    throw ValidationError("function length " + std::to_string(f.rows()) + " does not match " +
                          std::to_string(basis.num_vertices()) + " vertices");
  return basis.functions.transpose() * basis.mass.asDiagonal() * f;
}

Eigen::VectorXd reconstruct(const SpectralBasis& basis, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != basis.size())
    throw ValidationError("coefficient count " + std::to_string(coeffs.size()) + " does not match basis size " +
                          std::to_string(basis.size()));
  return basis.functions * coeffs;
}

SpectralBasis truncate(const SpectralBasis& basis, Index k) {
  if (k < 1 || k > basis.size()) throw ConfigError("cannot truncate basis to k=" + std::to_string(k));
  return {basis.eigenvalues.head(k), basis.functions.leftCols(k), basis.mass};
}

}  // namespace fmgrasp
