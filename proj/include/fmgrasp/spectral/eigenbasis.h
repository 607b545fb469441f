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
#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "fmgrasp/spectral/laplacian.h"

namespace fmgrasp {

/// Truncated generalized eigenbasis of L phi = lambda A phi.
struct SpectralBasis {
  /// Ascending, non-negative (up to round-off).
  Eigen::VectorXd eigenvalues;
  /// n x k, A-orthonormal columns.
  Eigen::MatrixXd functions;
  /// Diagonal of A.
  Eigen::VectorXd mass;

  Index size() const { return eigenvalues.size(); }
  Index num_vertices() const { return functions.rows(); }
};

struct EigenOptions {
  /// Spectral shift of the inverted operator (L - shift A)^-1 A.
  double shift = -1e-8;
  /// Problems up to this size use a dense solver.
  Index dense_threshold = 1500;
  /// Converged when ||L x - lambda A x||_{A^-1} <= tolerance * lambda_max(wanted).
  double tolerance = 1e-8;
  Index block_size = 8;
  int max_restarts = 40;
  std::uint64_t seed = 0x2545F4914F6CDD1DULL;
  /// Rotate degenerate clusters and fix signs using polynomial probe functions of
  /// the vertex positions, which makes the basis equivariant under vertex relabeling.
  /// When disabled (or no positions are known) the first nonzero entry is made positive.
  bool canonicalize = true;
};

/// The k smallest eigenpairs. Throws ConfigError unless 1 <= k < n and
/// NumericalError when the iteration does not converge.
SpectralBasis eigenbasis(const LaplaceOperator& op, Index k, const EigenOptions& options = {});

/// Laplacian plus eigenbasis in one call.
SpectralBasis compute_basis(const TriMesh& mesh, Index k, const EigenOptions& options = {});

/// Coefficients Phi^T A f. Throws ValidationError on a length mismatch.
Eigen::VectorXd project(const SpectralBasis& basis, const Eigen::VectorXd& f);
/// Column-wise projection of an n x m matrix.
Eigen::MatrixXd project(const SpectralBasis& basis, const Eigen::MatrixXd& f);
/// Phi c.
Eigen::VectorXd reconstruct(const SpectralBasis& basis, const Eigen::VectorXd& coeffs);

/// Leading k columns and eigenvalues.
SpectralBasis truncate(const SpectralBasis& basis, Index k);

}  // namespace fmgrasp
