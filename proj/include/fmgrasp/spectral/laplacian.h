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
#include <Eigen/SparseCore>
#include <vector>

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

/// Bound on |cot| applied per angle; equals cot of a 1e-4 rad angle.
inline constexpr double kMaxCotangent = 1e4;

/// Discrete Laplace-Beltrami operator: positive semi-definite cotangent stiffness
/// matrix and lumped (mixed Voronoi) vertex areas.
struct LaplaceOperator {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;
  /// Vertex positions of the source mesh; used to canonicalize eigenvectors.
  Eigen::Matrix3Xd positions;
  /// Faces whose cotangents were clamped.
  std::vector<int> clamped_faces;

  Index size() const { return mass.size(); }
};

/// L_ij = -(cot a_ij + cot b_ij) / 2 for every edge, L_ii = -sum_j L_ij.
LaplaceOperator cotan_laplacian(const TriMesh& mesh);

}  // namespace fmgrasp
