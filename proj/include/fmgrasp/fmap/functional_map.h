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
#include <vector>

#include "fmgrasp/descriptors/wks.h"
#include "fmgrasp/fmap/point_map.h"
#include "fmgrasp/spectral/eigenbasis.h"

namespace fmgrasp {

struct FmapConfig {
  double w_desc = 1.0;
  double w_lap = 1e-3;
  double w_opcomm = 1.0;
  /// Orientation-preserving term; needs both meshes.
  double w_orient = 0.0;
  /// Descriptor columns used to build commutativity operators (every n-th).
  Index operator_step = 5;
  /// Scale descriptor columns to unit mass-weighted norm before projection.
  bool normalize_descriptors = true;
  int refine_iterations = 10;
  bool bijective = true;
  /// Relative first-order stationarity of the iterative solve.
  double tolerance = 1e-8;
  int max_solver_iterations = 20000;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Per-term values of the objective at the returned map.
struct EnergyBreakdown {
  double descriptor = 0.0;
  double laplacian = 0.0;
  double opcomm = 0.0;
  double orientation = 0.0;
  double ridge = 0.0;
  /// The normal system was rank deficient and a ridge toward the identity was added.
  bool regularized = false;
  int iterations = 0;
  /// ||grad|| / ||rhs|| at the returned map.
  double relative_gradient = 0.0;

  double total() const { return descriptor + laplacian + opcomm + orientation + ridge; }
};

/// k_Y x k_X matrix mapping coefficient vectors on X to coefficient vectors on Y.
struct FunctionalMap {
  Eigen::MatrixXd C;
  EnergyBreakdown energy;

  Index source_size() const { return C.cols(); }
  Index target_size() const { return C.rows(); }
};

/// Reduced quantities of the fitting objective
///   w_desc ||C F - H||^2 + w_lap ||C Lx - Ly C||^2 + sum w ||C Mx_i - My_i C||^2.
struct FmapProblem {
  Eigen::MatrixXd F, H;
  /// Eigenvalues divided by the smallest positive one of either basis.
  Eigen::VectorXd lambda_x, lambda_y;
  std::vector<Eigen::MatrixXd> opcomm_x, opcomm_y;
  std::vector<Eigen::MatrixXd> orient_x, orient_y;
  FmapConfig config;
};

/// Builds the reduced problem. Descriptor fields must have equal column counts.
/// The orientation term reads normals and gradients from the meshes when w_orient > 0.
FmapProblem make_fmap_problem(const SpectralBasis& basis_x, const SpectralBasis& basis_y, const DescriptorField& f,
                              const DescriptorField& h, const FmapConfig& config, const TriMesh* mesh_x = nullptr,
                              const TriMesh* mesh_y = nullptr);

/// Objective terms at C (the ridge term is reported as zero).
EnergyBreakdown evaluate_energy(const FmapProblem& problem, const Eigen::MatrixXd& c);

/// Minimizes the objective. Without coupling terms the problem separates by rows
/// and is solved directly; otherwise preconditioned conjugate gradients start from
/// that solution. A rank-deficient system gets a 1e-9 ridge pulling toward the
/// identity and is flagged in the breakdown.
FunctionalMap fit_fmap(const FmapProblem& problem);

FunctionalMap fit_fmap(const SpectralBasis& basis_x, const SpectralBasis& basis_y, const DescriptorField& f,
                       const DescriptorField& h, const FmapConfig& config = {}, const TriMesh* mesh_x = nullptr,
                       const TriMesh* mesh_y = nullptr);

/// C = Phi_Y^T A_Y Pi Phi_X for the 0/1 matrix of `map`.
Eigen::MatrixXd fmap_from_p2p(const PointMap& map, const SpectralBasis& basis_x, const SpectralBasis& basis_y);

/// Nearest neighbor of each row of Phi_Y among the rows of Phi_X C^T.
PointMap p2p_from_fmap(const Eigen::MatrixXd& c, const SpectralBasis& basis_x, const SpectralBasis& basis_y);

/// Rotated descriptor-gradient operator  g -> <n x grad f, grad g>  in the reduced basis.
Eigen::MatrixXd orientation_operator(const TriMesh& mesh, const SpectralBasis& basis, const Eigen::VectorXd& f);

}  // namespace fmgrasp
