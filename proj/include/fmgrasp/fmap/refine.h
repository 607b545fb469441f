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

#include <string>
#include <vector>

#include "fmgrasp/fmap/functional_map.h"
#include "fmgrasp/mesh/geodesic.h"

namespace fmgrasp {

struct IcpRefineResult {
  FunctionalMap map;
  PointMap p2p;
  /// Alignment error sum_y ||C phi_X(T(y)) - phi_Y(y)||^2 after each C update.
  std::vector<double> error_history;
  int iterations = 0;
  /// Stopped at an assignment fixed point.
  bool converged = false;
};

/// Alternates nearest-neighbor assignment and orthogonal Procrustes updates of C.
/// Throws ConfigError when iterations < 1.
IcpRefineResult icp_refine(const Eigen::MatrixXd& c, const SpectralBasis& basis_x, const SpectralBasis& basis_y,
                           int iterations);

struct BijectiveRefineResult {
  /// Y -> X assignment, with the X -> Y direction in `to_target`.
  PointMap map;
  /// Summed geodesic round-trip error on X, initial value first.
  std::vector<double> round_trip_history;
  int reassigned = 0;
  std::vector<std::string> warnings;
};

/// Summed graph distance d_X(x, T_XY(T_YX(x))) over all x.
double round_trip_error(const EdgeGraph& graph_x, const Eigen::VectorXi& to_source, const Eigen::VectorXi& to_target);

/// Refines both directions and resolves many-to-one assignments by moving them to
/// their second-nearest spectral neighbor when that strictly lowers the round-trip
/// error. `c_xy` is k_Y x k_X, `c_yx` is k_X x k_Y.
BijectiveRefineResult bijective_refine(const Eigen::MatrixXd& c_xy, const Eigen::MatrixXd& c_yx,
                                       const TriMesh& mesh_x, const TriMesh& mesh_y, const SpectralBasis& basis_x,
                                       const SpectralBasis& basis_y, int iterations);

}  // namespace fmgrasp
