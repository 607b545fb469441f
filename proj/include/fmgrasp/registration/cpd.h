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

#include "fmgrasp/fmap/point_map.h"
#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

struct CpdConfig {
  /// Gaussian kernel width in normalized (unit RMS) units.
  double beta = 2.0;
  /// Motion coherence weight.
  double lambda = 3.0;
  /// Weight of the uniform outlier component, in [0, 1).
  double w_outlier = 0.1;
  int max_iterations = 150;
  /// Stop when the relative change of the objective drops below this.
  double tolerance = 1e-8;
  /// Farthest-point subsample size for the EM iterations; 0 uses every point.
  Index max_points = 500;

  void validate() const;
};

struct CpdResult {
  /// Source points after the nonrigid motion, in target coordinates.
  Eigen::Matrix3Xd displaced;
  /// Posterior-maximum source point of every target point.
  PointMap map;
  /// Penalized negative log-likelihood after each EM step.
  std::vector<double> objective_history;
  double sigma2 = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Coherent point drift of `source` toward `target`. Both sets are centered and
/// scaled to unit RMS radius for the EM iterations.
CpdResult cpd_nonrigid(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& target, const CpdConfig& config = {});

/// Posterior responsibilities P (M x N) of source points for target points and the
/// outlier mass of each target column. Columns of P plus the outlier mass sum to 1.
struct Responsibilities {
  Eigen::MatrixXd p;
  Eigen::VectorXd outlier;
  /// Negative log-likelihood of the target under the mixture.
  double nll = 0.0;
};
Responsibilities cpd_responsibilities(const Eigen::Matrix3Xd& moved, const Eigen::Matrix3Xd& target, double sigma2,
                                      double w_outlier);

/// Deterministic farthest-point sample of `count` column indices, starting at the
/// point farthest from the centroid.
std::vector<Index> farthest_point_sample(const Eigen::Matrix3Xd& points, Index count);

/// Wraps a registration assignment (source id per target vertex) as a PointMap.
PointMap pointmap_from_registration(const Eigen::VectorXi& assignment, const TriMesh& source, const TriMesh& target);

std::string cpd_report_json(const CpdResult& result);

}  // namespace fmgrasp
