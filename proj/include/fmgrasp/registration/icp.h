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
#include "fmgrasp/registration/rigid_transform.h"

namespace fmgrasp {

struct IcpConfig {
  int max_iterations = 100;
  /// Fraction of the worst matches ignored in each Kabsch solve.
  double trim_fraction = 0.1;
  /// Stop once the trimmed MSE improves by less than this (relative).
  double tolerance = 1e-12;

  void validate() const;
};

struct IcpResult {
  RigidTransformd transform;
  /// Nearest transformed source point of every target point.
  PointMap map;
  /// Trimmed MSE after each matching step (squared meters).
  std::vector<double> mse_history;
  int iterations = 0;
  bool converged = false;

  double residual() const { return mse_history.empty() ? 0.0 : mse_history.back(); }
};

/// Point-to-point trimmed ICP of `source` onto `target` (3 x n point sets),
/// starting from the centroid-aligning translation.
IcpResult icp_rigid(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& target, const IcpConfig& config = {});

std::string icp_report_json(const IcpResult& result);

}  // namespace fmgrasp
