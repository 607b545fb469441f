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

#include <cstdint>
#include <vector>

#include "fmgrasp/grasp/grasp.h"

namespace fmgrasp {

struct AntipodalOptions {
  /// Maximum angle between the closing line and each inward normal.
  double max_normal_angle_deg = 20.0;
  /// Approach directions tried around the closing axis.
  int approach_samples = 12;
  /// Sampled source vertices per requested grasp.
  int attempts_per_grasp = 20;
};

/// Per-vertex flatness in [0, 1]: one minus the mean deviation of the one-ring
/// normals from their average.
Eigen::VectorXd normal_flatness(const TriMesh& mesh);

/// Samples antipodal vertex pairs inside `region`, builds a collision-free pose
/// for each and returns up to `count` grasps sorted by descending flatness score.
/// Deterministic for a given seed; empty when nothing fits the gripper.
std::vector<Grasp> generate_antipodal_grasps(const TriMesh& mesh, const std::vector<int>& region,
                                             const GripperSpec& gripper, int count, std::uint64_t seed,
                                             const AntipodalOptions& options = {});

}  // namespace fmgrasp
