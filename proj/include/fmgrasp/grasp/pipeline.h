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

#include "fmgrasp/grasp/replan.h"

namespace fmgrasp {

struct TransferConfig {
  GripperSpec gripper;
  ReplanConfig replan;
};

struct GraspResult {
  Grasp grasp;
  /// 1-based rank in the model's list of the grasp that was used.
  int rank = 0;
  RigidTransformd transform;
  double region_residual = 0.0;
  int correspondences = 0;
  /// Source contacts carried through the point map onto the target.
  std::vector<Eigen::Vector3d> mapped_targets;
  /// Image of the source region under the point map (target vertex ids).
  std::vector<int> target_region;
  std::vector<bool> finger_in_region;
  bool region_accurate = false;
  double replan_objective_start = 0.0;
  double replan_objective = 0.0;
  double contact_error = 0.0;
  int replan_evaluations = 0;
  /// One line per ranked grasp that was tried and rejected.
  std::vector<std::string> rejections;
};

/// Target vertex carrying the source vertex through the map: the inverse entry when
/// present, else the preimage closest to `hint`, else the target vertex whose match
/// is nearest to `source_vertex` on the source.
int transport_vertex(const PointMap& map, int source_vertex, const TriMesh& source, const TriMesh& target,
                     const Eigen::Vector3d& hint);

/// Grasp transfer: region transform, ranked feasibility loop, contact transport
/// and local re-planning. A grasp whose re-planning fails hands over to the next
/// rank. Throws UnreachableError with per-grasp reports when every rank fails.
GraspResult transfer_pipeline(const GraspModel& model, const TriMesh& target, const PointMap& map,
                              const TransferConfig& config = {});

}  // namespace fmgrasp
