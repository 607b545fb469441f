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

#include <vector>

#include "fmgrasp/grasp/feasibility.h"

namespace fmgrasp {

struct ReplanConfig {
  double mu1 = 0.2;
  double mu2 = 0.8;
  /// Penalty added to infeasible poses.
  double psi = 1e6;
  /// Length per radian in the pose-change term (m/rad).
  double rho = 0.05;
  /// Squared pose change ||dt||^2 + (rho*angle)^2; false gives ||dt|| + rho*angle.
  bool squared_change = true;
  double translation_step = 0.01;
  double rotation_step_deg = 5.0;
  double min_translation_step = 1e-4;
  double min_rotation_step_deg = 0.05;
  int max_evaluations = 2000;

  void validate() const;
};

struct ReplanResult {
  Grasp grasp;
  FeasibilityReport report;
  double objective_start = 0.0;
  double objective = 0.0;
  /// Sum of contact-to-target distances at the returned pose.
  double contact_error = 0.0;
  /// Pose-change magnitude relative to the entry pose.
  double pose_change = 0.0;
  int evaluations = 0;
};

/// Pose-change magnitude ||dt||^2 + (rho * angle(dR))^2, or ||dt|| + rho * angle(dR) when not squared.
double pose_change(const RigidTransformd& from, const RigidTransformd& to, double rho, bool squared = true);

/// Pattern search over tool-frame translations and rotations minimizing
///   mu1 * sum_j ||c_j - p_j|| + mu2 * pose_change + psi * [infeasible].
/// Throws UnreachableError("grasp unreachable") when no feasible pose is found.
ReplanResult replan_local(const Grasp& start, const std::vector<Eigen::Vector3d>& targets, const GraspChecker& checker,
                          const ReplanConfig& config = {});

ReplanResult replan_local(const Grasp& start, const std::vector<Eigen::Vector3d>& targets, const TriMesh& mesh,
                          const GripperSpec& gripper, const ReplanConfig& config = {});

}  // namespace fmgrasp
