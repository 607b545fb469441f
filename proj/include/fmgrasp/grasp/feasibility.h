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

#include "fmgrasp/grasp/grasp.h"
#include "fmgrasp/mesh/closest_point.h"

namespace fmgrasp {

/// Geometric stand-in for an inverse-kinematics check:
///  (a) the opening needed to close on the surface is within the gripper range,
///  (b) fingers (swept while closing) and palm stay clear of the surface,
///  (c) every pad meets the surface inside its area.
struct FeasibilityReport {
  bool opening_ok = true;
  bool collision_free = true;
  bool contact_ok = true;
  double required_opening = 0.0;
  /// Distance from the tool origin at which each finger touches; NaN without contact.
  std::vector<double> finger_depth;
  /// Human-readable failures, each prefixed with its condition letter.
  std::vector<std::string> failures;

  bool feasible() const { return opening_ok && collision_free && contact_ok; }
  std::string summary() const;
};

/// Reusable checker for one mesh and gripper.
class GraspChecker {
public:
  GraspChecker(const TriMesh& mesh, const GripperSpec& gripper);

  FeasibilityReport check(const RigidTransformd& pose) const;

  /// Surface point closest to each pad center at its closing depth (or at
  /// half the nominal opening for a finger without contact).
  std::vector<Contact> contacts(const RigidTransformd& pose, const FeasibilityReport& report, double opening) const;

  const TriMesh& mesh() const { return mesh_; }
  const GripperSpec& gripper() const { return gripper_; }

private:
  bool overlaps(const Eigen::Matrix3Xd& local, const Box& box) const;

  const TriMesh& mesh_;
  GripperSpec gripper_;
};

FeasibilityReport feasibility_check(const Grasp& grasp, const TriMesh& mesh, const GripperSpec& gripper);

std::vector<Contact> finger_contacts(const Grasp& grasp, const TriMesh& mesh, const GripperSpec& gripper);

/// Tool-frame rotation taking finger-local coordinates (axis, lateral, approach) to the tool frame.
Eigen::Matrix3d finger_frame(const Eigen::Vector3d& axis);

}  // namespace fmgrasp
