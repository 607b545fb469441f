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

#include "fmgrasp/fmap/point_map.h"
#include "fmgrasp/mesh/kmeans.h"
#include "fmgrasp/mesh/tri_mesh.h"
#include "fmgrasp/registration/rigid_transform.h"

namespace fmgrasp {

/// Parallel-jaw style gripper. The tool frame has its origin between the pads,
/// z along the approach direction and fingers closing in the xy-plane.
struct GripperSpec {
  /// Unit direction from the tool origin to each finger, in the tool xy-plane.
  std::vector<Eigen::Vector3d> finger_axes = {-Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitX()};
  double min_opening = 0.005;
  double max_opening = 0.068;
  /// Pad extent across the closing direction (tool y) and along the approach (tool z).
  double pad_width = 0.02;
  double pad_height = 0.03;
  double finger_thickness = 0.008;
  /// Finger length from the palm face to the pad center.
  double finger_length = 0.05;
  double palm_width = 0.06;
  double palm_thickness = 0.02;
  /// Allowed interpenetration before a configuration counts as colliding.
  double penetration_tolerance = 0.001;

  int num_fingers() const { return static_cast<int>(finger_axes.size()); }
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct Contact {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  /// Carrying vertex; -1 until derived on a mesh.
  int vertex = -1;
  int face = -1;
};

struct Grasp {
  RigidTransformd pose;
  double opening = 0.0;
  double score = 0.0;
  std::vector<Contact> contacts;
};

struct GraspModel {
  /// Ranked grasps whose contacts all lie in the selected region.
  std::vector<Grasp> grasps;
  Segmentation segmentation;
  TriMesh surface;

  int region() const { return segmentation.selected_region.value_or(-1); }
  std::vector<int> region_vertices() const { return segmentation.members(region()); }
};

/// Keeps the grasps whose contact vertices all belong to `region_id`, in order.
/// Throws NoGraspsError("no grasps in region") when none survive.
GraspModel build_grasp_model(const TriMesh& mesh, Segmentation segmentation, int region_id,
                             const std::vector<Grasp>& grasps);

/// Row-aligned region positions on X and their matches on Y.
struct RegionCorrespondence {
  Eigen::Matrix3Xd source;
  Eigen::Matrix3Xd target;
  /// Target vertex of each column.
  std::vector<int> target_vertices;
};

/// Pairs every target vertex whose match lies in the region with that match.
RegionCorrespondence region_correspondence(const GraspModel& model, const PointMap& map, const TriMesh& target);

struct RegionTransform {
  RigidTransformd transform;
  RegionCorrespondence correspondence;
  /// Mean of ||R v_X + t - v_Y|| over the correspondence.
  double mean_residual = 0.0;
};

/// Least-squares rigid motion of the region onto its image. Throws
/// ValidationError with fewer than 3 or collinear correspondences.
RegionTransform region_transform(const GraspModel& model, const PointMap& map, const TriMesh& target);

/// Target vertices whose match lies in the source region.
std::vector<int> mapped_region(const GraspModel& model, const PointMap& map);

/// Composes the pose with `t` and moves the contacts along; vertex ids are cleared.
Grasp transfer_grasp(const Grasp& grasp, const RigidTransformd& t);

}  // namespace fmgrasp
