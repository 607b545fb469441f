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
#include "fmgrasp/grasp/grasp.h"

#include <string>

#include "fmgrasp/common/error.h"

namespace fmgrasp {

void GripperSpec::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("gripper: " + msg);
  };
  require(num_fingers() >= 2, "needs at least 2 fingers");
  for (const auto& a : finger_axes)
    require(std::abs(a.norm() - 1.0) < 1e-9 && std::abs(a.z()) < 1e-9, "finger axes must be unit vectors in the xy-plane");
  require(min_opening >= 0, "min_opening must be >= 0");
  require(max_opening > min_opening, "max_opening must exceed min_opening");
  require(pad_width > 0 && pad_height > 0, "pad dimensions must be > 0");
  require(finger_thickness > 0 && finger_length > pad_height / 2, "finger must be thicker than 0 and longer than half a pad");
  require(palm_width > 0 && palm_thickness > 0, "palm dimensions must be > 0");
  require(penetration_tolerance >= 0, "penetration_tolerance must be >= 0");
}

GraspModel build_grasp_model(const TriMesh& mesh, Segmentation segmentation, int region_id,
                             const std::vector<Grasp>& grasps) {
  if (segmentation.labels.size() != mesh.num_vertices())
    throw ValidationError("segmentation does not match the mesh");
  if (region_id < 0 || region_id >= segmentation.num_clusters())
    throw ConfigError("region id " + std::to_string(region_id) + " out of range [0, " +
                      std::to_string(segmentation.num_clusters()) + ")");
  GraspModel model;
  for (const Grasp& g : grasps) {
    bool inside = !g.contacts.empty();
    for (const Contact& c : g.contacts)
      inside = inside && c.vertex >= 0 && c.vertex < mesh.num_vertices() && segmentation.labels[c.vertex] == region_id;
    if (inside) model.grasps.push_back(g);
  }
  if (model.grasps.empty()) throw NoGraspsError("no grasps in region");
  segmentation.selected_region = region_id;
  model.segmentation = std::move(segmentation);
  model.surface = mesh;
  return model;
}

RegionCorrespondence region_correspondence(const GraspModel& model, const PointMap& map, const TriMesh& target) {
  if (map.num_target() != target.num_vertices() || !map.valid(model.surface.num_vertices()))
    throw ValidationError("point map does not cover the target mesh");
  RegionCorrespondence rc;
  rc.target_vertices = mapped_region(model, map);
  const Index n = static_cast<Index>(rc.target_vertices.size());
  rc.source.resize(3, n);
  rc.target.resize(3, n);
  for (Index i = 0; i < n; ++i) {
    const int y = rc.target_vertices[i];
    rc.source.col(i) = model.surface.vertices.col(map.to_source[y]);
    rc.target.col(i) = target.vertices.col(y);
  }
  return rc;
}

std::vector<int> mapped_region(const GraspModel& model, const PointMap& map) {
  const int region = model.region();
  std::vector<int> out;
  for (Index y = 0; y < map.num_target(); ++y)
    if (model.segmentation.labels[map.to_source[y]] == region) out.push_back(static_cast<int>(y));
  return out;
}

RegionTransform region_transform(const GraspModel& model, const PointMap& map, const TriMesh& target) {
  RegionTransform out;
  out.correspondence = region_correspondence(model, map, target);
  if (out.correspondence.source.cols() < 3)
    throw ValidationError("region has " + std::to_string(out.correspondence.source.cols()) +
                          " correspondences; need at least 3");
  out.transform = kabsch<double>(out.correspondence.source, out.correspondence.target);
  out.mean_residual =
      (out.transform.apply(out.correspondence.source) - out.correspondence.target).colwise().norm().mean();
  return out;
}

Grasp transfer_grasp(const Grasp& grasp, const RigidTransformd& t) {
  Grasp out = grasp;
  out.pose = t * grasp.pose;
  for (Contact& c : out.contacts) {
    c.position = t * c.position;
    c.vertex = -1;
    c.face = -1;
  }
  return out;
}

}  // namespace fmgrasp
