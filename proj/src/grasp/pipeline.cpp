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
#include "fmgrasp/grasp/pipeline.h"

#include <algorithm>
#include <limits>

#include "fmgrasp/common/error.h"
#include "fmgrasp/mesh/closest_point.h"

namespace fmgrasp {

int transport_vertex(const PointMap& map, int source_vertex, const TriMesh& source, const TriMesh& target,
                     const Eigen::Vector3d& hint) {
  if (map.to_target) return (*map.to_target)[source_vertex];
  int best = -1;
  double best_distance = std::numeric_limits<double>::infinity();
  for (Index y = 0; y < map.num_target(); ++y) {
    if (map.to_source[y] != source_vertex) continue;
    const double d = (target.vertices.col(y) - hint).squaredNorm();
    if (d < best_distance) {
      best_distance = d;
      best = static_cast<int>(y);
    }
  }
  if (best >= 0) return best;
  const Eigen::Vector3d p = source.vertices.col(source_vertex);
  for (Index y = 0; y < map.num_target(); ++y) {
    const double d = (source.vertices.col(map.to_source[y]) - p).squaredNorm();
    if (d < best_distance) {
      best_distance = d;
      best = static_cast<int>(y);
    }
  }
  return best;
}

GraspResult transfer_pipeline(const GraspModel& model, const TriMesh& target, const PointMap& map,
                              const TransferConfig& config) {
  config.gripper.validate();
  config.replan.validate();
  if (model.grasps.empty()) throw NoGraspsError("no grasps in region");

  const RegionTransform rt = region_transform(model, map, target);
  GraspResult result;
  result.transform = rt.transform;
  result.region_residual = rt.mean_residual;
  result.correspondences = static_cast<int>(rt.correspondence.source.cols());
  result.target_region = rt.correspondence.target_vertices;
  std::vector<char> in_region(target.num_vertices(), 0);
  for (int y : result.target_region) in_region[y] = 1;

  const GraspChecker checker(target, config.gripper);
  for (std::size_t rank = 0; rank < model.grasps.size(); ++rank) {
    const Grasp& source_grasp = model.grasps[rank];
    const std::string label = "rank " + std::to_string(rank + 1) + ": ";
    Grasp moved = transfer_grasp(source_grasp, rt.transform);
    const FeasibilityReport report = checker.check(moved.pose);
    if (!report.feasible()) {
      result.rejections.push_back(label + report.summary());
      continue;
    }
    moved.opening = report.required_opening;
    moved.contacts = checker.contacts(moved.pose, report, moved.opening);

    std::vector<Eigen::Vector3d> targets;
    for (const Contact& c : source_grasp.contacts) {
      const int y = transport_vertex(map, c.vertex, model.surface, target, rt.transform * c.position);
      targets.push_back(closest_surface_point(target, target.vertices.col(y)).position);
    }
    try {
      const ReplanResult rp = replan_local(moved, targets, checker, config.replan);
      result.grasp = rp.grasp;
      result.rank = static_cast<int>(rank) + 1;
      result.mapped_targets = std::move(targets);
      result.replan_objective_start = rp.objective_start;
      result.replan_objective = rp.objective;
      result.contact_error = rp.contact_error;
      result.replan_evaluations = rp.evaluations;
    } catch (const UnreachableError& e) {
      result.rejections.push_back(label + (e.reports().empty() ? std::string(e.what()) : e.reports().front()));
      continue;
    }
    result.region_accurate = true;
    for (const Contact& c : result.grasp.contacts) {
      const bool inside = c.vertex >= 0 && in_region[c.vertex];
      result.finger_in_region.push_back(inside);
      result.region_accurate = result.region_accurate && inside;
    }
    return result;
  }
  throw UnreachableError("grasp unreachable", result.rejections);
}

}  // namespace fmgrasp
