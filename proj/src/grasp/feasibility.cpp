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
#include "fmgrasp/grasp/feasibility.h"

#include <cmath>
#include <limits>

#include "fmgrasp/common/io.h"

namespace fmgrasp {
namespace {

bool aabb_overlaps(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c, const Box& box) {
  const Eigen::Vector3d lo = a.cwiseMin(b).cwiseMin(c), hi = a.cwiseMax(b).cwiseMax(c);
  return (lo.array() <= box.max.array()).all() && (hi.array() >= box.min.array()).all();
}

}  // namespace

std::string FeasibilityReport::summary() const {
  if (feasible()) return "feasible (opening " + format_double(required_opening, 6) + " m)";
  std::string out;
  for (const auto& f : failures) out += (out.empty() ? "" : "; ") + f;
  return out;
}

Eigen::Matrix3d finger_frame(const Eigen::Vector3d& axis) {
  Eigen::Matrix3d q;
  q.col(0) = axis;
  q.col(2) = Eigen::Vector3d::UnitZ();
  q.col(1) = q.col(2).cross(q.col(0));
  return q;
}

GraspChecker::GraspChecker(const TriMesh& mesh, const GripperSpec& gripper) : mesh_(mesh), gripper_(gripper) {
  gripper_.validate();
}

bool GraspChecker::overlaps(const Eigen::Matrix3Xd& local, const Box& box) const {
  if (box.empty()) return false;
  for (Index f = 0; f < mesh_.num_faces(); ++f) {
    const Eigen::Vector3d a = local.col(mesh_.faces(0, f)), b = local.col(mesh_.faces(1, f)),
                          c = local.col(mesh_.faces(2, f));
    if (aabb_overlaps(a, b, c, box) && triangle_box_overlap(a, b, c, box)) return true;
  }
  return false;
}

FeasibilityReport GraspChecker::check(const RigidTransformd& pose) const {
  const GripperSpec& g = gripper_;
  const double half_max = 0.5 * g.max_opening;
  const double tol = g.penetration_tolerance;
  const Eigen::Matrix3Xd tool = pose.rotation.transpose() * (mesh_.vertices.colwise() - pose.translation);

  FeasibilityReport report;
  report.finger_depth.assign(g.num_fingers(), std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < g.num_fingers(); ++j) {
    const Eigen::Matrix3Xd local = finger_frame(g.finger_axes[j]).transpose() * tool;
    const Box sweep{{0.0, -0.5 * g.pad_width, -0.5 * g.pad_height}, {half_max, 0.5 * g.pad_width, 0.5 * g.pad_height}};
    double depth = -1.0;
    for (Index f = 0; f < mesh_.num_faces(); ++f) {
      const Eigen::Vector3d a = local.col(mesh_.faces(0, f)), b = local.col(mesh_.faces(1, f)),
                            c = local.col(mesh_.faces(2, f));
      if (!aabb_overlaps(a, b, c, sweep)) continue;
      if (auto p = clipped_extreme(a, b, c, sweep, 0, true)) depth = std::max(depth, p->x());
    }
    if (depth < 0) {
      report.contact_ok = false;
      report.failures.push_back("c: finger " + std::to_string(j) + " pad meets no surface");
    } else {
      report.finger_depth[j] = depth;
      if (depth >= half_max - 1e-12) {
        report.opening_ok = false;
        report.failures.push_back("a: surface extends past the open finger " + std::to_string(j));
      }
    }
    const double inner = depth < 0 ? 0.5 * g.min_opening : depth;
    const Box body =
        Box{{inner, -0.5 * g.pad_width, -g.finger_length}, {half_max + g.finger_thickness, 0.5 * g.pad_width, 0.5 * g.pad_height}}
            .shrunk(tol);
    if (overlaps(local, body)) {
      report.collision_free = false;
      report.failures.push_back("b: finger " + std::to_string(j) + " penetrates the surface");
    }
  }

  const double reach = half_max + g.finger_thickness;
  const Box palm = Box{{-reach, -0.5 * g.palm_width, -g.finger_length - g.palm_thickness},
                       {reach, 0.5 * g.palm_width, -g.finger_length}}
                       .shrunk(tol);
  if (overlaps(tool, palm)) {
    report.collision_free = false;
    report.failures.push_back("b: palm penetrates the surface");
  }

  if (report.contact_ok) {
    double opening = 0.0;
    if (g.num_fingers() == 2) {
      opening = report.finger_depth[0] + report.finger_depth[1];
    } else {
      for (double d : report.finger_depth) opening = std::max(opening, 2.0 * d);
    }
    report.required_opening = opening;
    if (opening < g.min_opening || opening > g.max_opening) {
      if (report.opening_ok)
        report.failures.push_back("a: required opening " + format_double(opening, 6) + " m outside [" +
                                  format_double(g.min_opening, 6) + ", " + format_double(g.max_opening, 6) + "]");
      report.opening_ok = false;
    }
  }
  return report;
}

std::vector<Contact> GraspChecker::contacts(const RigidTransformd& pose, const FeasibilityReport& report,
                                            double opening) const {
  std::vector<Contact> out;
  for (int j = 0; j < gripper_.num_fingers(); ++j) {
    double depth = j < static_cast<int>(report.finger_depth.size()) ? report.finger_depth[j] : std::nan("");
    if (std::isnan(depth)) depth = 0.5 * opening;
    const SurfacePoint sp = closest_surface_point(mesh_, pose * (depth * gripper_.finger_axes[j]));
    out.push_back({sp.position, static_cast<int>(sp.vertex), static_cast<int>(sp.face)});
  }
  return out;
}

FeasibilityReport feasibility_check(const Grasp& grasp, const TriMesh& mesh, const GripperSpec& gripper) {
  return GraspChecker(mesh, gripper).check(grasp.pose);
}

std::vector<Contact> finger_contacts(const Grasp& grasp, const TriMesh& mesh, const GripperSpec& gripper) {
  const GraspChecker checker(mesh, gripper);
  return checker.contacts(grasp.pose, checker.check(grasp.pose), grasp.opening);
}

}  // namespace fmgrasp
