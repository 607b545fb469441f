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
#include "fmgrasp/grasp/antipodal.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fmgrasp/common/error.h"
#include "fmgrasp/grasp/feasibility.h"

namespace fmgrasp {
namespace {

Eigen::Vector3d any_perpendicular(const Eigen::Vector3d& v) {
  const Eigen::Vector3d trial = std::abs(v.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  return v.cross(trial).normalized();
}

}  // namespace

Eigen::VectorXd normal_flatness(const TriMesh& mesh) {
  const Eigen::Matrix3Xd normals = mesh.has_normals() ? mesh.normals : compute_vertex_normals(mesh);
  const auto rings = vertex_neighbors(mesh);
  Eigen::VectorXd out(mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    Eigen::Vector3d mean = normals.col(v);
    for (int u : rings[v]) mean += normals.col(u);
    mean.normalize();
    double deviation = 1.0 - normals.col(v).dot(mean);
    for (int u : rings[v]) deviation += 1.0 - normals.col(u).dot(mean);
    out[v] = std::clamp(1.0 - deviation / static_cast<double>(rings[v].size() + 1), 0.0, 1.0);
  }
  return out;
}

std::vector<Grasp> generate_antipodal_grasps(const TriMesh& mesh, const std::vector<int>& region,
                                             const GripperSpec& gripper, int count, std::uint64_t seed,
                                             const AntipodalOptions& options) {
  gripper.validate();
  if (region.empty()) throw ValidationError("antipodal sampling needs a non-empty region");
  if (count < 1) throw ConfigError("grasp count must be >= 1");
  if (gripper.num_fingers() != 2) throw ConfigError("antipodal sampling supports two-finger grippers only");

  const Eigen::Matrix3Xd normals = mesh.has_normals() ? mesh.normals : compute_vertex_normals(mesh);
  const Eigen::VectorXd flatness = normal_flatness(mesh);
  const double cos_limit = std::cos(options.max_normal_angle_deg * M_PI / 180.0);
  const Eigen::Vector3d centroid = mesh.vertices.rowwise().mean();
  const GraspChecker checker(mesh, gripper);
  const Eigen::Vector3d axis0 = gripper.finger_axes[0], axis1 = gripper.finger_axes[1];

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, region.size() - 1);
  std::set<std::pair<int, int>> seen;
  std::vector<Grasp> out;
  const int attempts = count * options.attempts_per_grasp;
  for (int attempt = 0; attempt < attempts && static_cast<int>(out.size()) < count; ++attempt) {
    const int i = region[pick(rng)];
    const Eigen::Vector3d pi = mesh.vertices.col(i), ni = normals.col(i);
    int best = -1;
    double best_alignment = -1.0;
    for (int j : region) {
      const Eigen::Vector3d d = mesh.vertices.col(j) - pi;
      const double len = d.norm();
      if (len < gripper.min_opening || len > gripper.max_opening) continue;
      const Eigen::Vector3d u = d / len;
      const double a = -ni.dot(u), b = normals.col(j).dot(u);
      if (a < cos_limit || b < cos_limit) continue;
      if (a + b > best_alignment) {
        best_alignment = a + b;
        best = j;
      }
    }
    if (best < 0) continue;
    const auto key = std::minmax(i, best);
    if (!seen.insert({key.first, key.second}).second) continue;

    const Eigen::Vector3d pj = mesh.vertices.col(best);
    const Eigen::Vector3d closing = (pj - pi).normalized();
    const Eigen::Vector3d center = 0.5 * (pi + pj);
    Eigen::Vector3d reference = centroid - center;
    reference -= reference.dot(closing) * closing;
    reference = reference.norm() > 1e-9 ? reference.normalized() : any_perpendicular(closing);

    // Tool axes: finger 0 sits at pi, finger 1 at pj; z is the approach.
    for (int s = 0; s < options.approach_samples; ++s) {
      const double angle = 2.0 * M_PI * s / options.approach_samples;
      const Eigen::Vector3d z = Eigen::AngleAxisd(angle, closing) * reference;
      Eigen::Matrix3d world;
      world.col(0) = closing;
      world.col(2) = z;
      world.col(1) = z.cross(closing);
      Eigen::Matrix3d tool;
      tool.col(0) = (axis1 - axis0).normalized();
      tool.col(2) = Eigen::Vector3d::UnitZ();
      tool.col(1) = tool.col(2).cross(tool.col(0));
      Grasp g;
      g.pose.rotation = world * tool.transpose();
      g.pose.translation = center;
      const FeasibilityReport report = checker.check(g.pose);
      if (!report.feasible()) continue;
      g.opening = report.required_opening;
      g.contacts = checker.contacts(g.pose, report, g.opening);
      g.score = 0.5 * (flatness[i] + flatness[best]) * (0.5 * best_alignment);
      out.push_back(std::move(g));
      break;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Grasp& a, const Grasp& b) { return a.score > b.score; });
  return out;
}

}  // namespace fmgrasp
