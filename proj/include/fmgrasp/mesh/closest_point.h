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

#include <optional>

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

/// Closest point to `p` on triangle (a, b, c).
Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                          const Eigen::Vector3d& b, const Eigen::Vector3d& c);

struct SurfacePoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Index face = -1;
  /// Corner of `face` nearest to `position`.
  Index vertex = -1;
  double distance = 0.0;
};

/// Exhaustive closest-point query over all faces.
SurfacePoint closest_surface_point(const TriMesh& mesh, const Eigen::Vector3d& p);

/// Axis-aligned box, used in local frames.
struct Box {
  Eigen::Vector3d min;
  Eigen::Vector3d max;
  Box shrunk(double margin) const { return {min.array() + margin, max.array() - margin}; }
  bool empty() const { return (min.array() >= max.array()).any(); }
};

/// Separating-axis overlap test between a triangle and a box.
bool triangle_box_overlap(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                          const Box& box);

/// Clips the triangle to the box and returns the extreme coordinate of the clipped
/// polygon along `axis` (maximum if `take_max`, else minimum). Empty when the
/// triangle misses the box.
std::optional<Eigen::Vector3d> clipped_extreme(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                               const Eigen::Vector3d& c, const Box& box, int axis, bool take_max);

}  // namespace fmgrasp
