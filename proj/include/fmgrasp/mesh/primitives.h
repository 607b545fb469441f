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

#include <functional>

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

/// Subdivided icosahedron projected onto a sphere: 12, 42, 162, 642, 2562, ... vertices.
TriMesh make_icosphere(int subdivisions, double radius = 1.0);

/// Closed tube along +z from z = 0 to z = length, with flat capped ends.
struct TubeParams {
  double length = 1.0;
  int around = 32;
  /// Number of segments along the axis (rings = along + 1).
  int along = 64;
  /// Concentric rings on each cap before the pole.
  int cap_rings = 2;
  /// Cross-section radius as a function of (t in [0, 1] along the axis, angle).
  std::function<double(double, double)> radius = [](double, double) { return 0.05; };
};
TriMesh make_tube(const TubeParams& params);

/// Open tube without caps (boundary loops at both ends).
TriMesh make_open_tube(const TubeParams& params);

/// Closed axis-aligned box centered at the origin with a regular grid on each face.
TriMesh make_box(const Eigen::Vector3d& size, const Eigen::Vector3i& cells);

/// Open planar grid in the xy-plane, cells x cells quads of side `size / cells`.
TriMesh make_grid(int cells, double size);

}  // namespace fmgrasp
