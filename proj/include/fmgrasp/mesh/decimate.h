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

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

struct DecimationOptions {
  /// Weight of the perpendicular constraint planes attached to boundary edges.
  double boundary_weight = 1e3;
  /// Reject a collapse when any surviving face normal turns by more than this
  /// (cosine of the angle).
  double min_normal_cosine = 0.2;
};

/// Garland-Heckbert quadric edge-collapse decimation down to `target_vertices`.
/// Collapses keep the surface manifold and its topology (link condition, boundary
/// loops preserved) and reject face flips. Vertex normals are re-estimated.
/// Throws ConfigError for targets below 4 or above the vertex count, and Error when
/// no topology-preserving collapse remains before reaching the target.
TriMesh decimate_quadric(const TriMesh& mesh, Index target_vertices, const DecimationOptions& options = {});

}  // namespace fmgrasp
