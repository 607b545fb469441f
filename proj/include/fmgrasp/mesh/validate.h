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

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

struct MeshReport {
  Index num_vertices = 0;
  Index num_faces = 0;
  /// Every edge has at most two incident faces and every vertex has a single fan.
  bool manifold = true;
  /// Every edge has exactly two incident faces.
  bool watertight = false;
  /// Faces sharing an edge traverse it in opposite directions.
  bool orientation_consistent = true;
  int boundary_loops = 0;
  int connected_components = 0;
  /// V - E + F.
  long euler_characteristic = 0;
  std::vector<int> degenerate_faces;
  std::vector<int> nonmanifold_edges_sample;
};

/// Report-only structural check; never throws.
MeshReport validate(const TriMesh& mesh);

std::string to_json(const MeshReport& report);

}  // namespace fmgrasp
