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

#include <filesystem>
#include <string>

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

/// Optional per-vertex attributes written alongside a mesh (PLY only).
struct VertexAttributes {
  /// 3 x n, RGB in [0, 1].
  Eigen::Matrix3Xd colors;
  /// Per-vertex integer label, written as a "label" property.
  Eigen::VectorXi labels;
};

/// Loads ascii OBJ, OFF or PLY, chosen by extension. Vertex order is preserved.
/// Parse failures raise FormatError (with line); degenerate geometry raises
/// ValidationError.
TriMesh load_mesh(const std::filesystem::path& path);

TriMesh parse_obj(const std::string& text, const std::string& name = "<obj>");
TriMesh parse_off(const std::string& text, const std::string& name = "<off>");
TriMesh parse_ply(const std::string& text, const std::string& name = "<ply>");

std::string to_obj(const TriMesh& mesh);
std::string to_off(const TriMesh& mesh);
std::string to_ply(const TriMesh& mesh, const VertexAttributes& attributes = {});

/// Writes by extension (.obj, .off, .ply); attributes are ignored for OBJ/OFF.
void save_mesh(const std::filesystem::path& path, const TriMesh& mesh, const VertexAttributes& attributes = {});

/// Distinct, deterministic color for a cluster label.
Eigen::Vector3d label_color(int label);

}  // namespace fmgrasp
