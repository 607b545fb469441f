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

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

namespace fmgrasp {

using Index = Eigen::Index;

/// Indexed triangle surface. Vertices and faces are stored column-wise (3 x n),
/// positions in meters.
struct TriMesh {
  Eigen::Matrix3Xd vertices;
  Eigen::Matrix3Xi faces;
  /// Unit per-vertex normals; empty (0 columns) when absent.
  Eigen::Matrix3Xd normals;

  Index num_vertices() const { return vertices.cols(); }
  Index num_faces() const { return faces.cols(); }
  bool has_normals() const { return normals.cols() == vertices.cols() && normals.cols() > 0; }

  Eigen::Vector3d vertex(Index v) const { return vertices.col(v); }
  Eigen::Vector3d corner(Index f, int c) const { return vertices.col(faces(c, f)); }
};

/// Faces with an area below this are treated as degenerate.
inline constexpr double kDegenerateArea = 1e-12;

/// Builds a mesh and enforces the index and non-degeneracy invariants.
/// Throws ValidationError listing offending faces.
TriMesh make_mesh(Eigen::Matrix3Xd vertices, Eigen::Matrix3Xi faces);

double face_area(const TriMesh& mesh, Index f);
Eigen::Vector3d face_normal(const TriMesh& mesh, Index f);
Eigen::VectorXd face_areas(const TriMesh& mesh);
double surface_area(const TriMesh& mesh);
double bounding_box_diagonal(const TriMesh& mesh);

/// Area-weighted unit vertex normals.
Eigen::Matrix3Xd compute_vertex_normals(const TriMesh& mesh);

/// Returns a copy with freshly estimated normals.
TriMesh with_normals(TriMesh mesh);

/// Sorted neighbor lists of the edge graph.
std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh);

/// Faces incident to each vertex.
std::vector<std::vector<int>> vertex_faces(const TriMesh& mesh);

/// Unique undirected edges (a < b), sorted.
std::vector<std::array<int, 2>> unique_edges(const TriMesh& mesh);

double mean_edge_length(const TriMesh& mesh);

/// Content hash over vertex coordinates and face indices.
std::uint64_t content_hash(const TriMesh& mesh);

/// Applies a vertex relabeling: new vertex i is old vertex perm[i].
TriMesh permute_vertices(const TriMesh& mesh, const Eigen::VectorXi& perm);

/// Keeps the listed faces; vertices unreferenced afterwards are dropped. `kept`
/// receives the old id of each surviving vertex.
TriMesh submesh(const TriMesh& mesh, const std::vector<int>& face_ids, std::vector<int>* kept = nullptr);

}  // namespace fmgrasp
