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
#include "fmgrasp/mesh/tri_mesh.h"

#include <Eigen/Geometry>
#include <algorithm>
#include <span>
#include <sstream>

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"

namespace fmgrasp {

TriMesh make_mesh(Eigen::Matrix3Xd vertices, Eigen::Matrix3Xi faces) {
  TriMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.faces = std::move(faces);
  const Index n = mesh.num_vertices();
  std::vector<Index> bad_index;
  std::vector<Index> degenerate;
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const auto tri = mesh.faces.col(f);
    if ((tri.array() < 0).any() || (tri.array() >= n).any()) {
      bad_index.push_back(f);
      continue;
    }
    if (tri(0) == tri(1) || tri(1) == tri(2) || tri(0) == tri(2) || face_area(mesh, f) <= kDegenerateArea)
      degenerate.push_back(f);
  }
  auto list = [](const std::vector<Index>& ids) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < ids.size() && i < 20; ++i) ss << (i ? ", " : "") << ids[i];
    if (ids.size() > 20) ss << ", ... (" << ids.size() << " total)";
    return ss.str();
  };
  if (!bad_index.empty()) throw ValidationError("face index out of range in faces: " + list(bad_index));
  if (!degenerate.empty()) throw ValidationError("degenerate faces: " + list(degenerate));
  return mesh;
}

double face_area(const TriMesh& mesh, Index f) {
  const Eigen::Vector3d a = mesh.corner(f, 0), b = mesh.corner(f, 1), c = mesh.corner(f, 2);
  return 0.5 * (b - a).cross(c - a).norm();
}

Eigen::Vector3d face_normal(const TriMesh& mesh, Index f) {
  const Eigen::Vector3d a = mesh.corner(f, 0), b = mesh.corner(f, 1), c = mesh.corner(f, 2);
  return (b - a).cross(c - a).normalized();
}

Eigen::VectorXd face_areas(const TriMesh& mesh) {
  Eigen::VectorXd areas(mesh.num_faces());
  for (Index f = 0; f < mesh.num_faces(); ++f) areas(f) = face_area(mesh, f);
  return areas;
}

double surface_area(const TriMesh& mesh) { return face_areas(mesh).sum(); }

double bounding_box_diagonal(const TriMesh& mesh) {
  if (mesh.num_vertices() == 0) return 0.0;
  return (mesh.vertices.rowwise().maxCoeff() - mesh.vertices.rowwise().minCoeff()).norm();
}

Eigen::Matrix3Xd compute_vertex_normals(const TriMesh& mesh) {
  Eigen::Matrix3Xd normals = Eigen::Matrix3Xd::Zero(3, mesh.num_vertices());
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const Eigen::Vector3d a = mesh.corner(f, 0), b = mesh.corner(f, 1), c = mesh.corner(f, 2);
    // Cross product length is twice the area, so this is area weighting.
    const Eigen::Vector3d n = (b - a).cross(c - a);
    for (int k = 0; k < 3; ++k) normals.col(mesh.faces(k, f)) += n;
  }
  for (Index v = 0; v < normals.cols(); ++v) {
    const double len = normals.col(v).norm();
    if (len > 0) normals.col(v) /= len;
  }
  return normals;
}

TriMesh with_normals(TriMesh mesh) {
  mesh.normals = compute_vertex_normals(mesh);
  return mesh;
}

std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh) {
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(mesh.num_vertices()));
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.faces(k, f), b = mesh.faces((k + 1) % 3, f);
      nbrs[a].push_back(b);
      nbrs[b].push_back(a);
    }
  }
  for (auto& list : nbrs) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nbrs;
}

std::vector<std::vector<int>> vertex_faces(const TriMesh& mesh) {
  std::vector<std::vector<int>> vf(static_cast<std::size_t>(mesh.num_vertices()));
  for (Index f = 0; f < mesh.num_faces(); ++f)
    for (int k = 0; k < 3; ++k) vf[mesh.faces(k, f)].push_back(static_cast<int>(f));
  return vf;
}

std::vector<std::array<int, 2>> unique_edges(const TriMesh& mesh) {
  std::vector<std::array<int, 2>> edges;
  edges.reserve(static_cast<std::size_t>(3 * mesh.num_faces()));
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.faces(k, f), b = mesh.faces((k + 1) % 3, f);
      if (a > b) std::swap(a, b);
      edges.push_back({a, b});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

double mean_edge_length(const TriMesh& mesh) {
  const auto edges = unique_edges(mesh);
  if (edges.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : edges) sum += (mesh.vertex(e[0]) - mesh.vertex(e[1])).norm();
  return sum / static_cast<double>(edges.size());
}

std::uint64_t content_hash(const TriMesh& mesh) {
  const auto* vbytes = reinterpret_cast<const std::byte*>(mesh.vertices.data());
  const auto* fbytes = reinterpret_cast<const std::byte*>(mesh.faces.data());
  std::uint64_t h = fnv1a64({vbytes, static_cast<std::size_t>(mesh.vertices.size()) * sizeof(double)});
  return fnv1a64({fbytes, static_cast<std::size_t>(mesh.faces.size()) * sizeof(int)}, h);
}

TriMesh permute_vertices(const TriMesh& mesh, const Eigen::VectorXi& perm) {
  const Index n = mesh.num_vertices();
  if (perm.size() != n) throw ValidationError("permutation size mismatch");
  Eigen::VectorXi inverse = Eigen::VectorXi::Constant(n, -1);
  for (Index i = 0; i < n; ++i) {
    if (perm(i) < 0 || perm(i) >= n || inverse(perm(i)) != -1) throw ValidationError("not a permutation");
    inverse(perm(i)) = static_cast<int>(i);
  }
  TriMesh out;
  out.vertices.resize(3, n);
  for (Index i = 0; i < n; ++i) out.vertices.col(i) = mesh.vertices.col(perm(i));
  if (mesh.has_normals()) {
    out.normals.resize(3, n);
    for (Index i = 0; i < n; ++i) out.normals.col(i) = mesh.normals.col(perm(i));
  }
  out.faces = mesh.faces.unaryExpr([&](int v) { return inverse(v); });
  return out;
}

TriMesh submesh(const TriMesh& mesh, const std::vector<int>& face_ids, std::vector<int>* kept) {
  std::vector<char> used(static_cast<std::size_t>(mesh.num_vertices()), 0);
  for (int f : face_ids)
    for (int k = 0; k < 3; ++k) used[mesh.faces(k, f)] = 1;
  std::vector<int> remap(used.size(), -1);
  std::vector<int> old_ids;
  for (std::size_t v = 0; v < used.size(); ++v)
    if (used[v]) {
      remap[v] = static_cast<int>(old_ids.size());
      old_ids.push_back(static_cast<int>(v));
    }
  TriMesh out;
  out.vertices.resize(3, static_cast<Index>(old_ids.size()));
  for (std::size_t i = 0; i < old_ids.size(); ++i) out.vertices.col(static_cast<Index>(i)) = mesh.vertices.col(old_ids[i]);
  out.faces.resize(3, static_cast<Index>(face_ids.size()));
  for (std::size_t i = 0; i < face_ids.size(); ++i)
    for (int k = 0; k < 3; ++k) out.faces(k, static_cast<Index>(i)) = remap[mesh.faces(k, face_ids[i])];
  if (kept) *kept = std::move(old_ids);
  return out;
}

}  // namespace fmgrasp
