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
#include "fmgrasp/mesh/primitives.h"

#include <Eigen/Geometry>
#include <cmath>
#include <array>
#include <map>
#include <numbers>
#include <vector>

#include "fmgrasp/common/error.h"

namespace fmgrasp {
namespace {

class MeshBuilder {
public:
  int add_vertex(const Eigen::Vector3d& p) {
    verts_.push_back(p);
    return static_cast<int>(verts_.size()) - 1;
  }
  /// Adds a triangle, flipping it if needed so its normal agrees with `outward`.
  void add_oriented(int a, int b, int c, const Eigen::Vector3d& outward) {
    const Eigen::Vector3d n = (verts_[b] - verts_[a]).cross(verts_[c] - verts_[a]);
    if (n.dot(outward) < 0) std::swap(b, c);
    tris_.emplace_back(a, b, c);
  }
  void add(int a, int b, int c) { tris_.emplace_back(a, b, c); }
  const Eigen::Vector3d& vertex(int i) const { return verts_[i]; }

  TriMesh build() const {
    Eigen::Matrix3Xd V(3, static_cast<Index>(verts_.size()));
    for (std::size_t i = 0; i < verts_.size(); ++i) V.col(static_cast<Index>(i)) = verts_[i];
    Eigen::Matrix3Xi F(3, static_cast<Index>(tris_.size()));
    for (std::size_t i = 0; i < tris_.size(); ++i) F.col(static_cast<Index>(i)) = tris_[i];
    return with_normals(make_mesh(std::move(V), std::move(F)));
  }

private:
  std::vector<Eigen::Vector3d> verts_;
  std::vector<Eigen::Vector3i> tris_;
};

TriMesh tube_impl(const TubeParams& p, bool capped) {
  if (p.around < 3 || p.along < 1 || p.length <= 0) throw ConfigError("invalid tube parameters");
  MeshBuilder b;
  auto ring_point = [&](double t, int i, double shrink) {
    const double theta = 2.0 * std::numbers::pi * i / p.around;
    const double r = p.radius(t, theta) * shrink;
    return Eigen::Vector3d(r * std::cos(theta), r * std::sin(theta), t * p.length);
  };
  std::vector<std::vector<int>> rings(static_cast<std::size_t>(p.along + 1));
  for (int j = 0; j <= p.along; ++j)
    for (int i = 0; i < p.around; ++i) rings[j].push_back(b.add_vertex(ring_point(double(j) / p.along, i, 1.0)));
  for (int j = 0; j < p.along; ++j)
    for (int i = 0; i < p.around; ++i) {
      const int i1 = (i + 1) % p.around;
      const int a = rings[j][i], bb = rings[j][i1], c = rings[j + 1][i1], d = rings[j + 1][i];
      const Eigen::Vector3d mid = 0.25 * (b.vertex(a) + b.vertex(bb) + b.vertex(c) + b.vertex(d));
      const Eigen::Vector3d outward(mid.x(), mid.y(), 0.0);
      b.add_oriented(a, bb, c, outward);
      b.add_oriented(a, c, d, outward);
    }
  if (capped) {
    for (int end = 0; end < 2; ++end) {
      const double t = end == 0 ? 0.0 : 1.0;
      const Eigen::Vector3d outward(0.0, 0.0, end == 0 ? -1.0 : 1.0);
      std::vector<int> outer = rings[end == 0 ? 0 : p.along];
      for (int m = 1; m <= p.cap_rings; ++m) {
        const double shrink = 1.0 - double(m) / (p.cap_rings + 1);
        std::vector<int> inner;
        for (int i = 0; i < p.around; ++i) inner.push_back(b.add_vertex(ring_point(t, i, shrink)));
        for (int i = 0; i < p.around; ++i) {
          const int i1 = (i + 1) % p.around;
          b.add_oriented(outer[i], outer[i1], inner[i1], outward);
          b.add_oriented(outer[i], inner[i1], inner[i], outward);
        }
        outer = std::move(inner);
      }
      const int pole = b.add_vertex(Eigen::Vector3d(0.0, 0.0, t * p.length));
      for (int i = 0; i < p.around; ++i) b.add_oriented(outer[i], outer[(i + 1) % p.around], pole, outward);
    }
  }
  return b.build();
}

}  // namespace

TriMesh make_icosphere(int subdivisions, double radius) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                                        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<Eigen::Vector3i> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int id = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Eigen::Vector3i> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f(0), f(1)), bc = mid(f(1), f(2)), ca = mid(f(2), f(0));
      next.emplace_back(f(0), ab, ca);
      next.emplace_back(f(1), bc, ab);
      next.emplace_back(f(2), ca, bc);
      next.emplace_back(ab, bc, ca);
    }
    faces = std::move(next);
  }
  Eigen::Matrix3Xd V(3, static_cast<Index>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i) V.col(static_cast<Index>(i)) = verts[i] * radius;
  Eigen::Matrix3Xi F(3, static_cast<Index>(faces.size()));
  for (std::size_t i = 0; i < faces.size(); ++i) F.col(static_cast<Index>(i)) = faces[i];
  return with_normals(make_mesh(std::move(V), std::move(F)));
}

TriMesh make_tube(const TubeParams& params) { return tube_impl(params, true); }
TriMesh make_open_tube(const TubeParams& params) { return tube_impl(params, false); }

TriMesh make_box(const Eigen::Vector3d& size, const Eigen::Vector3i& cells) {
  if ((cells.array() < 1).any() || (size.array() <= 0).any()) throw ConfigError("invalid box parameters");
  MeshBuilder b;
  std::map<std::array<int, 3>, int> ids;
  auto vertex = [&](int i, int j, int k) {
    const std::array<int, 3> key{i, j, k};
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const Eigen::Vector3d p((double(i) / cells.x() - 0.5) * size.x(), (double(j) / cells.y() - 0.5) * size.y(),
                            (double(k) / cells.z() - 0.5) * size.z());
    const int id = b.add_vertex(p);
    ids.emplace(key, id);
    return id;
  };
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3, w = (axis + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      Eigen::Vector3d outward = Eigen::Vector3d::Zero();
      outward(axis) = side == 0 ? -1.0 : 1.0;
      for (int a = 0; a < cells(u); ++a)
        for (int c = 0; c < cells(w); ++c) {
          auto at = [&](int da, int dc) {
            std::array<int, 3> g{};
            g[axis] = side == 0 ? 0 : cells(axis);
            g[u] = a + da;
            g[w] = c + dc;
            return vertex(g[0], g[1], g[2]);
          };
          const int v00 = at(0, 0), v10 = at(1, 0), v11 = at(1, 1), v01 = at(0, 1);
          b.add_oriented(v00, v10, v11, outward);
          b.add_oriented(v00, v11, v01, outward);
        }
    }
  }
  return b.build();
}

TriMesh make_grid(int cells, double size) {
  if (cells < 1 || size <= 0) throw ConfigError("invalid grid parameters");
  MeshBuilder b;
  for (int j = 0; j <= cells; ++j)
    for (int i = 0; i <= cells; ++i) b.add_vertex(Eigen::Vector3d(size * i / cells, size * j / cells, 0.0));
  const Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i) {
      const int v00 = j * (cells + 1) + i, v10 = v00 + 1, v01 = v00 + cells + 1, v11 = v01 + 1;
      b.add_oriented(v00, v10, v11, up);
      b.add_oriented(v00, v11, v01, up);
    }
  return b.build();
}

}  // namespace fmgrasp
