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
#include "fmgrasp/mesh/closest_point.h"

#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <vector>

namespace fmgrasp {

Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                          const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection, 5.1.5).
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

SurfacePoint closest_surface_point(const TriMesh& mesh, const Eigen::Vector3d& p) {
  SurfacePoint best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const Eigen::Vector3d q = closest_point_on_triangle(p, mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2));
    const double d2 = (q - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best.position = q;
      best.face = f;
    }
  }
  if (best.face < 0) return best;
  double corner_d2 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Index v = mesh.faces(k, best.face);
    const double d2 = (mesh.vertex(v) - best.position).squaredNorm();
    if (d2 < corner_d2 || (d2 == corner_d2 && v < best.vertex)) {
      corner_d2 = d2;
      best.vertex = v;
    }
  }
  best.distance = std::sqrt(best_d2);
  return best;
}

bool triangle_box_overlap(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                          const Box& box) {
  if (box.empty()) return false;
  const Eigen::Vector3d center = 0.5 * (box.min + box.max);
  const Eigen::Vector3d half = 0.5 * (box.max - box.min);
  const Eigen::Vector3d v0 = a - center, v1 = b - center, v2 = c - center;
  const Eigen::Vector3d e[3] = {v1 - v0, v2 - v1, v0 - v2};

  auto separated = [&](const Eigen::Vector3d& axis) {
    const double p0 = axis.dot(v0), p1 = axis.dot(v1), p2 = axis.dot(v2);
    const double r = half.dot(axis.cwiseAbs());
    return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
  };
  for (int i = 0; i < 3; ++i) {
    if (std::min({v0(i), v1(i), v2(i)}) > half(i) || std::max({v0(i), v1(i), v2(i)}) < -half(i)) return false;
  }
  const Eigen::Vector3d normal = e[0].cross(e[1]);
  if (normal.squaredNorm() > 0 && separated(normal)) return false;
  for (const auto& edge : e)
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector3d axis = Eigen::Vector3d::Unit(i).cross(edge);
      if (axis.squaredNorm() > 1e-30 && separated(axis)) return false;
    }
  return true;
}

std::optional<Eigen::Vector3d> clipped_extreme(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                               const Eigen::Vector3d& c, const Box& box, int axis, bool take_max) {
  std::vector<Eigen::Vector3d> poly = {a, b, c}, next;
  // Sutherland-Hodgman against the six slabs.
  for (int dim = 0; dim < 3 && !poly.empty(); ++dim) {
    for (int side = 0; side < 2 && !poly.empty(); ++side) {
      const double bound = side == 0 ? box.min(dim) : box.max(dim);
      auto inside = [&](const Eigen::Vector3d& p) { return side == 0 ? p(dim) >= bound : p(dim) <= bound; };
      next.clear();
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Eigen::Vector3d& cur = poly[i];
        const Eigen::Vector3d& prev = poly[(i + poly.size() - 1) % poly.size()];
        const bool cin = inside(cur), pin = inside(prev);
        if (cin != pin) {
          const double t = (bound - prev(dim)) / (cur(dim) - prev(dim));
          Eigen::Vector3d x = prev + t * (cur - prev);
          x(dim) = bound;
          next.push_back(x);
        }
        if (cin) next.push_back(cur);
      }
      poly.swap(next);
    }
  }
  if (poly.empty()) return std::nullopt;
  Eigen::Vector3d best = poly.front();
  for (const auto& p : poly)
    if (take_max ? p(axis) > best(axis) : p(axis) < best(axis)) best = p;
  return best;
}

}  // namespace fmgrasp
