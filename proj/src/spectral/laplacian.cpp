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
#include "fmgrasp/spectral/laplacian.h"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

namespace fmgrasp {
namespace {

double clamped_cot(const Eigen::Vector3d& u, const Eigen::Vector3d& v, bool& clamped) {
  const double c = u.dot(v);
  const double s = u.cross(v).norm();
  if (s * kMaxCotangent <= std::abs(c)) {
    clamped = true;
    return c >= 0 ? kMaxCotangent : -kMaxCotangent;
  }
  return c / s;
}

}  // namespace

LaplaceOperator cotan_laplacian(const TriMesh& mesh) {
  const Index n = mesh.num_vertices();
  LaplaceOperator op;
  op.mass = Eigen::VectorXd::Zero(n);
  op.positions = mesh.vertices;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_faces()) * 12);

  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const int idx[3] = {mesh.faces(0, f), mesh.faces(1, f), mesh.faces(2, f)};
    const Eigen::Vector3d p[3] = {mesh.vertex(idx[0]), mesh.vertex(idx[1]), mesh.vertex(idx[2])};
    bool clamped = false;
    double cot[3];
    for (int c = 0; c < 3; ++c) {
      const Eigen::Vector3d& o = p[c];
      cot[c] = clamped_cot(p[(c + 1) % 3] - o, p[(c + 2) % 3] - o, clamped);
    }
    if (clamped) op.clamped_faces.push_back(static_cast<int>(f));

    for (int c = 0; c < 3; ++c) {
      // Corner c is opposite the edge (c+1, c+2).
      const int i = idx[(c + 1) % 3], j = idx[(c + 2) % 3];
      const double w = 0.5 * cot[c];
      trip.emplace_back(i, j, -w);
      trip.emplace_back(j, i, -w);
      trip.emplace_back(i, i, w);
      trip.emplace_back(j, j, w);
    }

    const double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
    int obtuse = -1;
    for (int c = 0; c < 3; ++c)
      if ((p[(c + 1) % 3] - p[c]).dot(p[(c + 2) % 3] - p[c]) < 0) obtuse = c;
    if (obtuse >= 0) {
      for (int c = 0; c < 3; ++c) op.mass[idx[c]] += c == obtuse ? area / 2 : area / 4;
    } else {
      for (int c = 0; c < 3; ++c) {
        const Eigen::Vector3d& o = p[c];
        const double e1 = (p[(c + 1) % 3] - o).squaredNorm();
        const double e2 = (p[(c + 2) % 3] - o).squaredNorm();
        // Edge (c, c+1) is opposite corner c+2 and vice versa.
        op.mass[idx[c]] += (e1 * cot[(c + 2) % 3] + e2 * cot[(c + 1) % 3]) / 8.0;
      }
    }
  }
  op.stiffness.resize(n, n);
  op.stiffness.setFromTriplets(trip.begin(), trip.end());
  op.stiffness.makeCompressed();
  return op;
}

}  // namespace fmgrasp
