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
#include "fmgrasp/mesh/deform.h"

#include <Eigen/Geometry>
#include <cmath>

#include "fmgrasp/common/error.h"

namespace fmgrasp {

std::string to_string(DeformationKind kind) {
  switch (kind) {
    case DeformationKind::Bend: return "bend";
    case DeformationKind::Twist: return "twist";
    case DeformationKind::Stretch: return "stretch";
  }
  return "unknown";
}

DeformationKind deformation_kind_from_string(const std::string& name) {
  if (name == "bend") return DeformationKind::Bend;
  if (name == "twist") return DeformationKind::Twist;
  if (name == "stretch") return DeformationKind::Stretch;
  throw ConfigError("unknown deformation kind '" + name + "' (expected bend, twist or stretch)");
}

void validate(const DeformationSpec& spec) {
  if (!spec.axis.allFinite() || std::abs(spec.axis.norm() - 1.0) > 1e-9)
    throw ConfigError("deformation axis must be a unit vector");
  if (!spec.origin.allFinite() || !std::isfinite(spec.magnitude)) throw ConfigError("deformation values must be finite");
  if (!(spec.end > spec.begin)) throw ConfigError("deformation interval must satisfy begin < end");
  if (spec.kind == DeformationKind::Stretch && spec.magnitude <= -1.0)
    throw ConfigError("stretch magnitude must be > -1");
  if (spec.kind == DeformationKind::Bend && spec.bend_axis.squaredNorm() > 0) {
    if (std::abs(spec.bend_axis.norm() - 1.0) > 1e-9 || std::abs(spec.bend_axis.dot(spec.axis)) > 1e-9)
      throw ConfigError("bend_axis must be a unit vector perpendicular to axis");
  }
}

TriMesh synth_deform(const TriMesh& mesh, const DeformationSpec& spec) {
  validate(spec);
  if (spec.magnitude == 0.0) return mesh;

  TriMesh out = mesh;
  const Eigen::Vector3d a = spec.axis;
  const double length = spec.end - spec.begin;

  if (spec.kind == DeformationKind::Twist) {
    for (Index v = 0; v < out.num_vertices(); ++v) {
      const Eigen::Vector3d p = mesh.vertices.col(v) - spec.origin;
      const double t = std::clamp((p.dot(a) - spec.begin) / length, 0.0, 1.0);
      out.vertices.col(v) = spec.origin + Eigen::AngleAxisd(spec.magnitude * t, a) * p;
    }
  } else if (spec.kind == DeformationKind::Stretch) {
    const double scale = 1.0 + spec.magnitude;
    for (Index v = 0; v < out.num_vertices(); ++v) {
      const Eigen::Vector3d p = mesh.vertices.col(v) - spec.origin;
      const double s = p.dot(a);
      double shift = 0.0;
      if (s > spec.end) shift = (scale - 1.0) * length;
      else if (s > spec.begin) shift = (scale - 1.0) * (s - spec.begin);
      out.vertices.col(v) = mesh.vertices.col(v) + shift * a;
    }
  } else {
    Eigen::Vector3d b = spec.bend_axis;
    if (b.squaredNorm() == 0) {
      b = a.unitOrthogonal();
    }
    // The interval's centerline maps onto an arc of radius R in the plane spanned by
    // `a` and c = b x a, curling toward +c.
    const Eigen::Vector3d c = b.cross(a);
    const double radius = length / spec.magnitude;
    for (Index v = 0; v < out.num_vertices(); ++v) {
      const Eigen::Vector3d p = mesh.vertices.col(v) - spec.origin;
      const double s = p.dot(a);
      if (s <= spec.begin) continue;
      const double arc = std::min(s, spec.end) - spec.begin;
      const double theta = arc / radius;
      const Eigen::Vector3d start = spec.begin * a;
      const Eigen::Vector3d center = start + radius * c;
      const Eigen::AngleAxisd rot(theta, b);
      // Offset of p from its centerline point, carried by the rotating frame.
      const Eigen::Vector3d offset = p - s * a;
      Eigen::Vector3d q = center + rot * (start - center) + rot * offset;
      if (s > spec.end) q += rot * ((s - spec.end) * a);
      out.vertices.col(v) = spec.origin + q;
    }
  }
  if (mesh.has_normals()) out.normals = compute_vertex_normals(out);
  return out;
}

}  // namespace fmgrasp
