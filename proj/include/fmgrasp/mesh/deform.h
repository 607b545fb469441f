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

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

enum class DeformationKind { Bend, Twist, Stretch };

std::string to_string(DeformationKind kind);
DeformationKind deformation_kind_from_string(const std::string& name);

/// Connectivity-preserving deformation along an axis. Positions are described by
/// their axial coordinate s = (p - origin) . axis; the deformation ramps up over
/// [begin, end] and is carried rigidly beyond `end`.
///
///  - Bend: the interval is rolled onto a circular arc of total angle `magnitude`
///    (radians), turning about `bend_axis` (perpendicular to `axis`).
///  - Twist: rotation about `axis` growing linearly to `magnitude` radians.
///  - Stretch: the interval is scaled along `axis` by (1 + magnitude).
struct DeformationSpec {
  DeformationKind kind = DeformationKind::Bend;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  /// Bend only. Zero means "pick a perpendicular automatically".
  Eigen::Vector3d bend_axis = Eigen::Vector3d::Zero();
  double magnitude = 0.0;
  double begin = 0.0;
  double end = 1.0;
};

/// Throws ConfigError when the spec is malformed.
void validate(const DeformationSpec& spec);

/// Output has the input's vertex count and face list. A zero magnitude returns
/// the input unchanged, bit for bit.
TriMesh synth_deform(const TriMesh& mesh, const DeformationSpec& spec);

}  // namespace fmgrasp
