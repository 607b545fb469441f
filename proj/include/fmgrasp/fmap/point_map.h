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
#include <optional>

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

/// Vertex correspondence from target Y to source X.
struct PointMap {
  /// Source vertex matched to each target vertex.
  Eigen::VectorXi to_source;
  /// Optional inverse direction: target vertex matched to each source vertex.
  std::optional<Eigen::VectorXi> to_target;

  Index num_target() const { return to_source.size(); }

  static PointMap identity(Index n);

  /// Every entry is a valid source id (and target id for the inverse).
  bool valid(Index num_source) const;
  /// The assignment hits every source vertex exactly once.
  bool is_permutation(Index num_source) const;
};

}  // namespace fmgrasp
