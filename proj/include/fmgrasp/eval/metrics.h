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

#include <vector>

#include "fmgrasp/fmap/point_map.h"
#include "fmgrasp/grasp/pipeline.h"
#include "fmgrasp/mesh/geodesic.h"

namespace fmgrasp {

struct CorrespondenceError {
  /// Geodesic error of each target vertex divided by the source diameter.
  Eigen::VectorXd per_vertex;
  double diameter = 0.0;
  double mean = 0.0;
  double median = 0.0;
  /// Thresholds (fractions of the diameter) and the fraction of vertices at or below each.
  std::vector<double> thresholds;
  std::vector<double> fraction_below;

  double fraction_below_threshold(double t) const;
};

/// Compares `map` against `truth` on the source mesh. Throws ValidationError on a
/// disconnected source or maps of different sizes.
CorrespondenceError geodesic_error(const PointMap& map, const PointMap& truth, const TriMesh& source,
                                   int diameter_sweeps = 32);

struct RegionAccuracy {
  bool pass = false;
  std::vector<bool> finger_inside;
};

/// Passes iff every contact's carrying vertex lies in `truth_region`.
RegionAccuracy region_accuracy(const GraspResult& result, const std::vector<int>& truth_region);

}  // namespace fmgrasp
