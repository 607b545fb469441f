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
#include "fmgrasp/eval/metrics.h"

#include <algorithm>
#include <unordered_set>

#include "fmgrasp/common/error.h"

namespace fmgrasp {

double CorrespondenceError::fraction_below_threshold(double t) const {
  if (per_vertex.size() == 0) return 0.0;
  return static_cast<double>((per_vertex.array() < t).count()) / static_cast<double>(per_vertex.size());
}

CorrespondenceError geodesic_error(const PointMap& map, const PointMap& truth, const TriMesh& source,
                                   int diameter_sweeps) {
  if (map.num_target() != truth.num_target())
    throw ValidationError("maps cover " + std::to_string(map.num_target()) + " and " +
                          std::to_string(truth.num_target()) + " target vertices");
  if (!map.valid(source.num_vertices()) || !truth.valid(source.num_vertices()))
    throw ValidationError("map entries out of range for the source mesh");
  const EdgeGraph graph(source);
  CorrespondenceError out;
  out.diameter = geodesic_diameter(graph, diameter_sweeps);

  const Index n = map.num_target();
  out.per_vertex.resize(n);
  for (Index y = 0; y < n; ++y)
    out.per_vertex[y] = geodesic_distance(graph, truth.to_source[y], map.to_source[y]) / out.diameter;

  if (n > 0) {
    out.mean = out.per_vertex.mean();
    std::vector<double> sorted(out.per_vertex.data(), out.per_vertex.data() + n);
    std::sort(sorted.begin(), sorted.end());
    out.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.01 * i;
    out.thresholds.push_back(t);
    out.fraction_below.push_back(out.fraction_below_threshold(t + 1e-15));
  }
  return out;
}

RegionAccuracy region_accuracy(const GraspResult& result, const std::vector<int>& truth_region) {
  const std::unordered_set<int> region(truth_region.begin(), truth_region.end());
  RegionAccuracy out;
  out.pass = !result.grasp.contacts.empty();
  for (const Contact& c : result.grasp.contacts) {
    const bool inside = region.count(c.vertex) > 0;
    out.finger_inside.push_back(inside);
    out.pass = out.pass && inside;
  }
  return out;
}

}  // namespace fmgrasp
