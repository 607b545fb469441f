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

#include <optional>
#include <string>
#include <vector>

#include "fmgrasp/cli/config.h"

namespace fmgrasp {

struct MatchTimings {
  double basis = 0.0;
  double fit = 0.0;
  double refine = 0.0;
  double total = 0.0;
};

struct MatchOutput {
  MatchMethod method = MatchMethod::FunctionalMap;
  /// Y -> X assignment (with the inverse direction when refinement was bijective).
  PointMap map;
  /// Functional-map method only.
  std::optional<FunctionalMap> fmap;
  std::vector<double> refine_history;
  std::vector<double> round_trip_history;
  /// Method-specific residual: descriptor energy, trimmed MSE or CPD objective.
  double residual = 0.0;
  /// Registration report JSON for the baselines.
  std::string report_json;
  std::vector<std::string> warnings;
  MatchTimings timings;
};

/// Spectral basis, WKS, functional map fit and refinement for "fm"; the rigid and
/// nonrigid baselines run on the vertex sets. Bases go through the configured cache.
MatchOutput match_shapes(const TriMesh& source, const TriMesh& target, const PipelineConfig& config);

}  // namespace fmgrasp
