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

#include <filesystem>
#include <string>
#include <vector>

#include "fmgrasp/mesh/deform.h"

namespace fmgrasp {

/// A deformed configuration: deformation steps applied in order.
struct SyntheticConfiguration {
  std::string name;
  /// "large" or "small".
  std::string suite;
  std::vector<DeformationSpec> steps;
};

struct SyntheticObject {
  std::string name;
  TriMesh mesh;
  /// Point inside the feature to grasp; its nearest cluster is the region.
  Eigen::Vector3d region_point;
  std::vector<SyntheticConfiguration> configurations;
};

struct SyntheticOptions {
  /// Vertices around each ring and ring count along each object.
  int around = 32;
  int along = 64;
};

/// Desk-scale elongated objects (cable with plug, bar with knob, hose with nozzle,
/// spatula) with asymmetric cross-sections, each with large and small deformations.
std::vector<SyntheticObject> synthetic_objects(const SyntheticOptions& options = {});

TriMesh apply_configuration(const TriMesh& mesh, const SyntheticConfiguration& configuration);

/// Writes `<name>.obj`, `<name>_<configuration>.obj` and `manifest.json` into
/// `directory` (identity ground truth); returns the manifest path.
std::filesystem::path write_synthetic_dataset(const std::filesystem::path& directory,
                                              const std::vector<SyntheticObject>& objects, int n_clusters = 7,
                                              std::uint64_t seed = 1);

}  // namespace fmgrasp
