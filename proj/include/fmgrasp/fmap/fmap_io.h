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

#include "fmgrasp/fmap/functional_map.h"

namespace fmgrasp {

/// One "target_id source_id" line per target vertex.
std::string to_pointmap_text(const PointMap& map);
PointMap parse_pointmap_text(const std::string& text, const std::string& name = "<pointmap>");
void save_pointmap(const std::filesystem::path& path, const PointMap& map);
PointMap load_pointmap(const std::filesystem::path& path);

/// Writes `<stem>.json` (header) and `<stem>.bin` (float64, column-major C).
void save_fmap(const std::filesystem::path& stem, const FunctionalMap& map, const FmapConfig& config);
FunctionalMap load_fmap(const std::filesystem::path& stem);

/// Per-vertex colors from bounding-box normalized coordinates.
Eigen::Matrix3Xd coordinate_colors(const TriMesh& mesh);

/// Writes `<stem>_source.ply` and `<stem>_target.ply`; each target vertex takes the
/// color of its matched source vertex.
void save_correspondence_plys(const std::filesystem::path& stem, const TriMesh& source, const TriMesh& target,
                              const PointMap& map);

}  // namespace fmgrasp
