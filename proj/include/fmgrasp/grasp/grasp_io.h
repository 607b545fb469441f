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

#include "fmgrasp/grasp/pipeline.h"

namespace fmgrasp {

/// JSON array of {pose: 4x4 row-major, opening, score, contacts: [vertex ids],
/// contact_points: [[x, y, z], ...]}.
std::string grasps_to_json(const std::vector<Grasp>& grasps);

/// Parses a grasp list. Missing contact points are filled from `mesh` when given.
std::vector<Grasp> grasps_from_json(const std::string& text, const std::string& name = "<grasps>",
                                    const TriMesh* mesh = nullptr);

void save_grasps(const std::filesystem::path& path, const std::vector<Grasp>& grasps);
std::vector<Grasp> load_grasps(const std::filesystem::path& path, const TriMesh* mesh = nullptr);

std::string gripper_to_json(const GripperSpec& gripper);
GripperSpec gripper_from_json(const std::string& text, const std::string& name = "<gripper>");
GripperSpec load_gripper(const std::filesystem::path& path);

std::string grasp_result_to_json(const GraspResult& result);

/// Target mesh with the mapped region tinted and spherical markers at the final
/// contacts (red) and the mapped targets (green).
void save_scene_ply(const std::filesystem::path& path, const TriMesh& target, const GraspResult& result,
                    double marker_radius = 0.003);

}  // namespace fmgrasp
