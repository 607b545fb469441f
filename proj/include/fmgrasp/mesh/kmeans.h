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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

struct Segmentation {
  /// Cluster id per vertex, in [0, num_clusters).
  Eigen::VectorXi labels;
  /// 3 x num_clusters cluster means.
  Eigen::Matrix3Xd centroids;
  std::optional<int> selected_region;
  /// Within-cluster sum of squares after each Lloyd iteration.
  std::vector<double> objective_history;
  int iterations = 0;

  int num_clusters() const { return static_cast<int>(centroids.cols()); }
  std::vector<int> members(int cluster) const;
  std::vector<int> cluster_sizes() const;
};

/// Lloyd k-means on vertex positions with seeded k-means++ initialization.
Segmentation kmeans_segment(const TriMesh& mesh, int num_clusters, std::uint64_t seed, int max_iterations = 200);
Segmentation kmeans_segment(const Eigen::Matrix3Xd& points, int num_clusters, std::uint64_t seed,
                            int max_iterations = 200);

/// Cluster containing the vertex nearest to `point`.
int region_at(const Segmentation& seg, const TriMesh& mesh, const Eigen::Vector3d& point);

/// Text form: first line "num_vertices num_clusters", then one label per line.
std::string to_label_text(const Segmentation& seg);
Segmentation parse_label_text(const std::string& text, const TriMesh& mesh);

}  // namespace fmgrasp
