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

#include <limits>
#include <span>
#include <vector>

#include "fmgrasp/mesh/tri_mesh.h"

namespace fmgrasp {

/// Edge graph of a mesh with Euclidean edge lengths, in CSR layout.
class EdgeGraph {
public:
  EdgeGraph() = default;
  explicit EdgeGraph(const TriMesh& mesh);

  Index num_vertices() const { return static_cast<Index>(offsets_.empty() ? 0 : offsets_.size() - 1); }

  struct Arc {
    int to;
    double length;
  };
  std::span<const Arc> arcs(Index v) const {
    return {arcs_.data() + offsets_[v], static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }

private:
  std::vector<Index> offsets_;
  std::vector<Arc> arcs_;
};

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct GeodesicField {
  Eigen::VectorXd distance;
  /// False when some vertex is in a different component (its distance is +inf).
  bool all_reachable = true;
};

/// Single-source Dijkstra over the edge graph.
GeodesicField geodesic_distances(const EdgeGraph& graph, Index source);
GeodesicField geodesic_distances(const TriMesh& mesh, Index source);

/// Point-to-point graph distance with early exit once `target` is settled.
double geodesic_distance(const EdgeGraph& graph, Index source, Index target);

/// Approximate graph diameter: maximum eccentricity over `sweeps` farthest-point
/// sampled sources. Throws ValidationError on a disconnected mesh.
double geodesic_diameter(const EdgeGraph& graph, int sweeps = 32);

}  // namespace fmgrasp
