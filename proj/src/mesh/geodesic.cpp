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
#include "fmgrasp/mesh/geodesic.h"

#include <queue>

#include "fmgrasp/common/error.h"

namespace fmgrasp {

EdgeGraph::EdgeGraph(const TriMesh& mesh) {
  const auto nbrs = vertex_neighbors(mesh);
  offsets_.assign(nbrs.size() + 1, 0);
  for (std::size_t v = 0; v < nbrs.size(); ++v) offsets_[v + 1] = offsets_[v] + static_cast<Index>(nbrs[v].size());
  arcs_.reserve(static_cast<std::size_t>(offsets_.back()));
  for (std::size_t v = 0; v < nbrs.size(); ++v)
    for (int w : nbrs[v])
      arcs_.push_back({w, (mesh.vertex(static_cast<Index>(v)) - mesh.vertex(w)).norm()});
}

namespace {

using QueueItem = std::pair<double, int>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

}  // namespace

GeodesicField geodesic_distances(const EdgeGraph& graph, Index source) {
  GeodesicField out;
  out.distance = Eigen::VectorXd::Constant(graph.num_vertices(), kUnreachable);
  out.distance(source) = 0.0;
  MinQueue queue;
  queue.emplace(0.0, static_cast<int>(source));
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > out.distance(v)) continue;
    for (const auto& arc : graph.arcs(v)) {
      const double nd = d + arc.length;
      if (nd < out.distance(arc.to)) {
        out.distance(arc.to) = nd;
        queue.emplace(nd, arc.to);
      }
    }
  }
  out.all_reachable = out.distance.allFinite();
  return out;
}

GeodesicField geodesic_distances(const TriMesh& mesh, Index source) {
  return geodesic_distances(EdgeGraph(mesh), source);
}

double geodesic_distance(const EdgeGraph& graph, Index source, Index target) {
  if (source == target) return 0.0;
  std::vector<double> dist(static_cast<std::size_t>(graph.num_vertices()), kUnreachable);
  dist[source] = 0.0;
  MinQueue queue;
  queue.emplace(0.0, static_cast<int>(source));
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (v == target) return d;
    if (d > dist[v]) continue;
    for (const auto& arc : graph.arcs(v)) {
      const double nd = d + arc.length;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        queue.emplace(nd, arc.to);
      }
    }
  }
  return kUnreachable;
}

double geodesic_diameter(const EdgeGraph& graph, int sweeps) {
  const Index n = graph.num_vertices();
  if (n == 0) return 0.0;
  Eigen::VectorXd nearest = Eigen::VectorXd::Constant(n, kUnreachable);
  Index source = 0;
  double diameter = 0.0;
  for (int s = 0; s < sweeps; ++s) {
    const auto field = geodesic_distances(graph, source);
    if (!field.all_reachable) throw ValidationError("geodesic diameter undefined on a disconnected mesh");
    diameter = std::max(diameter, field.distance.maxCoeff());
    nearest = nearest.cwiseMin(field.distance);
    Index next = 0;
    nearest.maxCoeff(&next);
    if (nearest(next) <= 0.0) break;
    source = next;
  }
  return diameter;
}

}  // namespace fmgrasp
