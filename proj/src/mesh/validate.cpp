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
#include "fmgrasp/mesh/validate.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "json.hpp"

namespace fmgrasp {
namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

MeshReport validate(const TriMesh& mesh) {
  MeshReport report;
  report.num_vertices = mesh.num_vertices();
  report.num_faces = mesh.num_faces();
  const int n = static_cast<int>(mesh.num_vertices());

  // Directed half-edges keyed by their undirected edge.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_uses;
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const auto tri = mesh.faces.col(f);
    if ((tri.array() < 0).any() || (tri.array() >= n).any() || tri(0) == tri(1) || tri(1) == tri(2) ||
        tri(0) == tri(2) || face_area(mesh, f) <= kDegenerateArea) {
      report.degenerate_faces.push_back(static_cast<int>(f));
      if ((tri.array() < 0).any() || (tri.array() >= n).any()) continue;
    }
    for (int k = 0; k < 3; ++k) {
      const int a = tri(k), b = tri((k + 1) % 3);
      edge_uses[{std::min(a, b), std::max(a, b)}].emplace_back(a, b);
    }
  }

  std::vector<std::pair<int, int>> boundary_edges;
  bool all_two = !edge_uses.empty();
  for (const auto& [edge, uses] : edge_uses) {
    if (uses.size() > 2) {
      report.manifold = false;
      if (report.nonmanifold_edges_sample.size() < 16) {
        report.nonmanifold_edges_sample.push_back(edge.first);
        report.nonmanifold_edges_sample.push_back(edge.second);
      }
    }
    if (uses.size() != 2) all_two = false;
    if (uses.size() == 1) boundary_edges.push_back(uses[0]);
    if (uses.size() == 2 && uses[0] == uses[1]) report.orientation_consistent = false;
  }
  report.watertight = all_two && report.manifold;

  // Vertex manifoldness: the faces around each vertex form one edge-connected fan.
  const auto vf = vertex_faces(mesh);
  for (int v = 0; v < n && report.manifold; ++v) {
    const auto& faces = vf[v];
    if (faces.size() <= 1) continue;
    std::vector<int> parent(faces.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::map<int, int> spoke_owner;  // other vertex -> local face index
    for (std::size_t i = 0; i < faces.size(); ++i) {
      for (int k = 0; k < 3; ++k) {
        const int w = mesh.faces(k, faces[i]);
        if (w == v) continue;
        auto [it, inserted] = spoke_owner.emplace(w, static_cast<int>(i));
        if (!inserted) parent[find_root(parent, static_cast<int>(i))] = find_root(parent, it->second);
      }
    }
    const int root = find_root(parent, 0);
    for (std::size_t i = 1; i < faces.size(); ++i)
      if (find_root(parent, static_cast<int>(i)) != root) {
        report.manifold = false;
        break;
      }
  }

  // Boundary loops: walk directed boundary half-edges.
  if (report.manifold) {
    std::map<int, std::vector<int>> next;
    for (auto [a, b] : boundary_edges) next[a].push_back(b);
    std::map<std::pair<int, int>, bool> used;
    for (auto [a, b] : boundary_edges) {
      if (used[{a, b}]) continue;
      ++report.boundary_loops;
      int cur_a = a, cur_b = b;
      while (!used[{cur_a, cur_b}]) {
        used[{cur_a, cur_b}] = true;
        const auto it = next.find(cur_b);
        if (it == next.end()) break;
        int chosen = -1;
        for (int c : it->second)
          if (!used[{cur_b, c}]) {
            chosen = c;
            break;
          }
        if (chosen < 0) break;
        cur_a = cur_b;
        cur_b = chosen;
      }
    }
  }

  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<char> referenced(static_cast<std::size_t>(n), 0);
  for (const auto& [edge, uses] : edge_uses) {
    parent[find_root(parent, edge.first)] = find_root(parent, edge.second);
    referenced[edge.first] = referenced[edge.second] = 1;
  }
  for (int v = 0; v < n; ++v)
    if (find_root(parent, v) == v) ++report.connected_components;
  report.euler_characteristic =
      static_cast<long>(n) - static_cast<long>(edge_uses.size()) + static_cast<long>(mesh.num_faces());
  return report;
}

std::string to_json(const MeshReport& report) {
  nlohmann::ordered_json j;
  j["num_vertices"] = report.num_vertices;
  j["num_faces"] = report.num_faces;
  j["manifold"] = report.manifold;
  j["watertight"] = report.watertight;
  j["orientation_consistent"] = report.orientation_consistent;
  j["boundary_loops"] = report.boundary_loops;
  j["connected_components"] = report.connected_components;
  j["euler_characteristic"] = report.euler_characteristic;
  j["degenerate_faces"] = report.degenerate_faces;
  j["nonmanifold_edges_sample"] = report.nonmanifold_edges_sample;
  return j.dump(2) + "\n";
}

}  // namespace fmgrasp
