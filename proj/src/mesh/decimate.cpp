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
#include "fmgrasp/mesh/decimate.h"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <vector>

#include "fmgrasp/common/error.h"

namespace fmgrasp {
namespace {

using Quadric = Eigen::Matrix4d;

struct Candidate {
  double cost;
  int u, v;
  unsigned version_u, version_v;
  Eigen::Vector3d position;
  bool operator>(const Candidate& o) const {
    if (cost != o.cost) return cost > o.cost;
    if (u != o.u) return u > o.u;
    return v > o.v;
  }
};

class Decimator {
public:
  Decimator(const TriMesh& mesh, const DecimationOptions& options) : options_(options) {
    const Index n = mesh.num_vertices();
    pos_.resize(static_cast<std::size_t>(n));
    for (Index v = 0; v < n; ++v) pos_[v] = mesh.vertex(v);
    faces_.resize(static_cast<std::size_t>(mesh.num_faces()));
    for (Index f = 0; f < mesh.num_faces(); ++f) faces_[f] = {mesh.faces(0, f), mesh.faces(1, f), mesh.faces(2, f)};
    face_alive_.assign(faces_.size(), 1);
    vertex_alive_.assign(pos_.size(), 1);
    version_.assign(pos_.size(), 0);
    vf_ = vertex_faces(mesh);
    alive_vertices_ = n;
    for (std::size_t v = 0; v < pos_.size(); ++v)
      if (vf_[v].empty()) {
        vertex_alive_[v] = 0;  // isolated vertices are dropped
        --alive_vertices_;
      }
    init_quadrics();
  }

  void run(Index target) {
    for (const auto& e : unique_edges_of_alive()) push_candidate(e[0], e[1]);
    while (alive_vertices_ > target) {
      if (heap_.empty())
        throw Error("decimation stalled at " + std::to_string(alive_vertices_) +
                    " vertices: no topology-preserving collapse left");
      const Candidate c = heap_.top();
      heap_.pop();
      if (!vertex_alive_[c.u] || !vertex_alive_[c.v] || version_[c.u] != c.version_u || version_[c.v] != c.version_v)
        continue;
      if (!collapse_allowed(c.u, c.v, c.position)) continue;
      collapse(c.u, c.v, c.position, c.cost);
    }
  }

  TriMesh result() const {
    std::vector<int> remap(pos_.size(), -1);
    int next = 0;
    for (std::size_t v = 0; v < pos_.size(); ++v)
      if (vertex_alive_[v]) remap[v] = next++;
    Eigen::Matrix3Xd V(3, next);
    for (std::size_t v = 0; v < pos_.size(); ++v)
      if (remap[v] >= 0) V.col(remap[v]) = pos_[v];
    std::vector<Eigen::Vector3i> tris;
    for (std::size_t f = 0; f < faces_.size(); ++f)
      if (face_alive_[f]) tris.emplace_back(remap[faces_[f][0]], remap[faces_[f][1]], remap[faces_[f][2]]);
    Eigen::Matrix3Xi F(3, static_cast<Index>(tris.size()));
    for (std::size_t f = 0; f < tris.size(); ++f) F.col(static_cast<Index>(f)) = tris[f];
    return with_normals(make_mesh(std::move(V), std::move(F)));
  }

private:
  static Quadric plane_quadric(const Eigen::Vector3d& normal, const Eigen::Vector3d& point, double weight) {
    Eigen::Vector4d p;
    p << normal, -normal.dot(point);
    return weight * p * p.transpose();
  }

  void init_quadrics() {
    quadrics_.assign(pos_.size(), Quadric::Zero());
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const auto& t = faces_[f];
      const Eigen::Vector3d cr = (pos_[t[1]] - pos_[t[0]]).cross(pos_[t[2]] - pos_[t[0]]);
      const double area = 0.5 * cr.norm();
      if (area <= 0) continue;
      const Quadric q = plane_quadric(cr.normalized(), pos_[t[0]], area);
      for (int k = 0; k < 3; ++k) {
        quadrics_[t[k]] += q;
        const int a = t[k], b = t[(k + 1) % 3];
        edge_faces[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(f));
      }
    }
    for (const auto& [edge, fs] : edge_faces) {
      if (fs.size() != 1) continue;
      const auto& t = faces_[fs[0]];
      const Eigen::Vector3d fn = (pos_[t[1]] - pos_[t[0]]).cross(pos_[t[2]] - pos_[t[0]]).normalized();
      const Eigen::Vector3d dir = pos_[edge.second] - pos_[edge.first];
      const Eigen::Vector3d n = dir.cross(fn);
      if (n.squaredNorm() == 0) continue;
      const Quadric q = plane_quadric(n.normalized(), pos_[edge.first], options_.boundary_weight * dir.squaredNorm());
      quadrics_[edge.first] += q;
      quadrics_[edge.second] += q;
    }
  }

  std::vector<std::array<int, 2>> unique_edges_of_alive() const {
    std::vector<std::array<int, 2>> edges;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!face_alive_[f]) continue;
      for (int k = 0; k < 3; ++k) {
        int a = faces_[f][k], b = faces_[f][(k + 1) % 3];
        if (a > b) std::swap(a, b);
        edges.push_back({a, b});
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
  }

  static double evaluate(const Quadric& q, const Eigen::Vector3d& x) {
    Eigen::Vector4d h;
    h << x, 1.0;
    return std::max(0.0, h.dot(q * h));
  }

  void push_candidate(int u, int v) {
    if (u > v) std::swap(u, v);
    const Quadric q = quadrics_[u] + quadrics_[v];
    const Eigen::Matrix3d a = q.topLeftCorner<3, 3>();
    const Eigen::Vector3d b = -q.topRightCorner<3, 1>();
    Eigen::Vector3d best = 0.5 * (pos_[u] + pos_[v]);
    double best_cost = evaluate(q, best);
    for (const Eigen::Vector3d& cand : {pos_[u], pos_[v]}) {
      const double cost = evaluate(q, cand);
      if (cost < best_cost) {
        best_cost = cost;
        best = cand;
      }
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
    lu.setThreshold(1e-10);
    if (lu.rank() == 3) {
      const Eigen::Vector3d x = lu.solve(b);
      // Keep the optimum local to the edge so ill-conditioned quadrics cannot fling it.
      const double reach = 2.0 * (pos_[u] - pos_[v]).norm();
      if (x.allFinite() && (x - 0.5 * (pos_[u] + pos_[v])).norm() <= reach) {
        const double cost = evaluate(q, x);
        if (cost <= best_cost) {
          best_cost = cost;
          best = x;
        }
      }
    }
    heap_.push({best_cost, u, v, version_[u], version_[v], best});
  }

  std::vector<int> alive_faces(int v) const {
    std::vector<int> out;
    for (int f : vf_[v])
      if (face_alive_[f]) out.push_back(f);
    return out;
  }

  std::vector<int> ring(int v) const {
    std::vector<int> out;
    for (int f : alive_faces(v))
      for (int w : faces_[f])
        if (w != v) out.push_back(w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  int edge_face_count(int a, int b) const {
    int count = 0;
    for (int f : alive_faces(a)) {
      const auto& t = faces_[f];
      if (t[0] == b || t[1] == b || t[2] == b) ++count;
    }
    return count;
  }

  bool is_boundary_vertex(int v) const {
    for (int w : ring(v))
      if (edge_face_count(v, w) == 1) return true;
    return false;
  }

  /// The other boundary neighbor of `v` when walking away from `from`.
  int other_boundary_neighbor(int v, int from) const {
    for (int w : ring(v))
      if (w != from && edge_face_count(v, w) == 1) return w;
    return -1;
  }

  bool collapse_allowed(int u, int v, const Eigen::Vector3d& x) const {
    std::vector<int> opposite;
    for (int f : alive_faces(u)) {
      const auto& t = faces_[f];
      if (t[0] != v && t[1] != v && t[2] != v) continue;
      for (int w : t)
        if (w != u && w != v) opposite.push_back(w);
    }
    std::sort(opposite.begin(), opposite.end());
    const auto ru = ring(u), rv = ring(v);
    std::vector<int> common;
    std::set_intersection(ru.begin(), ru.end(), rv.begin(), rv.end(), std::back_inserter(common));
    if (common != opposite) return false;

    const bool boundary_edge = opposite.size() == 1;
    if (!boundary_edge && is_boundary_vertex(u) && is_boundary_vertex(v)) return false;
    if (boundary_edge && other_boundary_neighbor(u, v) == other_boundary_neighbor(v, u)) return false;
    // A closed surface cannot shrink below a tetrahedron.
    if (!boundary_edge && alive_vertices_ <= 4) return false;

    for (int w : {u, v}) {
      for (int f : alive_faces(w)) {
        const auto& t = faces_[f];
        const bool shared = (t[0] == u || t[1] == u || t[2] == u) && (t[0] == v || t[1] == v || t[2] == v);
        if (shared) continue;
        std::array<Eigen::Vector3d, 3> before, after;
        for (int k = 0; k < 3; ++k) {
          before[k] = pos_[t[k]];
          after[k] = (t[k] == u || t[k] == v) ? x : pos_[t[k]];
        }
        const Eigen::Vector3d n0 = (before[1] - before[0]).cross(before[2] - before[0]);
        const Eigen::Vector3d n1 = (after[1] - after[0]).cross(after[2] - after[0]);
        if (0.5 * n1.norm() <= kDegenerateArea) return false;
        if (n0.normalized().dot(n1.normalized()) < options_.min_normal_cosine) return false;
      }
    }
    return true;
  }

  void collapse(int u, int v, const Eigen::Vector3d& x, double) {
    for (int f : alive_faces(v)) {
      auto& t = faces_[f];
      const bool has_u = t[0] == u || t[1] == u || t[2] == u;
      if (has_u) {
        face_alive_[f] = 0;
        continue;
      }
      for (int& w : t)
        if (w == v) w = u;
      vf_[u].push_back(f);
    }
    vf_[v].clear();
    vertex_alive_[v] = 0;
    --alive_vertices_;
    pos_[u] = x;
    quadrics_[u] += quadrics_[v];
    ++version_[u];
    ++version_[v];
    std::vector<int> live;
    for (int f : vf_[u])
      if (face_alive_[f]) live.push_back(f);
    std::sort(live.begin(), live.end());
    live.erase(std::unique(live.begin(), live.end()), live.end());
    vf_[u] = std::move(live);
    for (int w : ring(u)) push_candidate(u, w);
  }

  DecimationOptions options_;
  std::vector<Eigen::Vector3d> pos_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<char> face_alive_;
  std::vector<char> vertex_alive_;
  std::vector<unsigned> version_;
  std::vector<std::vector<int>> vf_;
  std::vector<Quadric> quadrics_;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap_;
  Index alive_vertices_ = 0;
};

}  // namespace

TriMesh decimate_quadric(const TriMesh& mesh, Index target_vertices, const DecimationOptions& options) {
  if (target_vertices < 4) throw ConfigError("decimation target must be at least 4 vertices");
  if (target_vertices > mesh.num_vertices())
    throw ConfigError("decimation target exceeds the input vertex count");
  if (target_vertices == mesh.num_vertices()) return mesh;
  Decimator d(mesh, options);
  d.run(target_vertices);
  return d.result();
}

}  // namespace fmgrasp
