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
#include "fmgrasp/mesh/kmeans.h"

#include <random>
#include <sstream>

#include "fmgrasp/common/error.h"

namespace fmgrasp {
namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<int> sizes_of(const Eigen::VectorXi& labels, int k) {
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < labels.size(); ++i) ++sizes[labels(i)];
  return sizes;
}

}  // namespace

std::vector<int> Segmentation::members(int cluster) const {
  std::vector<int> out;
  for (Index i = 0; i < labels.size(); ++i)
    if (labels(i) == cluster) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Segmentation::cluster_sizes() const { return sizes_of(labels, num_clusters()); }

Segmentation kmeans_segment(const Eigen::Matrix3Xd& points, int num_clusters, std::uint64_t seed,
                            int max_iterations) {
  const Index n = points.cols();
  if (num_clusters < 1 || num_clusters > n)
    throw ConfigError("kmeans: number of clusters must be in [1, " + std::to_string(n) + "]");
  std::mt19937_64 rng(seed);

  // k-means++ seeding.
  Eigen::Matrix3Xd centroids(3, num_clusters);
  centroids.col(0) = points.col(static_cast<Index>(rng() % static_cast<std::uint64_t>(n)));
  Eigen::VectorXd d2 = (points.colwise() - centroids.col(0)).colwise().squaredNorm().transpose();
  for (int c = 1; c < num_clusters; ++c) {
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0) {
      const double r = uniform01(rng) * total;
      double acc = 0.0;
      for (pick = 0; pick < n - 1; ++pick) {
        acc += d2(pick);
        if (acc > r) break;
      }
    } else {
      pick = static_cast<Index>(c % n);
    }
    centroids.col(c) = points.col(pick);
    d2 = d2.cwiseMin((points.colwise() - centroids.col(c)).colwise().squaredNorm().transpose());
  }

  Segmentation seg;
  seg.labels = Eigen::VectorXi::Constant(n, -1);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    Eigen::VectorXd err(n);
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.col(i) - centroids.col(0)).squaredNorm();
      for (int c = 1; c < num_clusters; ++c) {
        const double d = (points.col(i) - centroids.col(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (seg.labels(i) != best) changed = true;
      seg.labels(i) = best;
      err(i) = best_d;
    }
    if (!changed) break;

    // Re-seed empty clusters at the worst-fit point of a cluster that can spare one.
    auto sizes = sizes_of(seg.labels, num_clusters);
    for (int c = 0; c < num_clusters; ++c) {
      if (sizes[c] > 0) continue;
      Index worst = -1;
      for (Index i = 0; i < n; ++i)
        if (sizes[seg.labels(i)] > 1 && (worst < 0 || err(i) > err(worst))) worst = i;
      if (worst < 0) break;
      --sizes[seg.labels(worst)];
      seg.labels(worst) = c;
      err(worst) = 0.0;
      ++sizes[c];
      centroids.col(c) = points.col(worst);
    }

    centroids.setZero();
    for (Index i = 0; i < n; ++i) centroids.col(seg.labels(i)) += points.col(i);
    for (int c = 0; c < num_clusters; ++c) centroids.col(c) /= static_cast<double>(sizes[c]);

    double objective = 0.0;
    for (Index i = 0; i < n; ++i) objective += (points.col(i) - centroids.col(seg.labels(i))).squaredNorm();
    seg.objective_history.push_back(objective);
    seg.iterations = it + 1;
  }
  seg.centroids = std::move(centroids);
  return seg;
}

Segmentation kmeans_segment(const TriMesh& mesh, int num_clusters, std::uint64_t seed, int max_iterations) {
  return kmeans_segment(mesh.vertices, num_clusters, seed, max_iterations);
}

int region_at(const Segmentation& seg, const TriMesh& mesh, const Eigen::Vector3d& point) {
  Index nearest = 0;
  (mesh.vertices.colwise() - point).colwise().squaredNorm().minCoeff(&nearest);
  return seg.labels(nearest);
}

std::string to_label_text(const Segmentation& seg) {
  std::ostringstream out;
  out << seg.labels.size() << ' ' << seg.num_clusters() << '\n';
  for (Index i = 0; i < seg.labels.size(); ++i) out << seg.labels(i) << '\n';
  return out.str();
}

Segmentation parse_label_text(const std::string& text, const TriMesh& mesh) {
  std::istringstream in(text);
  long n = 0, k = 0;
  if (!(in >> n >> k) || n != mesh.num_vertices() || k < 1)
    throw ValidationError("segmentation header does not match the mesh");
  Segmentation seg;
  seg.labels.resize(n);
  for (long i = 0; i < n; ++i) {
    if (!(in >> seg.labels(i)) || seg.labels(i) < 0 || seg.labels(i) >= k)
      throw ValidationError("segmentation label " + std::to_string(i) + " missing or out of range");
  }
  seg.centroids = Eigen::Matrix3Xd::Zero(3, k);
  const auto sizes = sizes_of(seg.labels, static_cast<int>(k));
  for (long i = 0; i < n; ++i) seg.centroids.col(seg.labels(i)) += mesh.vertices.col(i);
  for (long c = 0; c < k; ++c)
    if (sizes[c] > 0) seg.centroids.col(c) /= sizes[c];
  return seg;
}

}  // namespace fmgrasp
