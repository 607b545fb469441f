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
#include "fmgrasp/fmap/refine.h"

#include <Eigen/SVD>
#include <algorithm>
#include <unordered_map>

#include "fmgrasp/common/error.h"
#include "fmgrasp/fmap/nearest.h"

namespace fmgrasp {
namespace {

using Mat = Eigen::MatrixXd;

Mat gather_rows(const Mat& m, const Eigen::VectorXi& rows) {
  Mat out(rows.size(), m.cols());
  for (Index i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

/// Orthogonal C maximizing tr(C^T phi_Y^T phi_X[T]).
Mat procrustes(const Mat& pulled, const Mat& target) {
  const Eigen::JacobiSVD<Mat> svd(target.transpose() * pulled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

double alignment_error(const Mat& pulled, const Mat& target, const Mat& c) {
  return (pulled * c.transpose() - target).squaredNorm();
}

class DistanceCache {
public:
  explicit DistanceCache(const EdgeGraph& graph) : graph_(graph) {}

  double operator()(int a, int b) {
    if (a == b) return 0.0;
    if (a > b) std::swap(a, b);
    const auto key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double d = geodesic_distance(graph_, a, b);
    cache_.emplace(key, d);
    return d;
  }

private:
  const EdgeGraph& graph_;
  std::unordered_map<std::uint64_t, double> cache_;
};

double round_trip(DistanceCache& dist, const Eigen::VectorXi& t, const Eigen::VectorXi& s) {
  double total = 0.0;
  for (Index x = 0; x < s.size(); ++x) total += dist(static_cast<int>(x), t[s[x]]);
  return total;
}

std::vector<std::vector<int>> preimages(const Eigen::VectorXi& map, Index range) {
  std::vector<std::vector<int>> out(range);
  for (Index i = 0; i < map.size(); ++i) out[map[i]].push_back(static_cast<int>(i));
  return out;
}

/// Keeps the closest preimage of every collision and tries the second-nearest
/// neighbor for the others. Returns the number of accepted moves.
int consistency_pass(DistanceCache& dist, Eigen::VectorXi& t, Eigen::VectorXi& s, const NearestNeighbors& nn_t,
                     const NearestNeighbors& nn_s) {
  const Index nx = s.size(), ny = t.size();
  int moved = 0;
  auto by_distance = [](const Eigen::VectorXd& d) {
    return [&d](int a, int b) { return d[a] < d[b] || (d[a] == d[b] && a < b); };
  };

  // Collisions of T: several y sharing one x.
  {
    const auto pre_t = preimages(t, nx);
    const auto pre_s = preimages(s, ny);
    for (Index x = 0; x < nx; ++x) {
      auto ys = pre_t[x];
      if (ys.size() < 2) continue;
      std::sort(ys.begin(), ys.end(), by_distance(nn_t.first_distance));
      for (std::size_t i = 1; i < ys.size(); ++i) {
        const int y = ys[i];
        const int candidate = nn_t.second[y];
        if (candidate == t[y]) continue;
        double delta = 0.0;
        for (int xs : pre_s[y]) delta += dist(xs, candidate) - dist(xs, t[y]);
        if (delta < 0.0) {
          t[y] = candidate;
          ++moved;
        }
      }
    }
  }
  // Collisions of S: several x sharing one y.
  {
    const auto pre_s = preimages(s, ny);
    for (Index y = 0; y < ny; ++y) {
      auto xs = pre_s[y];
      if (xs.size() < 2) continue;
      std::sort(xs.begin(), xs.end(), by_distance(nn_s.first_distance));
      for (std::size_t i = 1; i < xs.size(); ++i) {
        const int x = xs[i];
        const int candidate = nn_s.second[x];
        if (candidate == s[x]) continue;
        if (dist(x, t[candidate]) < dist(x, t[s[x]])) {
          s[x] = candidate;
          ++moved;
        }
      }
    }
  }
  return moved;
}

void check_monotone(const std::vector<double>& history, const char* what) {
  if (history.size() < 2) return;
  const double prev = history[history.size() - 2], cur = history.back();
  if (cur > prev + 1e-12 * std::max(1.0, std::abs(prev)))
    throw NumericalError(std::string(what) + " increased from " + std::to_string(prev) + " to " + std::to_string(cur));
}

}  // namespace

IcpRefineResult icp_refine(const Eigen::MatrixXd& c, const SpectralBasis& basis_x, const SpectralBasis& basis_y,
                           int iterations) {
  if (iterations < 1) throw ConfigError("refinement iterations must be >= 1");
  IcpRefineResult out;
  out.map.C = c;
  out.p2p = p2p_from_fmap(c, basis_x, basis_y);
  for (out.iterations = 1; out.iterations <= iterations; ++out.iterations) {
    const Mat pulled = gather_rows(basis_x.functions, out.p2p.to_source);
    out.map.C = procrustes(pulled, basis_y.functions);
    out.error_history.push_back(alignment_error(pulled, basis_y.functions, out.map.C));
    check_monotone(out.error_history, "spectral alignment error");
    PointMap next = p2p_from_fmap(out.map.C, basis_x, basis_y);
    if (next.to_source == out.p2p.to_source) {
      out.converged = true;
      break;
    }
    out.p2p = std::move(next);
  }
  out.iterations = std::min(out.iterations, iterations);
  return out;
}

double round_trip_error(const EdgeGraph& graph_x, const Eigen::VectorXi& to_source, const Eigen::VectorXi& to_target) {
  DistanceCache dist(graph_x);
  return round_trip(dist, to_source, to_target);
}

BijectiveRefineResult bijective_refine(const Eigen::MatrixXd& c_xy, const Eigen::MatrixXd& c_yx,
                                       const TriMesh& mesh_x, const TriMesh& mesh_y, const SpectralBasis& basis_x,
                                       const SpectralBasis& basis_y, int iterations) {
  if (mesh_x.num_vertices() != basis_x.num_vertices() || mesh_y.num_vertices() != basis_y.num_vertices())
    throw ValidationError("meshes do not match their bases");
  BijectiveRefineResult out;
  const IcpRefineResult forward = icp_refine(c_xy, basis_x, basis_y, iterations);
  const IcpRefineResult backward = icp_refine(c_yx, basis_y, basis_x, iterations);
  Eigen::VectorXi t = forward.p2p.to_source;
  Eigen::VectorXi s = backward.p2p.to_source;
  out.map.to_source = t;
  out.map.to_target = s;

  const EdgeGraph graph_x(mesh_x);
  DistanceCache dist(graph_x);
  out.round_trip_history.push_back(round_trip(dist, t, s));

  const double nx = static_cast<double>(mesh_x.num_vertices()), ny = static_cast<double>(mesh_y.num_vertices());
  if (std::max(nx, ny) > 2.0 * std::min(nx, ny)) {
    out.warnings.push_back("vertex counts differ by more than 2x; bijectivity pass skipped");
    return out;
  }

  Mat cf = forward.map.C, cb = backward.map.C;
  out.reassigned += consistency_pass(dist, t, s, nearest_rows(basis_y.functions, basis_x.functions * cf.transpose()),
                                     nearest_rows(basis_x.functions, basis_y.functions * cb.transpose()));
  out.round_trip_history.push_back(round_trip(dist, t, s));
  check_monotone(out.round_trip_history, "round-trip error");
  out.map.to_source = t;
  out.map.to_target = s;

  for (int it = 0; it < iterations; ++it) {
    const Mat cf_next = procrustes(gather_rows(basis_x.functions, t), basis_y.functions);
    const Mat cb_next = procrustes(gather_rows(basis_y.functions, s), basis_x.functions);
    const NearestNeighbors nn_t = nearest_rows(basis_y.functions, basis_x.functions * cf_next.transpose());
    const NearestNeighbors nn_s = nearest_rows(basis_x.functions, basis_y.functions * cb_next.transpose());
    Eigen::VectorXi t_next = nn_t.first, s_next = nn_s.first;
    const int moved = consistency_pass(dist, t_next, s_next, nn_t, nn_s);
    const double error = round_trip(dist, t_next, s_next);
    if (error > out.round_trip_history.back()) break;
    const bool fixed = t_next == t && s_next == s;
    out.reassigned += moved;
    out.round_trip_history.push_back(error);
    t = std::move(t_next);
    s = std::move(s_next);
    out.map.to_source = t;
    out.map.to_target = s;
    if (fixed) break;
  }
  return out;
}

}  // namespace fmgrasp
