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
#include "fmgrasp/fmap/nearest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "fmgrasp/common/error.h"
#include "fmgrasp/fmap/point_map.h"

namespace fmgrasp {

PointMap PointMap::identity(Index n) {
  PointMap map;
  map.to_source = Eigen::VectorXi::LinSpaced(n, 0, static_cast<int>(n) - 1);
  return map;
}

bool PointMap::valid(Index num_source) const {
  if (to_source.size() > 0 && (to_source.minCoeff() < 0 || to_source.maxCoeff() >= num_source)) return false;
  if (to_target && to_target->size() > 0) {
    if (to_target->size() != num_source) return false;
    if (to_target->minCoeff() < 0 || to_target->maxCoeff() >= num_target()) return false;
  }
  return true;
}

bool PointMap::is_permutation(Index num_source) const {
  if (to_source.size() != num_source || !valid(num_source)) return false;
  std::vector<char> hit(static_cast<std::size_t>(num_source), 0);
  for (Index i = 0; i < to_source.size(); ++i) {
    if (hit[to_source[i]]) return false;
    hit[to_source[i]] = 1;
  }
  return true;
}

NearestNeighbors nearest_rows(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& points) {
  if (points.rows() == 0) throw ValidationError("nearest neighbor search over an empty point set");
  if (queries.cols() != points.cols()) throw ValidationError("nearest neighbor dimension mismatch");
  constexpr Index kBlock = 256;
  const Index nq = queries.rows(), np = points.rows();
  NearestNeighbors out;
  out.first.resize(nq);
  out.second.resize(nq);
  out.first_distance.resize(nq);
  out.second_distance.resize(nq);
  const Eigen::VectorXd pn = points.rowwise().squaredNorm();
  for (Index start = 0; start < nq; start += kBlock) {
    const Index rows = std::min(kBlock, nq - start);
    const auto q = queries.middleRows(start, rows);
    Eigen::MatrixXd d = -2.0 * q * points.transpose();
    d.rowwise() += pn.transpose();
    d.colwise() += q.rowwise().squaredNorm();
    for (Index r = 0; r < rows; ++r) {
      Index best = 0, second = -1;
      double bd = d(r, 0), sd = std::numeric_limits<double>::infinity();
      for (Index c = 1; c < np; ++c) {
        const double v = d(r, c);
        if (v < bd) {
          second = best;
          sd = bd;
          best = c;
          bd = v;
        } else if (v < sd) {
          second = c;
          sd = v;
        }
      }
      if (second < 0) {
        second = best;
        sd = bd;
      }
      out.first[start + r] = static_cast<int>(best);
      out.second[start + r] = static_cast<int>(second);
      out.first_distance[start + r] = std::sqrt(std::max(bd, 0.0));
      out.second_distance[start + r] = std::sqrt(std::max(sd, 0.0));
    }
  }
  return out;
}

}  // namespace fmgrasp
