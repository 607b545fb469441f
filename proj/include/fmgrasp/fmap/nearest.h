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

#include <Eigen/Core>
#include <vector>

namespace fmgrasp {

struct NearestNeighbors {
  Eigen::VectorXi first;
  Eigen::VectorXi second;
  Eigen::VectorXd first_distance;
  Eigen::VectorXd second_distance;
};

/// For every row of `queries` the nearest and second-nearest rows of `points`
/// (Euclidean). Ties resolve to the lowest index. Needs at least one point; with a
/// single point the second neighbor repeats the first.
NearestNeighbors nearest_rows(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& points);

}  // namespace fmgrasp
