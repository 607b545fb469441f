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
#include "fmgrasp/registration/icp.h"

#include <algorithm>
#include <numeric>

#include "fmgrasp/fmap/nearest.h"
#include "json.hpp"

namespace fmgrasp {

void IcpConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("icp max_iterations must be >= 1");
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) throw ConfigError("icp trim_fraction must be in [0, 1)");
  if (!(tolerance >= 0.0)) throw ConfigError("icp tolerance must be >= 0");
}

IcpResult icp_rigid(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& target, const IcpConfig& config) {
  config.validate();
  if (source.cols() < 3 || target.cols() < 3) throw ValidationError("icp: need at least 3 points per set");
  if (!source.allFinite() || !target.allFinite()) throw ValidationError("icp: non-finite points");
  kabsch<double>(source, source);  // rejects a collinear source
  kabsch<double>(target, target);

  const Index m = target.cols();
  const Index keep = std::max<Index>(3, static_cast<Index>(std::ceil((1.0 - config.trim_fraction) * m)));
  const Eigen::MatrixXd target_rows = target.transpose();
  IcpResult out;
  out.transform.translation = target.rowwise().mean() - source.rowwise().mean();
  std::vector<Index> order(m);
  Eigen::Matrix3Xd src(3, keep), dst(3, keep);
  RigidTransformd previous = out.transform;

  for (out.iterations = 1; out.iterations <= config.max_iterations; ++out.iterations) {
    const Eigen::Matrix3Xd moved = out.transform.apply(source);
    NearestNeighbors nn = nearest_rows(target_rows, moved.transpose());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return nn.first_distance[a] < nn.first_distance[b]; });
    double mse = 0.0;
    for (Index i = 0; i < keep; ++i) mse += nn.first_distance[order[i]] * nn.first_distance[order[i]];
    mse /= static_cast<double>(keep);
    if (!out.mse_history.empty() && mse > out.mse_history.back()) {
      out.transform = previous;
      out.converged = true;
      break;
    }
    const bool stalled = !out.mse_history.empty() && out.mse_history.back() - mse <= config.tolerance * out.mse_history.back();
    out.map.to_source = nn.first;
    out.mse_history.push_back(mse);
    if (stalled || mse == 0.0) {
      out.converged = true;
      break;
    }
    for (Index i = 0; i < keep; ++i) {
      src.col(i) = source.col(nn.first[order[i]]);
      dst.col(i) = target.col(order[i]);
    }
    previous = out.transform;
    out.transform = kabsch<double>(src, dst);
  }
  out.iterations = std::min(out.iterations, config.max_iterations);
  return out;
}

std::string icp_report_json(const IcpResult& result) {
  nlohmann::ordered_json j;
  j["method"] = "icp";
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["residual_mse"] = result.residual();
  const auto& r = result.transform.rotation;
  j["rotation"] = {{r(0, 0), r(0, 1), r(0, 2)}, {r(1, 0), r(1, 1), r(1, 2)}, {r(2, 0), r(2, 1), r(2, 2)}};
  j["translation"] = {result.transform.translation.x(), result.transform.translation.y(),
                      result.transform.translation.z()};
  j["mse_history"] = result.mse_history;
  return j.dump(2) + "\n";
}

}  // namespace fmgrasp
