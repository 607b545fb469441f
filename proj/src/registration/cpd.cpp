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
#include "fmgrasp/registration/cpd.h"

#include <Eigen/LU>
#include <cmath>
#include <limits>

#include "fmgrasp/common/error.h"
#include "fmgrasp/fmap/nearest.h"
#include "json.hpp"

namespace fmgrasp {
namespace {

constexpr double kMinSigma2 = 1e-10;

struct Normalization {
  Eigen::Vector3d center;
  double scale = 1.0;
};

Normalization normalization(const Eigen::Matrix3Xd& points) {
  Normalization n;
  n.center = points.rowwise().mean();
  const double rms = std::sqrt((points.colwise() - n.center).colwise().squaredNorm().mean());
  n.scale = rms > 0 ? rms : 1.0;
  return n;
}

Eigen::Matrix3Xd gather(const Eigen::Matrix3Xd& points, const std::vector<Index>& ids) {
  Eigen::Matrix3Xd out(3, static_cast<Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) out.col(static_cast<Index>(i)) = points.col(ids[i]);
  return out;
}

Eigen::MatrixXd squared_distances(const Eigen::Matrix3Xd& a, const Eigen::Matrix3Xd& b) {
  Eigen::MatrixXd d = -2.0 * a.transpose() * b;
  d.colwise() += a.colwise().squaredNorm().transpose();
  d.rowwise() += b.colwise().squaredNorm();
  return d.cwiseMax(0.0);
}

Eigen::MatrixXd gaussian_kernel(const Eigen::Matrix3Xd& a, const Eigen::Matrix3Xd& b, double beta) {
  return (-squared_distances(a, b) / (2.0 * beta * beta)).array().exp();
}

std::vector<Index> subsample(const Eigen::Matrix3Xd& points, Index max_points) {
  if (max_points <= 0 || points.cols() <= max_points) {
    std::vector<Index> all(points.cols());
    for (Index i = 0; i < points.cols(); ++i) all[i] = i;
    return all;
  }
  return farthest_point_sample(points, max_points);
}

}  // namespace

void CpdConfig::validate() const {
  if (!(beta > 0)) throw ConfigError("cpd beta must be > 0");
  if (!(lambda >= 0)) throw ConfigError("cpd lambda must be >= 0");
  if (!(w_outlier >= 0 && w_outlier < 1)) throw ConfigError("cpd w_outlier must be in [0, 1)");
  if (max_iterations < 1) throw ConfigError("cpd max_iterations must be >= 1");
  if (!(tolerance > 0)) throw ConfigError("cpd tolerance must be > 0");
  if (max_points < 0) throw ConfigError("cpd max_points must be >= 0");
}

std::vector<Index> farthest_point_sample(const Eigen::Matrix3Xd& points, Index count) {
  const Index n = points.cols();
  count = std::min(count, n);
  std::vector<Index> out;
  if (count <= 0) return out;
  out.reserve(count);
  const Eigen::Vector3d c = points.rowwise().mean();
  Index next = 0;
  (points.colwise() - c).colwise().squaredNorm().maxCoeff(&next);
  Eigen::VectorXd nearest = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  while (static_cast<Index>(out.size()) < count) {
    out.push_back(next);
    nearest = nearest.cwiseMin((points.colwise() - points.col(next)).colwise().squaredNorm().transpose());
    nearest.maxCoeff(&next);
  }
  return out;
}

Responsibilities cpd_responsibilities(const Eigen::Matrix3Xd& moved, const Eigen::Matrix3Xd& target, double sigma2,
                                      double w_outlier) {
  const Index m = moved.cols(), n = target.cols();
  const double log_component = std::log((1.0 - w_outlier) / static_cast<double>(m)) - 1.5 * std::log(2 * M_PI * sigma2);
  const double log_outlier =
      w_outlier > 0 ? std::log(w_outlier / static_cast<double>(n)) : -std::numeric_limits<double>::infinity();
  Responsibilities r;
  r.p = -squared_distances(moved, target) / (2.0 * sigma2);
  r.outlier.resize(n);
  for (Index j = 0; j < n; ++j) {
    auto col = r.p.col(j);
    const double top = col.maxCoeff();
    const double log_inlier = log_component + top + std::log((col.array() - top).exp().sum());
    const double hi = std::max(log_inlier, log_outlier);
    const double log_total = hi + std::log(std::exp(log_inlier - hi) + std::exp(log_outlier - hi));
    col = (col.array() + (log_component - log_total)).exp();
    r.outlier[j] = std::exp(log_outlier - log_total);
    r.nll -= log_total;
  }
  return r;
}

CpdResult cpd_nonrigid(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& target, const CpdConfig& config) {
  config.validate();
  if (source.cols() < 1 || target.cols() < 1) throw ValidationError("cpd: empty point set");
  if (!source.allFinite() || !target.allFinite()) throw ValidationError("cpd: non-finite points");

  const Normalization ns = normalization(source), nt = normalization(target);
  const Eigen::Matrix3Xd y_all = (source.colwise() - ns.center) / ns.scale;
  const Eigen::Matrix3Xd x_all = (target.colwise() - nt.center) / nt.scale;
  const Eigen::Matrix3Xd y = gather(y_all, subsample(y_all, config.max_points));
  const Eigen::Matrix3Xd x = gather(x_all, subsample(x_all, config.max_points));
  const Index m = y.cols();

  const Eigen::MatrixXd g = gaussian_kernel(y, y, config.beta);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, 3);
  Eigen::Matrix3Xd moved = y;
  double sigma2 = squared_distances(y, x).mean() / 3.0;

  CpdResult out;
  for (out.iterations = 1; out.iterations <= config.max_iterations; ++out.iterations) {
    const Responsibilities r = cpd_responsibilities(moved, x, sigma2, config.w_outlier);
    const double objective = r.nll + 0.5 * config.lambda * (w.transpose() * g * w).trace();
    if (!out.objective_history.empty()) {
      const double prev = out.objective_history.back();
      out.objective_history.push_back(objective);
      if (std::abs(prev - objective) <= config.tolerance * std::max(1.0, std::abs(prev))) {
        out.converged = true;
        break;
      }
    } else {
      out.objective_history.push_back(objective);
    }
    if (sigma2 <= kMinSigma2) {
      out.converged = true;
      break;
    }

    const Eigen::VectorXd p1 = r.p.rowwise().sum();
    const Eigen::VectorXd pt1 = r.p.colwise().sum().transpose();
    const double np = p1.sum();
    const Eigen::MatrixXd px = r.p * x.transpose();
    Eigen::MatrixXd lhs = p1.asDiagonal() * g;
    lhs.diagonal().array() += config.lambda * sigma2;
    const Eigen::MatrixXd rhs = px - p1.asDiagonal() * y.transpose();
    w = Eigen::PartialPivLU<Eigen::MatrixXd>(lhs).solve(rhs);
    moved = y + (g * w).transpose();

    const double sx = pt1.dot(x.colwise().squaredNorm().transpose());
    const double sxt = (px.array() * moved.transpose().array()).sum();
    const double st = p1.dot(moved.colwise().squaredNorm().transpose());
    sigma2 = std::max((sx - 2.0 * sxt + st) / (3.0 * np), kMinSigma2);
  }
  if (!out.converged) {
    out.iterations = config.max_iterations;
    out.warnings.push_back("cpd reached max_iterations without meeting the tolerance");
  }
  out.sigma2 = sigma2 * nt.scale * nt.scale;

  const Eigen::Matrix3Xd moved_all = y_all + (gaussian_kernel(y_all, y, config.beta) * w).transpose();
  out.displaced = (moved_all * nt.scale).colwise() + nt.center;
  // Equal-variance, equal-weight components: the posterior maximum is the nearest center.
  out.map.to_source = nearest_rows(x_all.transpose(), moved_all.transpose()).first;
  return out;
}

PointMap pointmap_from_registration(const Eigen::VectorXi& assignment, const TriMesh& source, const TriMesh& target) {
  if (assignment.size() != target.num_vertices())
    throw ValidationError("assignment covers " + std::to_string(assignment.size()) + " of " +
                          std::to_string(target.num_vertices()) + " target vertices");
  PointMap map;
  map.to_source = assignment;
  if (!map.valid(source.num_vertices())) throw ValidationError("assignment has out-of-range source ids");
  return map;
}

std::string cpd_report_json(const CpdResult& result) {
  nlohmann::ordered_json j;
  j["method"] = "cpd";
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["sigma2"] = result.sigma2;
  j["final_objective"] = result.objective_history.empty() ? 0.0 : result.objective_history.back();
  j["objective_history"] = result.objective_history;
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

}  // namespace fmgrasp
