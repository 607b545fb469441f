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

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "fmgrasp/common/error.h"

namespace fmgrasp {

/// Proper rigid motion x -> R x + t.
template <typename Scalar>
struct RigidTransform {
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Points = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

  Matrix3 rotation = Matrix3::Identity();
  Vector3 translation = Vector3::Zero();

  static RigidTransform identity() { return {}; }

  Vector3 operator*(const Vector3& p) const { return rotation * p + translation; }

  Points apply(const Points& points) const { return (rotation * points).colwise() + translation; }

  /// (this * other)(x) = this(other(x)).
  RigidTransform operator*(const RigidTransform& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  RigidTransform inverse() const { return {rotation.transpose(), -(rotation.transpose() * translation)}; }

  Eigen::Transform<Scalar, 3, Eigen::Isometry> isometry() const {
    Eigen::Transform<Scalar, 3, Eigen::Isometry> out = Eigen::Transform<Scalar, 3, Eigen::Isometry>::Identity();
    out.linear() = rotation;
    out.translation() = translation;
    return out;
  }
};

using RigidTransformd = RigidTransform<double>;

/// Angle of the relative rotation between two rotation matrices.
template <typename Scalar>
Scalar rotation_angle_between(const Eigen::Matrix<Scalar, 3, 3>& a, const Eigen::Matrix<Scalar, 3, 3>& b) {
  const Scalar c = ((a.transpose() * b).trace() - Scalar(1)) / Scalar(2);
  return std::acos(std::clamp(c, Scalar(-1), Scalar(1)));
}

/// Least-squares rigid motion taking `source` columns onto `target` columns
/// (Kabsch, reflection corrected). Throws ValidationError for fewer than three
/// points or a collinear source.
template <typename Scalar>
RigidTransform<Scalar> kabsch(const Eigen::Matrix<Scalar, 3, Eigen::Dynamic>& source,
                              const Eigen::Matrix<Scalar, 3, Eigen::Dynamic>& target) {
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  if (source.cols() != target.cols()) throw ValidationError("kabsch: point counts differ");
  if (source.cols() < 3) throw ValidationError("kabsch: need at least 3 points");
  const Vector3 cs = source.rowwise().mean();
  const Vector3 ct = target.rowwise().mean();
  const auto s = (source.colwise() - cs).eval();
  const auto t = (target.colwise() - ct).eval();

  const Eigen::JacobiSVD<Matrix3> spread(s * s.transpose());
  const auto sv = spread.singularValues();
  if (!(sv[1] > Scalar(1e-12) * sv[0])) throw ValidationError("kabsch: degenerate (collinear) point configuration");

  const Eigen::JacobiSVD<Matrix3> svd(t * s.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 d = Matrix3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) d(2, 2) = Scalar(-1);
  RigidTransform<Scalar> out;
  out.rotation = svd.matrixU() * d * svd.matrixV().transpose();
  out.translation = ct - out.rotation * cs;
  return out;
}

}  // namespace fmgrasp
