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
#include <string>

#include "fmgrasp/spectral/eigenbasis.h"

namespace fmgrasp {

/// Per-vertex descriptor matrix (rows = vertices, columns = descriptor functions).
struct DescriptorField {
  Eigen::MatrixXd values;
  /// Log-energy sample of each column.
  Eigen::VectorXd energies;
  /// Gaussian width in log-energy units.
  double sigma = 0.0;

  Index num_vertices() const { return values.rows(); }
  Index size() const { return values.cols(); }
};

/// Eigenvalues at or below this fraction of the largest one are treated as zero.
inline constexpr double kZeroEigenvalue = 1e-8;

/// Wave kernel signature at `d` log-energies. With span = log(lambda_k) - log(lambda_2)
/// (lambda_2 = smallest nonzero eigenvalue), sigma = sigma_factor * span / d and the
/// energies are uniform in [log(lambda_2) + 2 sigma, log(lambda_k) - 2 sigma]; an empty
/// interval collapses to its midpoint. Zero eigenvalues carry no weight.
/// Throws ConfigError for d < 1 or sigma_factor <= 0 and ValidationError when the
/// basis has fewer than two nonzero eigenvalues.
DescriptorField wks(const SpectralBasis& basis, Index d, double sigma_factor = 7.0);

/// Keeps every `step`-th column starting at the first.
DescriptorField subsample_descriptors(const DescriptorField& field, Index step);

/// Columns scaled to unit norm in the mass-weighted inner product.
Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& values, const Eigen::VectorXd& mass);

/// "vertex,e0,e1,..." header followed by one row per vertex.
std::string descriptors_to_csv(const DescriptorField& field);

}  // namespace fmgrasp
