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
#include "fmgrasp/descriptors/wks.h"

#include <cmath>
#include <sstream>

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"

namespace fmgrasp {

DescriptorField wks(const SpectralBasis& basis, Index d, double sigma_factor) {
  if (d < 1) throw ConfigError("descriptor count d must be >= 1");
  if (!(sigma_factor > 0)) throw ConfigError("sigma_factor must be positive");
  const Index k = basis.size();
  if (k == 0) throw ValidationError("empty spectral basis");
  const double top = basis.eigenvalues.maxCoeff();
  const double cut = kZeroEigenvalue * std::max(top, 0.0);
  Index first = -1;
  Index nonzero = 0;
  for (Index i = 0; i < k; ++i)
    if (basis.eigenvalues[i] > cut) {
      if (first < 0) first = i;
      ++nonzero;
    }
  if (nonzero < 2) throw ValidationError("WKS needs at least two nonzero eigenvalues");

  const double lo = std::log(basis.eigenvalues[first]);
  const double hi = std::log(top);
  DescriptorField field;
  field.sigma = sigma_factor * (hi - lo) / static_cast<double>(d);
  double e_min = lo + 2 * field.sigma;
  double e_max = hi - 2 * field.sigma;
  if (e_min > e_max) e_min = e_max = 0.5 * (lo + hi);
  field.energies = d == 1 ? Eigen::VectorXd(Eigen::VectorXd::Constant(1, 0.5 * (e_min + e_max)))
                          : Eigen::VectorXd(Eigen::VectorXd::LinSpaced(d, e_min, e_max));

  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(k, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < k; ++i) {
      if (basis.eigenvalues[i] <= cut) continue;
      const double t = field.energies[j] - std::log(basis.eigenvalues[i]);
      weights(i, j) = std::exp(-t * t / (2 * field.sigma * field.sigma));
    }
    const double total = weights.col(j).sum();
    if (!(total > 0)) throw NumericalError("WKS weights underflow at energy " + format_double(field.energies[j]));
    weights.col(j) /= total;
  }
  field.values = basis.functions.cwiseAbs2() * weights;
  return field;
}

DescriptorField subsample_descriptors(const DescriptorField& field, Index step) {
  if (step < 1) throw ConfigError("descriptor subsampling step must be >= 1");
  const Index kept = (field.size() + step - 1) / step;
  DescriptorField out;
  out.sigma = field.sigma;
  out.values.resize(field.num_vertices(), kept);
  out.energies.resize(kept);
  for (Index j = 0; j < kept; ++j) {
    out.values.col(j) = field.values.col(j * step);
    out.energies[j] = field.energies[j * step];
  }
  return out;
}

Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& values, const Eigen::VectorXd& mass) {
  Eigen::MatrixXd out = values;
  for (Index j = 0; j < out.cols(); ++j) {
    const double norm = std::sqrt(out.col(j).cwiseAbs2().dot(mass));
    if (norm > 0) out.col(j) /= norm;
  }
  return out;
}

std::string descriptors_to_csv(const DescriptorField& field) {
  std::ostringstream os;
  os << "vertex";
  for (Index j = 0; j < field.size(); ++j) os << ",e" << format_double(field.energies[j]);
  os << '\n';
  for (Index v = 0; v < field.num_vertices(); ++v) {
    os << v;
    for (Index j = 0; j < field.size(); ++j) os << ',' << format_double(field.values(v, j), 12);
    os << '\n';
  }
  return os.str();
}

}  // namespace fmgrasp
