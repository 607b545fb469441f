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
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fmgrasp/common/error.h"
#include "fmgrasp/descriptors/wks.h"
#include "fmgrasp/spectral/eigenbasis.h"
#include "test_support.h"

using namespace fmgrasp;

namespace {

/// Direct evaluation of the wave kernel signature from its definition.
Eigen::MatrixXd wks_reference(const SpectralBasis& b, const Eigen::VectorXd& energies, double sigma) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(b.num_vertices(), energies.size());
  const double cut = kZeroEigenvalue * b.eigenvalues.maxCoeff();
  for (Index j = 0; j < energies.size(); ++j) {
    double norm = 0.0;
    for (Index i = 0; i < b.size(); ++i) {
      if (b.eigenvalues(i) <= cut) continue;
      const double w = std::exp(-std::pow(energies(j) - std::log(b.eigenvalues(i)), 2) / (2 * sigma * sigma));
      norm += w;
      for (Index v = 0; v < b.num_vertices(); ++v) out(v, j) += w * b.functions(v, i) * b.functions(v, i);
    }
    out.col(j) /= norm;
  }
  return out;
}

}  // namespace

TEST(Wks, MatchesDefinition) {
  const SpectralBasis b = compute_basis(test::asymmetric_tube(12, 24), 30);
  const DescriptorField f = wks(b, 50, 7.0);
  ASSERT_EQ(f.size(), 50);
  ASSERT_EQ(f.num_vertices(), b.num_vertices());
  const double lo = std::log(b.eigenvalues(1)), hi = std::log(b.eigenvalues.maxCoeff());
  EXPECT_NEAR(f.sigma, 7.0 * (hi - lo) / 50, 1e-12);
  for (Index j = 1; j < f.size(); ++j) EXPECT_GT(f.energies(j), f.energies(j - 1));
  EXPECT_GE(f.energies(0), lo);
  EXPECT_LE(f.energies(49), hi);
  EXPECT_LT((f.values - wks_reference(b, f.energies, f.sigma)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(f.values.minCoeff(), 0.0);
}

TEST(Wks, FewDescriptorsShareTheCentralEnergy) {
  const SpectralBasis b = compute_basis(test::asymmetric_tube(12, 24), 30);
  const DescriptorField f = wks(b, 5, 7.0);
  const double mid = 0.5 * (std::log(b.eigenvalues(1)) + std::log(b.eigenvalues.maxCoeff()));
  for (Index j = 0; j < f.size(); ++j) EXPECT_NEAR(f.energies(j), mid, 1e-12);
}

TEST(Wks, ColumnsIntegrateToOne) {
  const SpectralBasis b = compute_basis(test::asymmetric_tube(12, 24), 40);
  const DescriptorField f = wks(b, 50);
  const Eigen::VectorXd integrals = f.values.transpose() * b.mass;
  for (Index j = 0; j < integrals.size(); ++j) EXPECT_NEAR(integrals(j), 1.0, 1e-9);
}

TEST(Wks, InvariantUnderRigidMotion) {
  TriMesh m = test::asymmetric_tube(12, 24);
  const DescriptorField a = wks(compute_basis(m, 25), 10);
  std::mt19937_64 rng(5);
  m.vertices = (test::random_rotation(rng) * m.vertices).colwise() + Eigen::Vector3d(0.3, -0.2, 1.0);
  const DescriptorField b = wks(compute_basis(m, 25), 10);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-6 * a.values.cwiseAbs().maxCoeff());
}

TEST(Wks, NormalizeColumnsGivesUnitMassNorm) {
  const SpectralBasis b = compute_basis(test::asymmetric_tube(12, 24), 20);
  const Eigen::MatrixXd n = normalize_columns(wks(b, 8).values, b.mass);
  for (Index j = 0; j < n.cols(); ++j) EXPECT_NEAR(n.col(j).cwiseAbs2().dot(b.mass), 1.0, 1e-12);
  const Eigen::MatrixXd zero = normalize_columns(Eigen::MatrixXd::Zero(b.num_vertices(), 1), b.mass);
  EXPECT_EQ(zero.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Wks, SubsampleKeepsEveryStepColumn) {
  const DescriptorField f = wks(compute_basis(test::asymmetric_tube(12, 24), 20), 10);
  const DescriptorField s = subsample_descriptors(f, 3);
  ASSERT_EQ(s.size(), 4);
  EXPECT_EQ(s.values.col(2), f.values.col(6));
  EXPECT_THROW(subsample_descriptors(f, 0), ConfigError);
}

TEST(Wks, RejectsInvalidArguments) {
  const SpectralBasis b = compute_basis(test::asymmetric_tube(12, 24), 10);
  EXPECT_THROW(wks(b, 0), ConfigError);
  EXPECT_THROW(wks(b, 5, 0.0), ConfigError);
  EXPECT_THROW(wks(truncate(b, 2), 5), ValidationError);
}

TEST(Wks, CsvHasHeaderAndRows) {
  const DescriptorField f = wks(compute_basis(test::asymmetric_tube(8, 8), 10), 3);
  const std::string csv = descriptors_to_csv(f);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), f.num_vertices() + 1);
  EXPECT_EQ(csv.rfind("vertex,e", 0), 0u);
}
