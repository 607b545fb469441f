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

#include <Eigen/Eigenvalues>
#include <filesystem>
#include <random>

#include "fmgrasp/common/error.h"
#include "fmgrasp/mesh/primitives.h"
#include "fmgrasp/spectral/basis_cache.h"
#include "fmgrasp/spectral/eigenbasis.h"
#include "fmgrasp/spectral/laplacian.h"
#include "test_support.h"

using namespace fmgrasp;

namespace {

double orthonormality_defect(const SpectralBasis& b) {
  const Eigen::MatrixXd g = b.functions.transpose() * b.mass.asDiagonal() * b.functions;
  return (g - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff();
}

double eigen_residual(const LaplaceOperator& op, const SpectralBasis& b) {
  const Eigen::MatrixXd lhs = op.stiffness * b.functions;
  const Eigen::MatrixXd rhs = op.mass.asDiagonal() * b.functions * b.eigenvalues.asDiagonal();
  return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, b.eigenvalues.maxCoeff() * op.mass.maxCoeff());
}

}  // namespace

TEST(Laplacian, SymmetricPsdWithZeroRowSums) {
  const TriMesh m = test::asymmetric_tube();
  const LaplaceOperator op = cotan_laplacian(m);
  const Eigen::SparseMatrix<double> diff = op.stiffness - Eigen::SparseMatrix<double>(op.stiffness.transpose());
  EXPECT_LT(diff.norm(), 1e-12 * op.stiffness.norm());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.size());
  EXPECT_LT((op.stiffness * ones).cwiseAbs().maxCoeff(), 1e-9);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd x(op.size());
    for (Index i = 0; i < x.size(); ++i) x(i) = n(rng);
    EXPECT_GE(x.dot(op.stiffness * x), -1e-9);
  }
  EXPECT_NEAR(op.mass.sum(), surface_area(m), 1e-12);
  EXPECT_GT(op.mass.minCoeff(), 0.0);
}

TEST(Laplacian, ReproducesLinearFunctionsOnFlatGrid) {
  const TriMesh g = make_grid(8, 1.0);
  const LaplaceOperator op = cotan_laplacian(g);
  const Eigen::VectorXd f = 2.0 * g.vertices.row(0).transpose() - 3.0 * g.vertices.row(1).transpose();
  const Eigen::VectorXd lf = op.stiffness * f;
  for (Index v = 0; v < g.num_vertices(); ++v) {
    const bool boundary = (g.vertices.col(v).head<2>().array() < 1e-12).any() ||
                          (g.vertices.col(v).head<2>().array() > 1.0 - 1e-12).any();
    if (!boundary) {
      EXPECT_NEAR(lf(v), 0.0, 1e-12);
    }
  }
}

TEST(Eigenbasis, SphereSpectrumAndOrthonormality) {
  const TriMesh s = make_icosphere(3);
  const LaplaceOperator op = cotan_laplacian(s);
  const SpectralBasis b = eigenbasis(op, 16);
  EXPECT_NEAR(b.eigenvalues(0), 0.0, 1e-8);
  for (Index i = 1; i < 16; ++i) {
    const double l = i < 4 ? 1 : (i < 9 ? 2 : 3);
    EXPECT_NEAR(b.eigenvalues(i), l * (l + 1), 0.05 * l * (l + 1)) << i;
    EXPECT_GE(b.eigenvalues(i), b.eigenvalues(i - 1));
  }
  EXPECT_LT(orthonormality_defect(b), 1e-8);
  EXPECT_LT(eigen_residual(op, b), 1e-6);
  const Eigen::VectorXd c0 = b.functions.col(0);
  EXPECT_LT((c0.array() - c0.mean()).abs().maxCoeff(), 1e-8);
}

TEST(Eigenbasis, KrylovAgreesWithDense) {
  const TriMesh m = test::asymmetric_tube(12, 24);
  const LaplaceOperator op = cotan_laplacian(m);
  EigenOptions sparse;
  sparse.dense_threshold = 0;
  const SpectralBasis a = eigenbasis(op, 20);
  const SpectralBasis b = eigenbasis(op, 20, sparse);
  EXPECT_LT((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff(), 1e-7 * a.eigenvalues.maxCoeff());
  EXPECT_LT(orthonormality_defect(b), 1e-8);
  EXPECT_LT(eigen_residual(op, b), 1e-6);
  // Canonical signs make the two solvers return the same functions.
  for (Index i = 0; i < 20; ++i) {
    if (i > 0 && b.eigenvalues(i) - b.eigenvalues(i - 1) < 1e-6 * b.eigenvalues(i)) continue;
    if (i + 1 < 20 && b.eigenvalues(i + 1) - b.eigenvalues(i) < 1e-6 * b.eigenvalues(i + 1)) continue;
    EXPECT_LT((a.functions.col(i) - b.functions.col(i)).cwiseAbs().maxCoeff(), 1e-5) << i;
  }
}

TEST(Eigenbasis, PermutationEquivariant) {
  const TriMesh m = test::asymmetric_tube(12, 24);
  Eigen::VectorXi perm(m.num_vertices());
  for (Index i = 0; i < perm.size(); ++i) perm(i) = static_cast<int>(i);
  std::mt19937_64 rng(11);
  std::shuffle(perm.data(), perm.data() + perm.size(), rng);
  const TriMesh p = permute_vertices(m, perm);
  const SpectralBasis a = compute_basis(m, 15);
  const SpectralBasis b = compute_basis(p, 15);
  EXPECT_LT((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff(), 1e-8 * a.eigenvalues.maxCoeff());
  // Vertex v of the permuted mesh is vertex old(v) of the original.
  Index matched = 0;
  for (Index v = 0; v < p.num_vertices(); ++v) {
    Index old = 0;
    (m.vertices.colwise() - p.vertex(v)).colwise().squaredNorm().minCoeff(&old);
    matched += (a.functions.row(old) - b.functions.row(v)).cwiseAbs().maxCoeff() < 1e-6;
  }
  EXPECT_EQ(matched, p.num_vertices());
}

TEST(Eigenbasis, ProjectReconstructAndTruncate) {
  const SpectralBasis b = compute_basis(make_icosphere(2), 12);
  Eigen::VectorXd coeffs = Eigen::VectorXd::LinSpaced(12, 1.0, 2.0);
  EXPECT_LT((project(b, reconstruct(b, coeffs)) - coeffs).cwiseAbs().maxCoeff(), 1e-10);
  const SpectralBasis t = truncate(b, 5);
  EXPECT_EQ(t.size(), 5);
  EXPECT_EQ(t.functions, b.functions.leftCols(5));
  EXPECT_THROW(truncate(b, 13), Error);
}

TEST(Eigenbasis, RejectsBadRequests) {
  const TriMesh s = make_icosphere(0);
  EXPECT_THROW(compute_basis(s, 0), Error);
  EXPECT_THROW(compute_basis(s, s.num_vertices() + 1), Error);
}

TEST(BasisCache, ReturnsIdenticalBasisAndKeysOnMesh) {
  const auto dir = std::filesystem::temp_directory_path() / "fmgrasp_cache_test";
  std::filesystem::remove_all(dir);
  const BasisCache cache(dir);
  const TriMesh m = make_icosphere(2);
  auto entries = [&] {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) out.push_back(e.path());
    return out;
  };
  const SpectralBasis first = cache.get(m, 10);
  const auto files = entries();
  ASSERT_EQ(files.size(), 1u);
  const SpectralBasis second = cache.get(m, 10);
  EXPECT_EQ(first.functions, second.functions);
  EXPECT_EQ(first.eigenvalues, second.eigenvalues);
  EXPECT_EQ(entries().size(), 1u);
  EXPECT_FALSE(load_basis(files[0], 12345, 10).has_value());
  TriMesh moved = m;
  moved.vertices(0, 0) += 1e-3;
  cache.get(moved, 10);
  EXPECT_EQ(entries().size(), 2u);
}
