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

#include <filesystem>
#include <random>

#include "fmgrasp/common/error.h"
#include "fmgrasp/descriptors/wks.h"
#include "fmgrasp/fmap/fmap_io.h"
#include "fmgrasp/fmap/functional_map.h"
#include "fmgrasp/fmap/nearest.h"
#include "fmgrasp/fmap/refine.h"
#include "fmgrasp/mesh/deform.h"
#include "fmgrasp/mesh/geodesic.h"
#include "fmgrasp/spectral/eigenbasis.h"
#include "test_support.h"

using namespace fmgrasp;

namespace {

struct Pair {
  TriMesh x, y;
  SpectralBasis bx, by;
  DescriptorField fx, fy;
};

const Pair& bent_pair() {
  static const Pair pair = [] {
    Pair p;
    p.x = test::asymmetric_tube(12, 24);
    DeformationSpec spec;
    spec.bend_axis = Eigen::Vector3d::UnitX();
    spec.magnitude = M_PI / 2;
    spec.begin = 0.08;
    spec.end = 0.18;
    p.y = synth_deform(p.x, spec);
    p.bx = compute_basis(p.x, 20);
    p.by = compute_basis(p.y, 20);
    p.fx = wks(p.bx, 50);
    p.fy = wks(p.by, 50);
    return p;
  }();
  return pair;
}

void expect_non_increasing(const std::vector<double>& h, double slack = 1e-9) {
  for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1] * (1 + slack) + slack) << "step " << i;
}

}  // namespace

TEST(Nearest, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXd pts(200, 6), q(50, 6);
  for (Index i = 0; i < pts.size(); ++i) pts.data()[i] = n(rng);
  for (Index i = 0; i < q.size(); ++i) q.data()[i] = n(rng);
  const NearestNeighbors nn = nearest_rows(q, pts);
  for (Index i = 0; i < q.rows(); ++i) {
    std::vector<std::pair<double, Index>> d;
    for (Index j = 0; j < pts.rows(); ++j) d.push_back({(pts.row(j) - q.row(i)).norm(), j});
    std::sort(d.begin(), d.end());
    EXPECT_EQ(nn.first(i), d[0].second);
    EXPECT_EQ(nn.second(i), d[1].second);
    EXPECT_NEAR(nn.first_distance(i), d[0].first, 1e-9);
    EXPECT_NEAR(nn.second_distance(i), d[1].first, 1e-9);
  }
}

TEST(Nearest, TiesResolveToLowestIndex) {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(3, 2);
  const NearestNeighbors nn = nearest_rows(Eigen::MatrixXd::Zero(1, 2), pts);
  EXPECT_EQ(nn.first(0), 0);
  EXPECT_EQ(nn.second(0), 1);
}

TEST(FmapConversion, IdentityRoundTrip) {
  const SpectralBasis& b = bent_pair().bx;
  const Eigen::MatrixXd c = fmap_from_p2p(PointMap::identity(b.num_vertices()), b, b);
  EXPECT_LT((c - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-9);
  const PointMap back = p2p_from_fmap(c, b, b);
  EXPECT_EQ(back.to_source, PointMap::identity(b.num_vertices()).to_source);
}

TEST(FmapConversion, MatchesProjectionDefinition) {
  const Pair& p = bent_pair();
  PointMap map;
  map.to_source.resize(p.y.num_vertices());
  for (Index v = 0; v < map.num_target(); ++v) map.to_source(v) = static_cast<int>(v * 3 % p.x.num_vertices());
  Eigen::MatrixXd pulled(p.y.num_vertices(), p.bx.size());
  for (Index v = 0; v < map.num_target(); ++v) pulled.row(v) = p.bx.functions.row(map.to_source(v));
  const Eigen::MatrixXd expected = p.by.functions.transpose() * p.by.mass.asDiagonal() * pulled;
  EXPECT_LT((fmap_from_p2p(map, p.bx, p.by) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FitFmap, SelfPairIsIdentity) {
  const Pair& p = bent_pair();
  const FunctionalMap m = fit_fmap(p.bx, p.bx, p.fx, p.fx);
  EXPECT_LT((m.C - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_EQ(p2p_from_fmap(m.C, p.bx, p.bx).to_source, PointMap::identity(p.x.num_vertices()).to_source);
}

TEST(FitFmap, SolutionMinimizesEnergy) {
  const Pair& p = bent_pair();
  for (bool with_opcomm : {false, true}) {
    FmapConfig cfg;
    cfg.w_opcomm = with_opcomm ? 1.0 : 0.0;
    const FmapProblem problem = make_fmap_problem(p.bx, p.by, p.fx, p.fy, cfg);
    const FunctionalMap m = fit_fmap(problem);
    const double best = evaluate_energy(problem, m.C).total();
    EXPECT_NEAR(best, m.energy.total(), 1e-9 * std::max(1.0, best));
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0, 1);
    for (int t = 0; t < 10; ++t) {
      Eigen::MatrixXd d(20, 20);
      for (Index i = 0; i < d.size(); ++i) d.data()[i] = n(rng);
      EXPECT_GE(evaluate_energy(problem, m.C + 1e-3 * d).total(), best * (1 - 1e-9)) << with_opcomm;
    }
  }
}

TEST(FitFmap, RectangularMapShape) {
  const Pair& p = bent_pair();
  const SpectralBasis by = truncate(p.by, 12);
  const FunctionalMap m = fit_fmap(p.bx, by, p.fx, wks(by, 50));
  EXPECT_EQ(m.source_size(), 20);
  EXPECT_EQ(m.target_size(), 12);
}

TEST(FitFmap, ConfigValidation) {
  FmapConfig cfg;
  cfg.w_desc = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.w_lap = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.operator_step = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  const Pair& p = bent_pair();
  EXPECT_THROW(fit_fmap(p.bx, p.by, p.fx, wks(p.by, 10)), Error);
}

TEST(FitFmap, RecoversVertexPermutation) {
  const TriMesh m = make_icosphere(3);
  TriMesh lumpy = m;
  for (Index v = 0; v < m.num_vertices(); ++v) {
    const Eigen::Vector3d q = m.vertex(v);
    lumpy.vertices.col(v) *= 1.0 + 0.15 * q.x() * q.x() + 0.1 * q.y() + 0.05 * q.z() * q.y();
  }
  Eigen::VectorXi perm(m.num_vertices());
  for (Index i = 0; i < perm.size(); ++i) perm(i) = static_cast<int>(i);
  std::mt19937_64 rng(4);
  std::shuffle(perm.data(), perm.data() + perm.size(), rng);
  const TriMesh y = permute_vertices(lumpy, perm);
  const SpectralBasis bx = compute_basis(lumpy, 30), by = compute_basis(y, 30);
  const FunctionalMap fm = fit_fmap(bx, by, wks(bx, 50), wks(by, 50));
  const IcpRefineResult r = icp_refine(fm.C, bx, by, 10);
  Index hit = 0;
  for (Index v = 0; v < y.num_vertices(); ++v) {
    Index truth = 0;
    (lumpy.vertices.colwise() - y.vertex(v)).colwise().squaredNorm().minCoeff(&truth);
    hit += r.p2p.to_source(v) == truth;
  }
  EXPECT_GE(double(hit) / double(y.num_vertices()), 0.95);
}

TEST(IcpRefine, ErrorNonIncreasingAndOrthogonal) {
  const Pair& p = bent_pair();
  const FunctionalMap m = fit_fmap(p.bx, p.by, p.fx, p.fy);
  const IcpRefineResult r = icp_refine(m.C, p.bx, p.by, 15);
  ASSERT_FALSE(r.error_history.empty());
  expect_non_increasing(r.error_history);
  EXPECT_LT((r.map.C.transpose() * r.map.C - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_TRUE(r.p2p.valid(p.x.num_vertices()));
  EXPECT_THROW(icp_refine(m.C, p.bx, p.by, 0), ConfigError);
}

TEST(IcpRefine, FixedPointStopsEarly) {
  const SpectralBasis& b = bent_pair().bx;
  const IcpRefineResult r = icp_refine(Eigen::MatrixXd::Identity(20, 20), b, b, 10);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 2);
  EXPECT_NEAR(r.error_history.back(), 0.0, 1e-9);
}

TEST(BijectiveRefine, RoundTripNeverIncreases) {
  const Pair& p = bent_pair();
  const FunctionalMap xy = fit_fmap(p.bx, p.by, p.fx, p.fy);
  const FunctionalMap yx = fit_fmap(p.by, p.bx, p.fy, p.fx);
  const BijectiveRefineResult r = bijective_refine(xy.C, yx.C, p.x, p.y, p.bx, p.by, 5);
  ASSERT_FALSE(r.round_trip_history.empty());
  expect_non_increasing(r.round_trip_history, 0.0);
  ASSERT_TRUE(r.map.to_target.has_value());
  EXPECT_TRUE(r.map.valid(p.x.num_vertices()));
  const EdgeGraph gx(p.x);
  EXPECT_NEAR(round_trip_error(gx, r.map.to_source, *r.map.to_target), r.round_trip_history.back(),
              1e-9 * std::max(1.0, r.round_trip_history.back()));
}

TEST(BijectiveRefine, RoundTripErrorOracle) {
  const TriMesh g = make_grid(4, 1.0);
  const EdgeGraph graph(g);
  const Index n = g.num_vertices();
  Eigen::VectorXi id = PointMap::identity(n).to_source;
  EXPECT_EQ(round_trip_error(graph, id, id), 0.0);
  Eigen::VectorXi t = id, s = id;
  s(0) = 1;  // 0 -> 1 -> 1: one edge of length 0.25
  t(1) = 2;  // 1 -> 1 -> 2 and the round trip of 0 now lands on 2
  EXPECT_NEAR(round_trip_error(graph, t, s), 0.25 + 0.5, 1e-12);
}

TEST(FmapIo, PointmapTextRoundTrip) {
  PointMap m;
  m.to_source = Eigen::VectorXi::LinSpaced(5, 4, 0);
  EXPECT_EQ(parse_pointmap_text(to_pointmap_text(m)).to_source, m.to_source);
  EXPECT_THROW(parse_pointmap_text("0 1\n2 3\n"), FormatError);
  EXPECT_THROW(parse_pointmap_text("0 x\n"), FormatError);
}

TEST(FmapIo, FunctionalMapRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "fmgrasp_fmap_io";
  std::filesystem::create_directories(dir);
  FunctionalMap m;
  m.C = Eigen::MatrixXd::Random(7, 9);
  save_fmap(dir / "map", m, FmapConfig{});
  const FunctionalMap back = load_fmap(dir / "map");
  EXPECT_EQ(back.C, m.C);
  const Pair& p = bent_pair();
  save_correspondence_plys(dir / "corr", p.x, p.y, PointMap::identity(p.y.num_vertices()));
  EXPECT_TRUE(std::filesystem::exists(dir / "corr_source.ply"));
  EXPECT_TRUE(std::filesystem::exists(dir / "corr_target.ply"));
}
