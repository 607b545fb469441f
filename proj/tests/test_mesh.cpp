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
#include <filesystem>
#include <random>

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"
#include "fmgrasp/mesh/closest_point.h"
#include "fmgrasp/mesh/decimate.h"
#include "fmgrasp/mesh/deform.h"
#include "fmgrasp/mesh/geodesic.h"
#include "fmgrasp/mesh/kmeans.h"
#include "fmgrasp/mesh/mesh_io.h"
#include "fmgrasp/mesh/primitives.h"
#include "fmgrasp/mesh/validate.h"
#include "test_support.h"

using namespace fmgrasp;

TEST(Primitives, IcosphereCountsAndTopology) {
  for (int s = 0; s <= 3; ++s) {
    const TriMesh m = make_icosphere(s);
    const Index expected = 10 * (Index(1) << (2 * s)) + 2;
    EXPECT_EQ(m.num_vertices(), expected);
    const MeshReport r = validate(m);
    EXPECT_TRUE(r.manifold);
    EXPECT_TRUE(r.watertight);
    EXPECT_TRUE(r.orientation_consistent);
    EXPECT_EQ(r.euler_characteristic, 2);
    EXPECT_NEAR(m.vertices.colwise().norm().maxCoeff(), 1.0, 1e-12);
  }
}

TEST(Primitives, SphereAreaConvergesToFourPi) {
  const double a2 = surface_area(make_icosphere(2));
  const double a4 = surface_area(make_icosphere(4));
  EXPECT_LT(std::abs(a4 - 4 * M_PI), std::abs(a2 - 4 * M_PI));
  EXPECT_NEAR(a4, 4 * M_PI, 0.01 * 4 * M_PI);
}

TEST(Primitives, BoxIsClosedWithExactArea) {
  const TriMesh box = make_box({0.1, 0.2, 0.3}, {2, 3, 4});
  const MeshReport r = validate(box);
  EXPECT_TRUE(r.watertight);
  EXPECT_EQ(r.euler_characteristic, 2);
  EXPECT_NEAR(surface_area(box), 2 * (0.02 + 0.03 + 0.06), 1e-12);
}

TEST(Primitives, OpenTubeHasTwoBoundaryLoops) {
  TubeParams p;
  p.around = 12;
  p.along = 10;
  const MeshReport r = validate(make_open_tube(p));
  EXPECT_EQ(r.boundary_loops, 2);
  EXPECT_FALSE(r.watertight);
  EXPECT_EQ(r.euler_characteristic, 0);
}

TEST(Validate, DetectsDegenerateFaces) {
  Eigen::Matrix3Xd v(3, 3);
  v << 0, 1, 2, 0, 0, 0, 0, 0, 0;
  Eigen::Matrix3Xi f(3, 1);
  f << 0, 1, 2;
  TriMesh m;
  m.vertices = v;
  m.faces = f;
  EXPECT_EQ(validate(m).degenerate_faces.size(), 1u);
  EXPECT_THROW(make_mesh(v, f), Error);
}

TEST(MeshIo, RoundTripsAllFormats) {
  const TriMesh m = test::asymmetric_tube(8, 6);
  for (const TriMesh& back : {parse_obj(to_obj(m)), parse_off(to_off(m)), parse_ply(to_ply(m))}) {
    ASSERT_EQ(back.num_vertices(), m.num_vertices());
    ASSERT_EQ(back.num_faces(), m.num_faces());
    EXPECT_EQ(back.faces, m.faces);
    EXPECT_LT((back.vertices - m.vertices).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MeshIo, ObjWithQuadsAndSlashes) {
  const std::string text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1 4//1\n";
  const TriMesh m = parse_obj(text);
  EXPECT_EQ(m.num_faces(), 2);
  EXPECT_NEAR(surface_area(m), 1.0, 1e-12);
}

TEST(MeshIo, MalformedInputReportsLine) {
  try {
    parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 4);
  }
  EXPECT_THROW(parse_off("OFF\n3 1 0\n0 0 0\n"), FormatError);
}

TEST(MeshIo, SaveAndLoadByExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "fmgrasp_mesh_io";
  std::filesystem::create_directories(dir);
  const TriMesh m = make_icosphere(1);
  for (const char* ext : {".obj", ".off", ".ply"}) {
    const auto path = dir / (std::string("sphere") + ext);
    save_mesh(path, m);
    EXPECT_EQ(content_hash(load_mesh(path)), content_hash(m)) << ext;
  }
}

TEST(TriMesh, PermutationMovesVertices) {
  const TriMesh m = make_icosphere(1);
  Eigen::VectorXi perm(m.num_vertices());
  for (Index i = 0; i < perm.size(); ++i) perm(i) = static_cast<int>((i * 5 + 3) % perm.size());
  const TriMesh p = permute_vertices(m, perm);
  EXPECT_NEAR(surface_area(p), surface_area(m), 1e-12);
  EXPECT_NE(content_hash(p), content_hash(m));
  EXPECT_EQ(validate(p).euler_characteristic, 2);
}

TEST(ClosestPoint, MatchesDenseBarycentricSearch) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector3d a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), c(u(rng), u(rng), u(rng));
    const Eigen::Vector3d p(2 * u(rng), 2 * u(rng), 2 * u(rng));
    double best = std::numeric_limits<double>::infinity();
    const int n = 200;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) {
        const double s = double(i) / n, t = double(j) / n;
        best = std::min(best, (a + s * (b - a) + t * (c - a) - p).norm());
      }
    const double d = (closest_point_on_triangle(p, a, b, c) - p).norm();
    EXPECT_LE(d, best + 1e-12);
    EXPECT_GE(d, best - 0.02);
  }
}

TEST(ClosestPoint, SurfacePointOnSphere) {
  const TriMesh s = make_icosphere(3);
  const SurfacePoint sp = closest_surface_point(s, Eigen::Vector3d(0, 0, 3));
  EXPECT_NEAR(sp.distance, 2.0, 0.01);
  EXPECT_GE(sp.face, 0);
}

TEST(ClosestPoint, TriangleBoxOverlap) {
  const Box box{Eigen::Vector3d(-1, -1, -1), Eigen::Vector3d(1, 1, 1)};
  EXPECT_TRUE(triangle_box_overlap({0, 0, 0}, {5, 0, 0}, {0, 5, 0}, box));
  EXPECT_TRUE(triangle_box_overlap({-5, -5, 0}, {5, -5, 0}, {0, 5, 0}, box));
  EXPECT_FALSE(triangle_box_overlap({2, 2, 2}, {3, 2, 2}, {2, 3, 2}, box));
  EXPECT_FALSE(triangle_box_overlap({1.5, 0, -3}, {1.5, 0, 3}, {3, 3, 0}, box));
}

TEST(Geodesic, FlatGridRowDistanceIsEuclidean) {
  const TriMesh g = make_grid(10, 1.0);
  const EdgeGraph graph(g);
  Index a = 0, b = 0;
  (g.vertices.colwise() - Eigen::Vector3d(0, 0, 0)).colwise().squaredNorm().minCoeff(&a);
  (g.vertices.colwise() - Eigen::Vector3d(1, 0, 0)).colwise().squaredNorm().minCoeff(&b);
  EXPECT_NEAR(geodesic_distance(graph, a, b), 1.0, 1e-12);
}

TEST(Geodesic, DistancesAreMetricAndBoundEuclidean) {
  const TriMesh s = make_icosphere(2);
  const EdgeGraph graph(s);
  const GeodesicField f0 = geodesic_distances(graph, 0);
  const GeodesicField f5 = geodesic_distances(graph, 5);
  EXPECT_TRUE(f0.all_reachable);
  for (Index v = 0; v < s.num_vertices(); ++v) {
    EXPECT_GE(f0.distance(v) + 1e-12, (s.vertex(v) - s.vertex(0)).norm());
    EXPECT_LE(f0.distance(v), f0.distance(5) + f5.distance(v) + 1e-12);
  }
  EXPECT_NEAR(f0.distance(5), f5.distance(0), 1e-12);
  const double diameter = geodesic_diameter(graph);
  EXPECT_GT(diameter, M_PI * 0.99);
  EXPECT_LT(diameter, M_PI * 1.15);
}

TEST(Geodesic, DisconnectedComponentsUnreachable) {
  TriMesh a = make_icosphere(0);
  TriMesh b = a;
  b.vertices.row(0).array() += 5.0;
  Eigen::Matrix3Xd v(3, a.num_vertices() * 2);
  v << a.vertices, b.vertices;
  Eigen::Matrix3Xi f(3, a.num_faces() * 2);
  f << a.faces, (b.faces.array() + static_cast<int>(a.num_vertices())).matrix();
  const GeodesicField field = geodesic_distances(make_mesh(v, f), 0);
  EXPECT_FALSE(field.all_reachable);
  EXPECT_TRUE(std::isinf(field.distance(a.num_vertices())));
}

TEST(Kmeans, ObjectiveNonIncreasingAndDeterministic) {
  const TriMesh m = test::asymmetric_tube();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Segmentation s = kmeans_segment(m, 7, seed);
    ASSERT_FALSE(s.objective_history.empty());
    for (std::size_t i = 1; i < s.objective_history.size(); ++i)
      EXPECT_LE(s.objective_history[i], s.objective_history[i - 1] + 1e-9);
    EXPECT_EQ(s.labels, kmeans_segment(m, 7, seed).labels);
    int total = 0;
    for (int c : s.cluster_sizes()) {
      EXPECT_GT(c, 0);
      total += c;
    }
    EXPECT_EQ(total, m.num_vertices());
  }
}

TEST(Kmeans, LabelsAreNearestCentroid) {
  const TriMesh m = test::asymmetric_tube();
  const Segmentation s = kmeans_segment(m, 5, 4);
  for (Index v = 0; v < m.num_vertices(); ++v) {
    Index best = 0;
    (s.centroids.colwise() - m.vertex(v)).colwise().squaredNorm().minCoeff(&best);
    const double own = (s.centroids.col(s.labels(v)) - m.vertex(v)).squaredNorm();
    EXPECT_LE(own, (s.centroids.col(best) - m.vertex(v)).squaredNorm() + 1e-12);
  }
}

TEST(Kmeans, SingleClusterAndErrors) {
  const TriMesh m = make_icosphere(1);
  EXPECT_EQ(kmeans_segment(m, 1, 1).labels.maxCoeff(), 0);
  EXPECT_THROW(kmeans_segment(m, 0, 1), ConfigError);
  EXPECT_THROW(kmeans_segment(m, static_cast<int>(m.num_vertices()) + 1, 1), Error);
}

TEST(Kmeans, LabelTextRoundTripAndRegionAt) {
  const TriMesh m = test::asymmetric_tube();
  const Segmentation s = kmeans_segment(m, 7, 1);
  EXPECT_EQ(parse_label_text(to_label_text(s), m).labels, s.labels);
  EXPECT_EQ(region_at(s, m, m.vertex(17)), s.labels(17));
  EXPECT_THROW(parse_label_text("3 1\n0\n0\n0\n", m), ValidationError);
}

TEST(Deform, TwistPreservesAxialAndRadialCoordinates) {
  const TriMesh m = test::asymmetric_tube();
  DeformationSpec spec;
  spec.kind = DeformationKind::Twist;
  spec.magnitude = 1.3;
  spec.begin = 0.1;
  spec.end = 0.2;
  const TriMesh out = synth_deform(m, spec);
  for (Index v = 0; v < m.num_vertices(); ++v) {
    EXPECT_NEAR(out.vertices(2, v), m.vertices(2, v), 1e-12);
    EXPECT_NEAR(out.vertices.col(v).head<2>().norm(), m.vertices.col(v).head<2>().norm(), 1e-12);
  }
}

TEST(Deform, BendMapsAxisOntoArcAndMovesTailRigidly) {
  const TriMesh m = test::asymmetric_tube();
  DeformationSpec spec;
  spec.kind = DeformationKind::Bend;
  spec.bend_axis = Eigen::Vector3d::UnitX();
  spec.magnitude = M_PI / 2;
  spec.begin = 0.1;
  spec.end = 0.2;
  const TriMesh out = synth_deform(m, spec);
  std::vector<Index> tail;
  for (Index v = 0; v < m.num_vertices(); ++v) {
    if (m.vertices(2, v) > spec.end + 1e-9) tail.push_back(v);
    if (m.vertices(2, v) < spec.begin) {
      EXPECT_EQ(out.vertex(v), m.vertex(v));
    }
  }
  ASSERT_GT(tail.size(), 10u);
  for (std::size_t i = 1; i < tail.size(); i += 7)
    EXPECT_NEAR((out.vertex(tail[i]) - out.vertex(tail[0])).norm(), (m.vertex(tail[i]) - m.vertex(tail[0])).norm(),
                1e-12);
  // A point on the axis at the end of the interval lands a chord 2R sin(theta/2) away.
  Eigen::Matrix3Xd axis_pt(3, 2);
  axis_pt << 0, 0, 0, 0, spec.begin, spec.end;
  Eigen::Matrix3Xi f(3, 0);
  const TriMesh bent = synth_deform(make_mesh(axis_pt, f), spec);
  const double r = (spec.end - spec.begin) / spec.magnitude;
  EXPECT_NEAR((bent.vertex(1) - bent.vertex(0)).norm(), 2 * r * std::sin(spec.magnitude / 2), 1e-12);
}

TEST(Deform, StretchExtendsLength) {
  const TriMesh m = test::asymmetric_tube();
  DeformationSpec spec;
  spec.kind = DeformationKind::Stretch;
  spec.magnitude = 0.5;
  spec.begin = 0.1;
  spec.end = 0.2;
  const TriMesh out = synth_deform(m, spec);
  const double before = m.vertices.row(2).maxCoeff() - m.vertices.row(2).minCoeff();
  const double after = out.vertices.row(2).maxCoeff() - out.vertices.row(2).minCoeff();
  EXPECT_NEAR(after - before, 0.05, 1e-12);
}

TEST(Deform, ZeroMagnitudeIsIdentityAndBadSpecsRejected) {
  const TriMesh m = make_icosphere(1);
  DeformationSpec spec;
  EXPECT_EQ(content_hash(synth_deform(m, spec)), content_hash(m));
  spec.axis = Eigen::Vector3d(1, 1, 0);
  EXPECT_THROW(synth_deform(m, spec), ConfigError);
  spec.axis = Eigen::Vector3d::UnitZ();
  spec.end = spec.begin;
  EXPECT_THROW(synth_deform(m, spec), ConfigError);
  EXPECT_THROW(deformation_kind_from_string("fold"), ConfigError);
}

TEST(Decimate, ReachesTargetAndStaysManifold) {
  const TriMesh s = make_icosphere(4);
  const TriMesh d = decimate_quadric(s, 500);
  EXPECT_LE(d.num_vertices(), 500);
  EXPECT_GE(d.num_vertices(), 450);
  const MeshReport r = validate(d);
  EXPECT_TRUE(r.manifold);
  EXPECT_TRUE(r.watertight);
  EXPECT_EQ(r.euler_characteristic, 2);
  for (Index v = 0; v < d.num_vertices(); ++v) EXPECT_NEAR(d.vertex(v).norm(), 1.0, 0.05);
}

TEST(Decimate, PlanarGridStaysPlanar) {
  const TriMesh g = make_grid(20, 1.0);
  const TriMesh d = decimate_quadric(g, 60);
  EXPECT_LT(d.vertices.row(2).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(surface_area(d), 1.0, 1e-6);
}

TEST(Io, AtomicWriteAndFormat) {
  const auto path = std::filesystem::temp_directory_path() / "fmgrasp_atomic.txt";
  write_file_atomic(path, "abc");
  EXPECT_EQ(read_file(path), "abc");
  EXPECT_EQ(format_double(0.5, 3), "0.5");
  EXPECT_THROW(read_file(path.string() + ".missing"), Error);
}
