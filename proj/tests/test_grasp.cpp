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
#include "fmgrasp/grasp/antipodal.h"
#include "fmgrasp/grasp/feasibility.h"
#include "fmgrasp/grasp/grasp_io.h"
#include "fmgrasp/grasp/pipeline.h"
#include "fmgrasp/grasp/replan.h"
#include "fmgrasp/mesh/kmeans.h"
#include "fmgrasp/mesh/primitives.h"
#include "test_support.h"

using namespace fmgrasp;

namespace {

/// 40 mm thick slab in x, tool origin 20 mm above its lower edge in z.
TriMesh slab(double thickness = 0.04) {
  TriMesh m = make_box({thickness, 0.2, 0.2}, {4, 40, 40});
  m.vertices.row(2).array() += 0.08;
  return m;
}

Grasp grasp_at(const GraspChecker& checker, const RigidTransformd& pose) {
  const FeasibilityReport r = checker.check(pose);
  Grasp g;
  g.pose = pose;
  g.opening = r.required_opening;
  g.contacts = checker.contacts(pose, r, r.required_opening);
  return g;
}

std::vector<Eigen::Vector3d> positions(const std::vector<Contact>& contacts) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& c : contacts) out.push_back(c.position);
  return out;
}

struct Fixture {
  TriMesh bar = make_box({0.04, 0.03, 0.2}, {4, 3, 20});
  GraspModel model;
  Fixture() {
    Segmentation seg = kmeans_segment(bar, 4, 1);
    const int region = region_at(seg, bar, Eigen::Vector3d(0, 0, 0.1));
    const auto grasps = generate_antipodal_grasps(bar, seg.members(region), GripperSpec{}, 5, 3);
    model = build_grasp_model(bar, std::move(seg), region, grasps);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST(Gripper, ValidationRejectsInconsistentSpecs) {
  GripperSpec g;
  EXPECT_NO_THROW(g.validate());
  g.min_opening = 0.1;
  EXPECT_THROW(g.validate(), ConfigError);
  g = {};
  g.finger_axes = {Eigen::Vector3d::UnitX()};
  EXPECT_THROW(g.validate(), ConfigError);
  g = {};
  g.pad_width = -1;
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(Feasibility, SlabOpeningAndContacts) {
  const TriMesh m = slab();
  const GraspChecker checker(m, GripperSpec{});
  const FeasibilityReport r = checker.check(RigidTransformd::identity());
  EXPECT_TRUE(r.feasible()) << r.summary();
  EXPECT_NEAR(r.required_opening, 0.04, 1e-12);
  ASSERT_EQ(r.finger_depth.size(), 2u);
  EXPECT_NEAR(r.finger_depth[0], 0.02, 1e-12);
  const auto contacts = checker.contacts(RigidTransformd::identity(), r, r.required_opening);
  ASSERT_EQ(contacts.size(), 2u);
  EXPECT_LT((contacts[0].position - Eigen::Vector3d(-0.02, 0, 0)).norm(), 1e-12);
  EXPECT_LT((contacts[1].position - Eigen::Vector3d(0.02, 0, 0)).norm(), 1e-12);
}

TEST(Feasibility, OpeningLimits) {
  {
    // Wider than the maximum opening: the pads start inside the material.
    const TriMesh thick = slab(0.09);
    const FeasibilityReport r = feasibility_check(Grasp{}, thick, GripperSpec{});
    EXPECT_FALSE(r.feasible());
    EXPECT_FALSE(r.contact_ok);
  }
  {
    const TriMesh thin = slab(0.003);
    const FeasibilityReport r = feasibility_check(Grasp{}, thin, GripperSpec{});
    EXPECT_FALSE(r.opening_ok);
    EXPECT_NEAR(r.required_opening, 0.003, 1e-12);
  }
}

TEST(Feasibility, PalmCollisionDetected) {
  TriMesh m = slab();
  m.vertices.row(2).array() -= 0.1;  // slab now extends behind the palm
  const FeasibilityReport r = feasibility_check(Grasp{}, m, GripperSpec{});
  EXPECT_FALSE(r.collision_free);
  EXPECT_FALSE(r.feasible());
}

TEST(Feasibility, EmptySpaceHasNoContact) {
  const TriMesh m = slab();
  Grasp g;
  g.pose.translation = Eigen::Vector3d(0, 0, -0.5);
  const FeasibilityReport r = feasibility_check(g, m, GripperSpec{});
  EXPECT_FALSE(r.contact_ok);
  EXPECT_TRUE(std::isnan(r.finger_depth[0]));
}

TEST(Feasibility, InvariantUnderRigidMotion) {
  const TriMesh m = slab();
  std::mt19937_64 rng(2);
  const RigidTransformd t{test::random_rotation(rng), Eigen::Vector3d(0.3, -0.1, 0.2)};
  TriMesh moved = m;
  moved.vertices = t.apply(m.vertices);
  const FeasibilityReport a = feasibility_check(Grasp{}, m, GripperSpec{});
  Grasp g;
  g.pose = t;
  const FeasibilityReport b = feasibility_check(g, moved, GripperSpec{});
  EXPECT_EQ(a.feasible(), b.feasible());
  EXPECT_NEAR(a.required_opening, b.required_opening, 1e-12);
}

TEST(Replan, ZeroOffsetReturnsInput) {
  const TriMesh m = slab();
  const GraspChecker checker(m, GripperSpec{});
  const Grasp start = grasp_at(checker, RigidTransformd::identity());
  const ReplanResult r = replan_local(start, positions(start.contacts), checker);
  EXPECT_LE(r.pose_change, 1e-6);
  EXPECT_NEAR(r.contact_error, 0.0, 1e-12);
}

TEST(Replan, RecoversTangentialOffsets) {
  const TriMesh m = slab();
  const GraspChecker checker(m, GripperSpec{});
  const Grasp start = grasp_at(checker, RigidTransformd::identity());
  for (const Eigen::Vector3d& off : {Eigen::Vector3d(0, 0.005, 0), Eigen::Vector3d(0, 0, 0.005),
                                    Eigen::Vector3d(0, -0.0035, 0.0035)}) {
    RigidTransformd shifted = RigidTransformd::identity();
    shifted.translation = off;
    const auto targets = positions(grasp_at(checker, shifted).contacts);
    const ReplanResult r = replan_local(start, targets, checker);
    EXPECT_LE(r.contact_error, 1e-3) << off.transpose();
    EXPECT_LE(r.objective, r.objective_start);
    EXPECT_TRUE(r.report.feasible());
  }
}

TEST(Replan, ObjectiveNeverWorseThanStart) {
  const TriMesh m = slab();
  const GraspChecker checker(m, GripperSpec{});
  const Grasp start = grasp_at(checker, RigidTransformd::identity());
  const std::vector<Eigen::Vector3d> targets = {{-0.02, 0.03, 0.01}, {0.02, 0.05, -0.01}};
  const ReplanResult r = replan_local(start, targets, checker);
  EXPECT_LE(r.objective, r.objective_start);
  EXPECT_LE(r.evaluations, ReplanConfig{}.max_evaluations + 12);
}

TEST(Replan, PoseChangeMetric) {
  RigidTransformd a = RigidTransformd::identity(), b = a;
  b.translation = Eigen::Vector3d(0.003, 0.004, 0);
  EXPECT_NEAR(pose_change(a, b, 0.05), 0.005 * 0.005, 1e-15);
  b.translation.setZero();
  b.rotation = Eigen::AngleAxisd(0.1, Eigen::Vector3d::UnitY()).toRotationMatrix();
  EXPECT_NEAR(pose_change(a, b, 0.05), std::pow(0.05 * 0.1, 2), 1e-12);
  EXPECT_NEAR(pose_change(a, b, 0.05, false), 0.05 * 0.1, 1e-12);
  b.translation = Eigen::Vector3d(0.003, 0.004, 0);
  EXPECT_NEAR(pose_change(a, b, 0.05, false), 0.005 + 0.005, 1e-12);
}

TEST(Replan, LinearChangeOutweighsTwoFingerContactGain) {
  const TriMesh m = slab();
  const GraspChecker checker(m, GripperSpec{});
  const Grasp start = grasp_at(checker, RigidTransformd::identity());
  std::vector<Eigen::Vector3d> targets = positions(start.contacts);
  for (auto& t : targets) t.y() += 0.005;
  ReplanConfig cfg;
  cfg.squared_change = false;
  const ReplanResult r = replan_local(start, targets, checker, cfg);
  EXPECT_NEAR((r.grasp.pose.translation - start.pose.translation).norm(), 0.0, 1e-12);
  EXPECT_NEAR(r.contact_error, 0.01, 1e-9);
  cfg.squared_change = true;
  const ReplanResult s = replan_local(start, targets, checker, cfg);
  EXPECT_LT(s.contact_error, 1e-3);
}

TEST(Replan, InfeasibleEverywhereIsUnreachable) {
  const TriMesh bead = make_icosphere(2, 0.001);
  const GraspChecker checker(bead, GripperSpec{});
  Grasp start;
  start.contacts.resize(2);
  ReplanConfig cfg;
  cfg.max_evaluations = 200;
  EXPECT_THROW(replan_local(start, {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()}, checker, cfg),
               UnreachableError);
  cfg.mu1 = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Antipodal, GraspsAreFeasibleRankedAndDeterministic) {
  const Fixture& f = fixture();
  ASSERT_FALSE(f.model.grasps.empty());
  const GraspChecker checker(f.bar, GripperSpec{});
  const auto region = f.model.region_vertices();
  for (std::size_t i = 0; i < f.model.grasps.size(); ++i) {
    const Grasp& g = f.model.grasps[i];
    EXPECT_TRUE(checker.check(g.pose).feasible());
    if (i > 0) {
      EXPECT_LE(g.score, f.model.grasps[i - 1].score);
    }
    for (const Contact& c : g.contacts) EXPECT_NE(std::find(region.begin(), region.end(), c.vertex), region.end());
  }
  const auto again =
      generate_antipodal_grasps(f.bar, region, GripperSpec{}, 5, 3);
  ASSERT_EQ(again.size(), f.model.grasps.size());
  for (std::size_t i = 0; i < again.size(); ++i) EXPECT_EQ(again[i].pose.translation, f.model.grasps[i].pose.translation);
}

TEST(GraspModel, EmptyGraspListRejected) {
  const Fixture& f = fixture();
  EXPECT_THROW(build_grasp_model(f.bar, f.model.segmentation, f.model.region(), {}), NoGraspsError);
}

TEST(Pipeline, RigidCopyTransfersRankOne) {
  const Fixture& f = fixture();
  std::mt19937_64 rng(12);
  const RigidTransformd t{test::random_rotation(rng), Eigen::Vector3d(0.5, 0.2, -0.1)};
  TriMesh target = f.bar;
  target.vertices = t.apply(f.bar.vertices);
  const GraspResult r = transfer_pipeline(f.model, target, PointMap::identity(target.num_vertices()), TransferConfig{});
  EXPECT_EQ(r.rank, 1);
  EXPECT_TRUE(r.region_accurate);
  EXPECT_LT(r.region_residual, 1e-9);
  EXPECT_LT(r.contact_error, 1e-6);
  EXPECT_LT((r.grasp.pose.translation - t * f.model.grasps[0].pose.translation).norm(), 1e-6);
}

TEST(Pipeline, CrushedRegionIsUnreachable) {
  const Fixture& f = fixture();
  TriMesh crushed = f.bar;
  for (Index v = 0; v < crushed.num_vertices(); ++v)
    if (crushed.vertices(2, v) > 0.02) crushed.vertices.col(v).head<2>() *= 0.05;
  try {
    transfer_pipeline(f.model, crushed, PointMap::identity(crushed.num_vertices()), TransferConfig{});
    FAIL() << "expected UnreachableError";
  } catch (const UnreachableError& e) {
    EXPECT_STREQ(e.what(), "grasp unreachable");
    EXPECT_EQ(e.reports().size(), f.model.grasps.size());
  }
}

TEST(Pipeline, TransportVertexFollowsMap) {
  const Fixture& f = fixture();
  const PointMap id = PointMap::identity(f.bar.num_vertices());
  EXPECT_EQ(transport_vertex(id, 7, f.bar, f.bar, f.bar.vertex(7)), 7);
}

TEST(GraspIo, RoundTrips) {
  const Fixture& f = fixture();
  const auto back = grasps_from_json(grasps_to_json(f.model.grasps), "<test>", &f.bar);
  ASSERT_EQ(back.size(), f.model.grasps.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_LT((back[i].pose.rotation - f.model.grasps[i].pose.rotation).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(back[i].pose.translation, f.model.grasps[i].pose.translation);
    EXPECT_EQ(back[i].contacts.size(), f.model.grasps[i].contacts.size());
  }
  GripperSpec g;
  g.max_opening = 0.05;
  EXPECT_EQ(gripper_from_json(gripper_to_json(g)).max_opening, 0.05);
  EXPECT_THROW(grasps_from_json("{"), FormatError);
  EXPECT_THROW(gripper_from_json("{\"min_opening\": 0.2}"), ConfigError);
}

TEST(GraspIo, ResultJsonAndScene) {
  const Fixture& f = fixture();
  const GraspResult r =
      transfer_pipeline(f.model, f.bar, PointMap::identity(f.bar.num_vertices()), TransferConfig{});
  const std::string json = grasp_result_to_json(r);
  EXPECT_NE(json.find("\"region_accurate\": true"), std::string::npos);
  const auto path = std::filesystem::temp_directory_path() / "fmgrasp_scene.ply";
  save_scene_ply(path, f.bar, r);
  EXPECT_GT(std::filesystem::file_size(path), 0u);
}
