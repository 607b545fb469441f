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
#include "fmgrasp/grasp/grasp_io.h"

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"
#include "fmgrasp/mesh/mesh_io.h"
#include "fmgrasp/mesh/primitives.h"
#include "json.hpp"

namespace fmgrasp {
namespace {

using json = nlohmann::ordered_json;

json pose_json(const RigidTransformd& pose) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r)
    rows.push_back({pose.rotation(r, 0), pose.rotation(r, 1), pose.rotation(r, 2), pose.translation[r]});
  rows.push_back({0.0, 0.0, 0.0, 1.0});
  return rows;
}

json vec_json(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

RigidTransformd parse_pose(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 4) throw FormatError(name, 0, "pose must be a 4x4 row-major matrix");
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) throw FormatError(name, 0, "pose must be a 4x4 row-major matrix");
    for (int c = 0; c < 4; ++c) m(r, c) = j[r][c].get<double>();
  }
  RigidTransformd pose;
  pose.rotation = m.topLeftCorner<3, 3>();
  pose.translation = m.topRightCorner<3, 1>();
  if ((pose.rotation.transpose() * pose.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-6 ||
      pose.rotation.determinant() < 0)
    throw FormatError(name, 0, "pose rotation is not a proper rotation");
  // Re-orthonormalize so later compositions keep the 1e-9 invariant.
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(pose.rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  pose.rotation = svd.matrixU() * svd.matrixV().transpose();
  return pose;
}

json parse_text(const std::string& text, const std::string& name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(name, 0, e.what());
  }
}

void paint_marker(TriMesh& scene, Eigen::Matrix3Xd& colors, const Eigen::Vector3d& at, double radius,
                  const Eigen::Vector3d& color) {
  const TriMesh sphere = make_icosphere(1, radius);
  const Index base = scene.num_vertices();
  scene.vertices.conservativeResize(3, base + sphere.num_vertices());
  scene.vertices.rightCols(sphere.num_vertices()) = sphere.vertices.colwise() + at;
  const Index fbase = scene.num_faces();
  scene.faces.conservativeResize(3, fbase + sphere.num_faces());
  scene.faces.rightCols(sphere.num_faces()) = sphere.faces.array() + static_cast<int>(base);
  colors.conservativeResize(3, scene.num_vertices());
  colors.rightCols(sphere.num_vertices()).colwise() = color;
}

}  // namespace

std::string grasps_to_json(const std::vector<Grasp>& grasps) {
  json out = json::array();
  for (const Grasp& g : grasps) {
    json j;
    j["pose"] = pose_json(g.pose);
    j["opening"] = g.opening;
    j["score"] = g.score;
    json ids = json::array(), points = json::array();
    for (const Contact& c : g.contacts) {
      ids.push_back(c.vertex);
      points.push_back(vec_json(c.position));
    }
    j["contacts"] = ids;
    j["contact_points"] = points;
    out.push_back(j);
  }
  return out.dump(2) + "\n";
}

std::vector<Grasp> grasps_from_json(const std::string& text, const std::string& name, const TriMesh* mesh) {
  const json root = parse_text(text, name);
  if (!root.is_array()) throw FormatError(name, 0, "grasp list must be a JSON array");
  std::vector<Grasp> out;
  try {
    for (const json& j : root) {
      Grasp g;
      g.pose = parse_pose(j.at("pose"), name);
      g.opening = j.value("opening", 0.0);
      g.score = j.value("score", 0.0);
      const json& ids = j.at("contacts");
      const json points = j.value("contact_points", json::array());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        Contact c;
        c.vertex = ids[i].get<int>();
        if (i < points.size()) {
          c.position = {points[i][0].get<double>(), points[i][1].get<double>(), points[i][2].get<double>()};
        } else if (mesh) {
          if (c.vertex < 0 || c.vertex >= mesh->num_vertices())
            throw FormatError(name, 0, "contact vertex " + std::to_string(c.vertex) + " out of range");
          c.position = mesh->vertices.col(c.vertex);
        } else {
          throw FormatError(name, 0, "contact points missing and no mesh given");
        }
        g.contacts.push_back(c);
      }
      out.push_back(std::move(g));
    }
  } catch (const json::exception& e) {
    throw FormatError(name, 0, e.what());
  }
  return out;
}

void save_grasps(const std::filesystem::path& path, const std::vector<Grasp>& grasps) {
  write_file_atomic(path, grasps_to_json(grasps));
}

std::vector<Grasp> load_grasps(const std::filesystem::path& path, const TriMesh* mesh) {
  return grasps_from_json(read_file(path), path.string(), mesh);
}

std::string gripper_to_json(const GripperSpec& g) {
  json j;
  json axes = json::array();
  for (const auto& a : g.finger_axes) axes.push_back(vec_json(a));
  j["finger_axes"] = axes;
  j["min_opening"] = g.min_opening;
  j["max_opening"] = g.max_opening;
  j["pad_width"] = g.pad_width;
  j["pad_height"] = g.pad_height;
  j["finger_thickness"] = g.finger_thickness;
  j["finger_length"] = g.finger_length;
  j["palm_width"] = g.palm_width;
  j["palm_thickness"] = g.palm_thickness;
  j["penetration_tolerance"] = g.penetration_tolerance;
  return j.dump(2) + "\n";
}

GripperSpec gripper_from_json(const std::string& text, const std::string& name) {
  const json j = parse_text(text, name);
  GripperSpec g;
  try {
    if (j.contains("finger_axes")) {
      g.finger_axes.clear();
      for (const json& a : j["finger_axes"])
        g.finger_axes.push_back(Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(), a[2].get<double>()).normalized());
    }
    g.min_opening = j.value("min_opening", g.min_opening);
    g.max_opening = j.value("max_opening", g.max_opening);
    g.pad_width = j.value("pad_width", g.pad_width);
    g.pad_height = j.value("pad_height", g.pad_height);
    g.finger_thickness = j.value("finger_thickness", g.finger_thickness);
    g.finger_length = j.value("finger_length", g.finger_length);
    g.palm_width = j.value("palm_width", g.palm_width);
    g.palm_thickness = j.value("palm_thickness", g.palm_thickness);
    g.penetration_tolerance = j.value("penetration_tolerance", g.penetration_tolerance);
  } catch (const json::exception& e) {
    throw FormatError(name, 0, e.what());
  }
  g.validate();
  return g;
}

GripperSpec load_gripper(const std::filesystem::path& path) { return gripper_from_json(read_file(path), path.string()); }

std::string grasp_result_to_json(const GraspResult& r) {
  json j;
  json g;
  g["pose"] = pose_json(r.grasp.pose);
  g["opening"] = r.grasp.opening;
  g["score"] = r.grasp.score;
  json ids = json::array(), points = json::array();
  for (const Contact& c : r.grasp.contacts) {
    ids.push_back(c.vertex);
    points.push_back(vec_json(c.position));
  }
  g["contacts"] = ids;
  g["contact_points"] = points;
  j["grasp"] = g;
  j["rank"] = r.rank;
  j["transform"] = pose_json(r.transform);
  j["region_residual"] = r.region_residual;
  j["correspondences"] = r.correspondences;
  json targets = json::array();
  for (const auto& t : r.mapped_targets) targets.push_back(vec_json(t));
  j["mapped_targets"] = targets;
  j["target_region_size"] = r.target_region.size();
  j["finger_in_region"] = r.finger_in_region;
  j["region_accurate"] = r.region_accurate;
  j["replan"] = {{"objective_start", r.replan_objective_start},
                 {"objective", r.replan_objective},
                 {"contact_error", r.contact_error},
                 {"evaluations", r.replan_evaluations}};
  j["rejections"] = r.rejections;
  return j.dump(2) + "\n";
}

void save_scene_ply(const std::filesystem::path& path, const TriMesh& target, const GraspResult& result,
                    double marker_radius) {
  TriMesh scene;
  scene.vertices = target.vertices;
  scene.faces = target.faces;
  Eigen::Matrix3Xd colors = Eigen::Matrix3Xd::Constant(3, target.num_vertices(), 0.7);
  for (int y : result.target_region) colors.col(y) = Eigen::Vector3d(0.45, 0.65, 0.95);
  for (const Contact& c : result.grasp.contacts) paint_marker(scene, colors, c.position, marker_radius, {0.9, 0.1, 0.1});
  for (const auto& t : result.mapped_targets) paint_marker(scene, colors, t, 0.6 * marker_radius, {0.1, 0.8, 0.2});
  VertexAttributes attributes;
  attributes.colors = colors;
  save_mesh(path, scene, attributes);
}

}  // namespace fmgrasp
