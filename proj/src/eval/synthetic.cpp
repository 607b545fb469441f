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
#include "fmgrasp/eval/synthetic.h"

#include <cmath>

#include "fmgrasp/common/io.h"
#include "fmgrasp/mesh/mesh_io.h"
#include "fmgrasp/mesh/primitives.h"
#include "json.hpp"

namespace fmgrasp {
namespace {

double smoothstep(double lo, double hi, double t) {
  const double x = std::clamp((t - lo) / (hi - lo), 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

/// Radial factor that breaks rotational and mirror symmetry of the section.
double lopsided(double theta) { return 1.0 + 0.3 * std::cos(theta) + 0.15 * std::sin(2.0 * theta); }

double superellipse(double theta, double a, double b) {
  const double c = std::abs(std::cos(theta)) / a, s = std::abs(std::sin(theta)) / b;
  return std::pow(std::pow(c, 4.0) + std::pow(s, 4.0), -0.25);
}

DeformationSpec bend(double degrees, double begin, double end, Eigen::Vector3d axis = Eigen::Vector3d::UnitX()) {
  DeformationSpec s;
  s.kind = DeformationKind::Bend;
  s.magnitude = degrees * M_PI / 180.0;
  s.begin = begin;
  s.end = end;
  s.bend_axis = axis;
  return s;
}

DeformationSpec twist(double degrees, double begin, double end) {
  DeformationSpec s;
  s.kind = DeformationKind::Twist;
  s.magnitude = degrees * M_PI / 180.0;
  s.begin = begin;
  s.end = end;
  return s;
}

SyntheticObject make_object(const std::string& name, double length, const SyntheticOptions& o,
                            std::function<double(double, double)> radius, double region_t,
                            std::vector<SyntheticConfiguration> configurations) {
  TubeParams p;
  p.length = length;
  p.around = o.around;
  p.along = o.along;
  p.cap_rings = 3;
  p.radius = std::move(radius);
  SyntheticObject obj;
  obj.name = name;
  obj.mesh = with_normals(make_tube(p));
  obj.region_point = Eigen::Vector3d(0.0, 0.0, region_t * length);
  obj.configurations = std::move(configurations);
  return obj;
}

}  // namespace

std::vector<SyntheticObject> synthetic_objects(const SyntheticOptions& o) {
  std::vector<SyntheticObject> out;

  // Thin cable ending in a wide plug.
  out.push_back(make_object(
      "cable", 0.36, o,
      [](double t, double th) { return (0.008 + 0.008 * smoothstep(0.76, 0.80, t)) * lopsided(th); }, 0.9,
      {{"bend90", "large", {bend(90, 0.12, 0.20)}},
       {"bend120", "large", {bend(120, 0.14, 0.24, Eigen::Vector3d::UnitY())}},
       {"twist90", "large", {twist(90, 0.04, 0.26)}},
       {"bend90_twist45", "large", {bend(-90, 0.10, 0.18), twist(45, 0.20, 0.26)}},
       {"bend10", "small", {bend(10, 0.24, 0.27)}},
       {"twist10", "small", {twist(10, 0.10, 0.26)}}}));

  // Flat bar with a knob at its base.
  out.push_back(make_object(
      "bar", 0.30, o,
      [](double t, double th) {
        const double knob = 1.0 + 0.6 * (1.0 - smoothstep(0.14, 0.18, t));
        return knob * superellipse(th, 0.014, 0.008) * (1.0 + 0.12 * std::cos(th));
      },
      0.07,
      {{"twist60", "large", {twist(60, 0.06, 0.27)}},
       {"bend90", "large", {bend(90, 0.12, 0.18, Eigen::Vector3d::UnitY())}},
       {"bend100", "large", {bend(100, 0.12, 0.17)}},
       {"bend60_twist30", "large", {bend(60, 0.09, 0.12), twist(30, 0.14, 0.27)}},
       {"bend8", "small", {bend(8, 0.06, 0.09)}},
       {"twist8", "small", {twist(8, 0.06, 0.27)}}}));

  // Hose with a flared nozzle.
  out.push_back(make_object(
      "hose", 0.34, o, [](double t, double th) { return (0.010 + 0.010 * smoothstep(0.82, 0.92, t)) * lopsided(th); },
      0.93,
      {{"bend90", "large", {bend(90, 0.10, 0.20)}},
       {"bend135", "large", {bend(135, 0.12, 0.26, Eigen::Vector3d::UnitY())}},
       {"twist90", "large", {twist(90, 0.04, 0.24)}},
       {"bend60_bend60", "large", {bend(60, 0.06, 0.12), bend(60, 0.16, 0.22, Eigen::Vector3d::UnitY())}},
       {"bend10", "small", {bend(10, 0.22, 0.26)}},
       {"twist12", "small", {twist(12, 0.05, 0.25)}}}));

  // Spatula: round handle, flat head.
  out.push_back(make_object(
      "spatula", 0.32, o,
      [](double t, double th) {
        const double head = smoothstep(0.66, 0.74, t);
        const double handle = 0.008 * lopsided(th);
        return (1.0 - head) * handle + head * superellipse(th, 0.024, 0.006) * (1.0 + 0.1 * std::cos(th));
      },
      0.87,
      {{"bend90", "large", {bend(90, 0.10, 0.18)}},
       {"bend90y", "large", {bend(90, 0.12, 0.20, Eigen::Vector3d::UnitY())}},
       {"twist90", "large", {twist(90, 0.04, 0.20)}},
       {"bend70_twist40", "large", {bend(70, 0.06, 0.12), twist(40, 0.14, 0.20)}},
       {"bend8", "small", {bend(8, 0.18, 0.21)}},
       {"twist10", "small", {twist(10, 0.04, 0.20)}}}));
  return out;
}

TriMesh apply_configuration(const TriMesh& mesh, const SyntheticConfiguration& configuration) {
  TriMesh out = mesh;
  for (const DeformationSpec& s : configuration.steps) out = synth_deform(out, s);
  return with_normals(std::move(out));
}

std::filesystem::path write_synthetic_dataset(const std::filesystem::path& directory,
                                              const std::vector<SyntheticObject>& objects, int n_clusters,
                                              std::uint64_t seed) {
  nlohmann::ordered_json manifest;
  manifest["objects"] = nlohmann::ordered_json::array();
  for (const SyntheticObject& obj : objects) {
    const std::string source = obj.name + ".obj";
    save_mesh(directory / source, obj.mesh);
    nlohmann::ordered_json o;
    o["name"] = obj.name;
    o["source"] = source;
    o["region_point"] = {obj.region_point.x(), obj.region_point.y(), obj.region_point.z()};
    o["n_clusters"] = n_clusters;
    o["seed"] = seed;
    o["configurations"] = nlohmann::ordered_json::array();
    for (const SyntheticConfiguration& c : obj.configurations) {
      const std::string target = obj.name + "_" + c.name + ".obj";
      save_mesh(directory / target, apply_configuration(obj.mesh, c));
      o["configurations"].push_back({{"name", c.name}, {"suite", c.suite}, {"target", target}, {"ground_truth", "identity"}});
    }
    manifest["objects"].push_back(o);
  }
  const auto path = directory / "manifest.json";
  write_file_atomic(path, manifest.dump(2) + "\n");
  return path;
}

}  // namespace fmgrasp
