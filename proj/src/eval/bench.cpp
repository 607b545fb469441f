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
#include "fmgrasp/eval/bench.h"

#include <chrono>
#include <cmath>
#include <set>

#include "fmgrasp/cli/match.h"
#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"
#include "fmgrasp/eval/metrics.h"
#include "fmgrasp/fmap/fmap_io.h"
#include "fmgrasp/grasp/antipodal.h"
#include "fmgrasp/grasp/grasp_io.h"
#include "fmgrasp/mesh/mesh_io.h"
#include "json.hpp"

namespace fmgrasp {
namespace {

using json = nlohmann::ordered_json;

std::string status_of(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
  if (dynamic_cast<const NoGraspsError*>(&e)) return "no_grasps";
  if (dynamic_cast<const UnreachableError*>(&e)) return "unreachable";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical_error";
  if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const ValidationError*>(&e)) return "invalid_input";
  return "error";
}

std::string csv_number(double v) { return std::isnan(v) ? "" : format_double(v, 9); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

struct ObjectSetup {
  TriMesh source;
  GraspModel model;
  std::vector<int> region;
};

ObjectSetup prepare_object(const ManifestObject& obj, const PipelineConfig& config, const TransferConfig& transfer) {
  ObjectSetup s;
  s.source = load_mesh(obj.source);
  Segmentation seg = kmeans_segment(s.source, obj.n_clusters, obj.seed);
  int region = 0;
  if (obj.region_id) {
    region = *obj.region_id;
  } else if (obj.region_point) {
    region = region_at(seg, s.source, *obj.region_point);
  }
  std::vector<Grasp> grasps;
  if (!obj.grasps.empty()) {
    grasps = load_grasps(obj.grasps, &s.source);
  } else {
    grasps = generate_antipodal_grasps(s.source, seg.members(region), transfer.gripper, config.grasp_count, obj.seed);
  }
  s.model = build_grasp_model(s.source, std::move(seg), region, grasps);
  s.region = s.model.region_vertices();
  return s;
}

std::vector<int> truth_region(const ManifestConfiguration& c, const ObjectSetup& s, const TriMesh& target,
                              const PointMap& predicted, std::optional<PointMap>* truth) {
  if (c.ground_truth == "identity") {
    if (target.num_vertices() != s.source.num_vertices())
      throw ValidationError("identity ground truth needs equal vertex counts");
    *truth = PointMap::identity(target.num_vertices());
    return s.region;
  }
  if (!c.ground_truth.empty()) {
    *truth = load_pointmap(c.ground_truth);
    if ((*truth)->num_target() != target.num_vertices() || !(*truth)->valid(s.source.num_vertices()))
      throw ValidationError("ground-truth map does not match the meshes");
    return mapped_region(s.model, **truth);
  }
  return mapped_region(s.model, predicted);
}

}  // namespace

Manifest parse_manifest(const std::string& text, const std::string& name, const std::filesystem::path& base) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(name, 0, e.what());
  }
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  Manifest m;
  try {
    for (const json& o : root.value("objects", json::array())) {
      ManifestObject obj;
      obj.name = o.at("name").get<std::string>();
      obj.source = resolve(o.at("source").get<std::string>());
      if (o.contains("region_point")) {
        const auto& p = o["region_point"];
        obj.region_point = Eigen::Vector3d(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
      }
      if (o.contains("region_id")) obj.region_id = o["region_id"].get<int>();
      obj.n_clusters = o.value("n_clusters", obj.n_clusters);
      obj.seed = o.value("seed", obj.seed);
      if (o.contains("grasps")) obj.grasps = resolve(o["grasps"].get<std::string>());
      for (const json& c : o.value("configurations", json::array())) {
        ManifestConfiguration cfg;
        cfg.name = c.at("name").get<std::string>();
        cfg.suite = c.value("suite", std::string("default"));
        cfg.target = resolve(c.at("target").get<std::string>());
        cfg.ground_truth = c.value("ground_truth", std::string());
        if (!cfg.ground_truth.empty() && cfg.ground_truth != "identity") cfg.ground_truth = resolve(cfg.ground_truth).string();
        obj.configurations.push_back(std::move(cfg));
      }
      if (!obj.region_point && !obj.region_id) throw FormatError(name, 0, obj.name + ": region_point or region_id required");
      m.objects.push_back(std::move(obj));
    }
  } catch (const json::exception& e) {
    throw FormatError(name, 0, e.what());
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.string(), path.parent_path());
}

double ComparisonReport::pass_rate(const std::string& method, const std::string& suite) const {
  std::size_t total = 0, pass = 0;
  for (const auto& r : rows)
    if (r.method == method && (suite.empty() || r.suite == suite)) {
      ++total;
      pass += r.region_accurate;
    }
  return total ? static_cast<double>(pass) / static_cast<double>(total) : 0.0;
}

std::size_t ComparisonReport::count(const std::string& method, const std::string& suite) const {
  std::size_t total = 0;
  for (const auto& r : rows) total += r.method == method && (suite.empty() || r.suite == suite);
  return total;
}

ComparisonReport compare_methods(const Manifest& manifest, const PipelineConfig& config, const BenchOptions& options) {
  config.validate();
  TransferConfig transfer = config.transfer;
  if (!config.gripper_path.empty()) transfer.gripper = load_gripper(config.gripper_path);
  PipelineConfig base = config;
  if (base.cache_dir.empty() && !options.artifact_dir.empty()) base.cache_dir = (options.artifact_dir / "basis_cache").string();
  const std::filesystem::path report_root = options.artifact_dir.empty() ? "" : options.artifact_dir.parent_path();

  ComparisonReport report;
  for (const ManifestObject& obj : manifest.objects) {
    std::optional<ObjectSetup> setup;
    std::string setup_status, setup_message;
    try {
      setup = prepare_object(obj, base, transfer);
    } catch (const Error& e) {
      setup_status = status_of(e);
      setup_message = e.what();
    }
    for (const ManifestConfiguration& c : obj.configurations) {
      std::optional<TriMesh> target;
      std::string target_message;
      if (setup) {
        try {
          target = load_mesh(c.target);
        } catch (const Error& e) {
          target_message = e.what();
        }
      }
      for (MatchMethod method : options.methods) {
        ComparisonRow row;
        row.object = obj.name;
        row.configuration = c.name;
        row.suite = c.suite;
        row.method = to_string(method);
        if (!setup) {
          row.status = setup_status;
          row.message = setup_message;
          report.rows.push_back(row);
          continue;
        }
        if (!target) {
          row.status = "invalid_input";
          row.message = target_message;
          report.rows.push_back(row);
          continue;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
          PipelineConfig run = base;
          run.method = method;
          const MatchOutput match = match_shapes(setup->source, *target, run);
          row.match_residual = match.residual;
          std::optional<PointMap> truth;
          const std::vector<int> region = truth_region(c, *setup, *target, match.map, &truth);
          if (truth) {
            const CorrespondenceError err = geodesic_error(match.map, *truth, setup->source);
            row.mean_geodesic_error = err.mean;
            row.fraction_below_10 = err.fraction_below_threshold(0.1);
          }
          const std::filesystem::path stem = std::filesystem::path(obj.name) / (c.name + "_" + row.method);
          if (!options.artifact_dir.empty()) {
            const auto path = options.artifact_dir / (stem.string() + ".pointmap.txt");
            save_pointmap(path, match.map);
            row.pointmap_artifact = std::filesystem::relative(path, report_root).generic_string();
          }
          const GraspResult result = transfer_pipeline(setup->model, *target, match.map, transfer);
          row.rank = result.rank;
          row.region_residual = result.region_residual;
          row.contact_error = result.contact_error;
          row.region_accurate = region_accuracy(result, region).pass;
          if (!options.artifact_dir.empty()) {
            const auto path = options.artifact_dir / (stem.string() + ".result.json");
            write_file_atomic(path, grasp_result_to_json(result));
            row.result_artifact = std::filesystem::relative(path, report_root).generic_string();
          }
        } catch (const Error& e) {
          row.status = status_of(e);
          row.message = e.what();
        }
        row.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

std::string report_to_csv(const ComparisonReport& report) {
  std::string out =
      "object,configuration,suite,method,status,region_accurate,rank,mean_geodesic_error,fraction_below_0.1,"
      "match_residual,region_residual,contact_error,pointmap,result,message\n";
  for (const auto& r : report.rows) {
    out += csv_field(r.object) + "," + csv_field(r.configuration) + "," + csv_field(r.suite) + "," + r.method + "," +
           r.status + "," + (r.region_accurate ? "1" : "0") + "," + std::to_string(r.rank) + "," +
           csv_number(r.mean_geodesic_error) + "," + csv_number(r.fraction_below_10) + "," +
           csv_number(r.match_residual) + "," + csv_number(r.region_residual) + "," + csv_number(r.contact_error) +
           "," + csv_field(r.pointmap_artifact) + "," + csv_field(r.result_artifact) + "," + csv_field(r.message) +
           "\n";
  }
  return out;
}

std::string report_to_json(const ComparisonReport& report) {
  json j;
  j["rows"] = json::array();
  std::set<std::string> methods, suites;
  for (const auto& r : report.rows) {
    methods.insert(r.method);
    suites.insert(r.suite);
    j["rows"].push_back({{"object", r.object},
                         {"configuration", r.configuration},
                         {"suite", r.suite},
                         {"method", r.method},
                         {"status", r.status},
                         {"message", r.message},
                         {"region_accurate", r.region_accurate},
                         {"rank", r.rank},
                         {"mean_geodesic_error", number_or_null(r.mean_geodesic_error)},
                         {"fraction_below_0.1", number_or_null(r.fraction_below_10)},
                         {"match_residual", number_or_null(r.match_residual)},
                         {"region_residual", number_or_null(r.region_residual)},
                         {"contact_error", number_or_null(r.contact_error)},
                         {"pointmap", r.pointmap_artifact},
                         {"result", r.result_artifact}});
  }
  json summary = json::array();
  for (const auto& m : methods) {
    json s = {{"method", m}, {"rows", report.count(m)}, {"region_accuracy", report.pass_rate(m)}};
    for (const auto& suite : suites) s["suite_" + suite] = report.pass_rate(m, suite);
    summary.push_back(s);
  }
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

std::string timings_to_json(const ComparisonReport& report) {
  json j = json::array();
  for (const auto& r : report.rows)
    j.push_back({{"object", r.object}, {"configuration", r.configuration}, {"method", r.method}, {"seconds", r.runtime}});
  return j.dump(2) + "\n";
}

void write_report(const std::filesystem::path& directory, const ComparisonReport& report) {
  write_file_atomic(directory / "report.csv", report_to_csv(report));
  write_file_atomic(directory / "report.json", report_to_json(report));
  write_file_atomic(directory / "timings.json", timings_to_json(report));
}

}  // namespace fmgrasp
