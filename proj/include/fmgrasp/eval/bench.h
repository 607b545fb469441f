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

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fmgrasp/cli/config.h"

namespace fmgrasp {

struct ManifestConfiguration {
  std::string name;
  std::string suite;
  std::filesystem::path target;
  /// "identity", a point-map file, or empty when no ground truth exists.
  std::string ground_truth;
};

struct ManifestObject {
  std::string name;
  std::filesystem::path source;
  std::optional<Eigen::Vector3d> region_point;
  std::optional<int> region_id;
  int n_clusters = 7;
  std::uint64_t seed = 1;
  /// Optional grasp list; generated antipodal grasps otherwise.
  std::filesystem::path grasps;
  std::vector<ManifestConfiguration> configurations;
};

struct Manifest {
  std::vector<ManifestObject> objects;
};

/// Relative paths are resolved against `base`.
Manifest parse_manifest(const std::string& text, const std::string& name, const std::filesystem::path& base);
Manifest load_manifest(const std::filesystem::path& path);

struct ComparisonRow {
  std::string object;
  std::string configuration;
  std::string suite;
  std::string method;
  /// "ok" or the error class that stopped the run.
  std::string status = "ok";
  std::string message;
  bool region_accurate = false;
  int rank = 0;
  /// NaN without ground truth.
  double mean_geodesic_error = std::numeric_limits<double>::quiet_NaN();
  double fraction_below_10 = std::numeric_limits<double>::quiet_NaN();
  double match_residual = std::numeric_limits<double>::quiet_NaN();
  double region_residual = std::numeric_limits<double>::quiet_NaN();
  double contact_error = std::numeric_limits<double>::quiet_NaN();
  std::string pointmap_artifact;
  std::string result_artifact;
  /// Wall-clock seconds; reported separately from the CSV.
  double runtime = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;

  /// Fraction of rows of `method` in `suite` ("" for all suites) with region accuracy.
  double pass_rate(const std::string& method, const std::string& suite = "") const;
  std::size_t count(const std::string& method, const std::string& suite = "") const;
};

struct BenchOptions {
  std::vector<MatchMethod> methods = {MatchMethod::FunctionalMap, MatchMethod::Cpd, MatchMethod::Icp};
  /// Artifacts (point maps, grasp results) are written below this directory when set.
  std::filesystem::path artifact_dir;
};

/// Runs every configuration of the manifest through each correspondence method and
/// the shared grasp-transfer tail. Per-run failures are recorded in the row.
ComparisonReport compare_methods(const Manifest& manifest, const PipelineConfig& config,
                                 const BenchOptions& options = {});

/// CSV without runtimes, so reruns with the same inputs are byte-identical.
std::string report_to_csv(const ComparisonReport& report);
std::string report_to_json(const ComparisonReport& report);
std::string timings_to_json(const ComparisonReport& report);

/// Writes report.csv, report.json and timings.json into `directory`.
void write_report(const std::filesystem::path& directory, const ComparisonReport& report);

}  // namespace fmgrasp
