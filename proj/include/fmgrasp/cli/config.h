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

#include <cstdint>
#include <filesystem>
#include <string>

#include "fmgrasp/fmap/functional_map.h"
#include "fmgrasp/grasp/pipeline.h"
#include "fmgrasp/registration/cpd.h"
#include "fmgrasp/registration/icp.h"
#include "fmgrasp/spectral/eigenbasis.h"

namespace fmgrasp {

enum class MatchMethod { FunctionalMap, Cpd, Icp };

std::string to_string(MatchMethod method);
/// Accepts "fm", "cpd" and "icp"; throws ConfigError otherwise.
MatchMethod match_method_from_string(const std::string& name);

inline constexpr const char* kConfigSchema = "fmgrasp-config/1";

/// Every tunable of the command-line pipeline.
struct PipelineConfig {
  std::string schema = kConfigSchema;
  MatchMethod method = MatchMethod::FunctionalMap;
  std::uint64_t seed = 1;

  Index k = 100;
  Index d = 50;
  double sigma_factor = 7.0;
  EigenOptions eigen;
  FmapConfig fmap;
  IcpConfig icp;
  CpdConfig cpd;

  int n_clusters = 7;
  int grasp_count = 10;
  TransferConfig transfer;
  /// Gripper JSON; empty uses the built-in parallel jaw.
  std::string gripper_path;
  /// Basis cache directory; empty disables caching.
  std::string cache_dir;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// TOML-style text: `key = value` lines grouped under `[section]` headers,
/// `#` comments, quoted strings. Unknown keys are rejected.
PipelineConfig parse_config(const std::string& text, const std::string& name = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);
std::string to_config_text(const PipelineConfig& config);

}  // namespace fmgrasp
