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
#include "fmgrasp/fmap/fmap_io.h"

#include <cstring>
#include <sstream>

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"
#include "fmgrasp/mesh/mesh_io.h"
#include "json.hpp"

namespace fmgrasp {
namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const std::string& suffix) {
  return stem.parent_path() / (stem.filename().string() + suffix);
}

}  // namespace

std::string to_pointmap_text(const PointMap& map) {
  std::string out;
  out.reserve(static_cast<std::size_t>(map.num_target()) * 12);
  for (Index y = 0; y < map.num_target(); ++y) {
    out += std::to_string(y);
    out += ' ';
    out += std::to_string(map.to_source[y]);
    out += '\n';
  }
  return out;
}

PointMap parse_pointmap_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  std::vector<int> sources;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream fields(line);
    long long target = -1, source = -1;
    std::string extra;
    if (!(fields >> target >> source) || (fields >> extra))
      throw FormatError(name, line_no, "expected 'target_id source_id'");
    if (target != static_cast<long long>(sources.size()))
      throw FormatError(name, line_no, "target ids must be consecutive from 0");
    if (source < 0) throw FormatError(name, line_no, "negative source id");
    sources.push_back(static_cast<int>(source));
  }
  PointMap map;
  map.to_source = Eigen::Map<const Eigen::VectorXi>(sources.data(), static_cast<Index>(sources.size()));
  return map;
}

void save_pointmap(const std::filesystem::path& path, const PointMap& map) {
  write_file_atomic(path, to_pointmap_text(map));
}

PointMap load_pointmap(const std::filesystem::path& path) { return parse_pointmap_text(read_file(path), path.string()); }

void save_fmap(const std::filesystem::path& stem, const FunctionalMap& map, const FmapConfig& config) {
  const auto bin = with_suffix(stem, ".bin");
  nlohmann::ordered_json header;
  header["k_x"] = map.source_size();
  header["k_y"] = map.target_size();
  header["layout"] = "float64-le-column-major";
  header["data"] = bin.filename().string();
  header["weights"] = {{"w_desc", config.w_desc},
                       {"w_lap", config.w_lap},
                       {"w_opcomm", config.w_opcomm},
                       {"w_orient", config.w_orient}};
  header["energy"] = {{"descriptor", map.energy.descriptor},     {"laplacian", map.energy.laplacian},
                      {"opcomm", map.energy.opcomm},             {"orientation", map.energy.orientation},
                      {"ridge", map.energy.ridge},               {"regularized", map.energy.regularized},
                      {"iterations", map.energy.iterations},     {"relative_gradient", map.energy.relative_gradient}};
  std::string bytes(reinterpret_cast<const char*>(map.C.data()), static_cast<std::size_t>(map.C.size()) * sizeof(double));
  write_file_atomic(bin, bytes);
  write_file_atomic(with_suffix(stem, ".json"), header.dump(2) + "\n");
}

FunctionalMap load_fmap(const std::filesystem::path& stem) {
  const auto json_path = with_suffix(stem, ".json");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(read_file(json_path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(json_path.string(), 0, e.what());
  }
  const Index kx = header.value("k_x", Index{-1}), ky = header.value("k_y", Index{-1});
  if (kx <= 0 || ky <= 0) throw FormatError(json_path.string(), 0, "missing k_x/k_y");
  const std::string bytes = read_file(with_suffix(stem, ".bin"));
  if (bytes.size() != static_cast<std::size_t>(kx * ky) * sizeof(double))
    throw FormatError(with_suffix(stem, ".bin").string(), 0, "size does not match header");
  FunctionalMap map;
  map.C.resize(ky, kx);
  std::memcpy(map.C.data(), bytes.data(), bytes.size());
  if (header.contains("energy")) {
    const auto& e = header["energy"];
    map.energy.descriptor = e.value("descriptor", 0.0);
    map.energy.laplacian = e.value("laplacian", 0.0);
    map.energy.opcomm = e.value("opcomm", 0.0);
    map.energy.orientation = e.value("orientation", 0.0);
    map.energy.ridge = e.value("ridge", 0.0);
    map.energy.regularized = e.value("regularized", false);
    map.energy.iterations = e.value("iterations", 0);
    map.energy.relative_gradient = e.value("relative_gradient", 0.0);
  }
  return map;
}

Eigen::Matrix3Xd coordinate_colors(const TriMesh& mesh) {
  const Eigen::Vector3d lo = mesh.vertices.rowwise().minCoeff();
  const Eigen::Vector3d span = (mesh.vertices.rowwise().maxCoeff() - lo).cwiseMax(1e-12);
  return (mesh.vertices.colwise() - lo).array().colwise() / span.array();
}

void save_correspondence_plys(const std::filesystem::path& stem, const TriMesh& source, const TriMesh& target,
                              const PointMap& map) {
  if (map.num_target() != target.num_vertices() || !map.valid(source.num_vertices()))
    throw ValidationError("point map does not match the meshes");
  VertexAttributes src, dst;
  src.colors = coordinate_colors(source);
  dst.colors.resize(3, target.num_vertices());
  for (Index y = 0; y < target.num_vertices(); ++y) dst.colors.col(y) = src.colors.col(map.to_source[y]);
  save_mesh(with_suffix(stem, "_source.ply"), source, src);
  save_mesh(with_suffix(stem, "_target.ply"), target, dst);
}

}  // namespace fmgrasp
