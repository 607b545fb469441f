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
#include <optional>

#include "fmgrasp/spectral/eigenbasis.h"

namespace fmgrasp {

/// Binary serialization: magic, version, mesh hash, n, k, then eigenvalues,
/// column-major eigenfunctions and mass as little-endian doubles.
void save_basis(const std::filesystem::path& path, const SpectralBasis& basis, std::uint64_t mesh_hash);

/// Returns nullopt when the file is missing or was written for another mesh or k.
/// Throws FormatError on a corrupt file.
std::optional<SpectralBasis> load_basis(const std::filesystem::path& path, std::uint64_t mesh_hash, Index k);

/// Directory of cached bases keyed by mesh content hash and k.
class BasisCache {
public:
  /// An empty directory disables caching.
  explicit BasisCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

  SpectralBasis get(const TriMesh& mesh, Index k, const EigenOptions& options = {}) const;
  std::filesystem::path entry_path(std::uint64_t mesh_hash, Index k) const;

private:
  std::filesystem::path directory_;
};

}  // namespace fmgrasp
