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
#include "fmgrasp/spectral/basis_cache.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"

namespace fmgrasp {
namespace {

constexpr char kMagic[8] = {'F', 'M', 'G', 'B', 'A', 'S', 'I', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, const T& value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  out.append(p, sizeof(T));
}

void put_doubles(std::string& out, const double* data, Index count) {
  out.append(reinterpret_cast<const char*>(data), static_cast<std::size_t>(count) * sizeof(double));
}

class Reader {
public:
  Reader(const std::string& bytes, std::string path) : bytes_(bytes), path_(std::move(path)) {}

  template <typename T>
  T get() {
    T value;
    take(&value, sizeof(T));
    return value;
  }
  void get_doubles(double* data, Index count) { take(data, static_cast<std::size_t>(count) * sizeof(double)); }
  bool done() const { return pos_ == bytes_.size(); }

private:
  void take(void* dst, std::size_t size) {
    if (pos_ + size > bytes_.size()) throw FormatError(path_, 0, "truncated basis cache file");
    std::memcpy(dst, bytes_.data() + pos_, size);
    pos_ += size;
  }
  const std::string& bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_basis(const std::filesystem::path& path, const SpectralBasis& basis, std::uint64_t mesh_hash) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put(out, kVersion);
  put(out, mesh_hash);
  put(out, static_cast<std::int64_t>(basis.num_vertices()));
  put(out, static_cast<std::int64_t>(basis.size()));
  put_doubles(out, basis.eigenvalues.data(), basis.size());
  put_doubles(out, basis.functions.data(), basis.functions.size());
  put_doubles(out, basis.mass.data(), basis.mass.size());
  write_file_atomic(path, out);
}

std::optional<SpectralBasis> load_basis(const std::filesystem::path& path, std::uint64_t mesh_hash, Index k) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  const std::string bytes = read_file(path);
  Reader in(bytes, path.string());
  char magic[8];
  for (char& c : magic) c = in.get<char>();
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw FormatError(path.string(), 0, "not a basis cache file");
  if (in.get<std::uint32_t>() != kVersion) return std::nullopt;
  if (in.get<std::uint64_t>() != mesh_hash) return std::nullopt;
  const auto n = static_cast<Index>(in.get<std::int64_t>());
  const auto stored_k = static_cast<Index>(in.get<std::int64_t>());
  if (stored_k != k) return std::nullopt;
  if (n <= 0 || k <= 0) throw FormatError(path.string(), 0, "invalid basis dimensions");
  SpectralBasis basis;
  basis.eigenvalues.resize(k);
  basis.functions.resize(n, k);
  basis.mass.resize(n);
  in.get_doubles(basis.eigenvalues.data(), k);
  in.get_doubles(basis.functions.data(), n * k);
  in.get_doubles(basis.mass.data(), n);
  if (!in.done()) throw FormatError(path.string(), 0, "trailing bytes in basis cache file");
  return basis;
}

std::filesystem::path BasisCache::entry_path(std::uint64_t mesh_hash, Index k) const {
  char name[64];
  std::snprintf(name, sizeof(name), "basis_%016llx_k%lld.bin", static_cast<unsigned long long>(mesh_hash),
                static_cast<long long>(k));
  return directory_ / name;
}

SpectralBasis BasisCache::get(const TriMesh& mesh, Index k, const EigenOptions& options) const {
  if (directory_.empty()) return compute_basis(mesh, k, options);
  const std::uint64_t hash = content_hash(mesh) ^ (options.canonicalize ? 0x9e3779b97f4a7c15ull : 0ull);
  const auto path = entry_path(hash, k);
  if (auto cached = load_basis(path, hash, k); cached && cached->num_vertices() == mesh.num_vertices()) return *cached;
  SpectralBasis basis = compute_basis(mesh, k, options);
  save_basis(path, basis, hash);
  return basis;
}

}  // namespace fmgrasp
