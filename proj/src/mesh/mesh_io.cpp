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
#include "fmgrasp/mesh/mesh_io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"

namespace fmgrasp {
namespace {

struct LineReader {
  std::istringstream in;
  std::string name;
  int line_no = 0;

  LineReader(const std::string& text, std::string n) : in(text), name(std::move(n)) {}

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& reason) const { throw FormatError(name, line_no, reason); }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

double to_double(const LineReader& r, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) r.fail("invalid number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    r.fail("invalid number '" + tok + "'");
  }
}

long to_long(const LineReader& r, const std::string& tok) {
  long v = 0;
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) r.fail("invalid integer '" + tok + "'");
  return v;
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

TriMesh assemble(const std::vector<Eigen::Vector3d>& verts, const std::vector<Eigen::Vector3i>& tris,
                 const std::vector<Eigen::Vector3d>& normals) {
  Eigen::Matrix3Xd V(3, static_cast<Index>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i) V.col(static_cast<Index>(i)) = verts[i];
  Eigen::Matrix3Xi F(3, static_cast<Index>(tris.size()));
  for (std::size_t i = 0; i < tris.size(); ++i) F.col(static_cast<Index>(i)) = tris[i];
  TriMesh mesh = make_mesh(std::move(V), std::move(F));
  if (!normals.empty() && normals.size() == verts.size()) {
    mesh.normals.resize(3, static_cast<Index>(normals.size()));
    for (std::size_t i = 0; i < normals.size(); ++i) mesh.normals.col(static_cast<Index>(i)) = normals[i].normalized();
  }
  return mesh;
}

}  // namespace

TriMesh parse_obj(const std::string& text, const std::string& name) {
  LineReader r(text, name);
  std::vector<Eigen::Vector3d> verts, file_normals;
  std::vector<Eigen::Vector3i> tris;
  std::vector<std::pair<int, int>> normal_refs;  // (vertex, normal)
  std::string line;
  while (r.next(line)) {
    const auto tokens = split(strip_comment(line));
    if (tokens.empty()) continue;
    const std::string& tag = tokens[0];
    if (tag == "v") {
      if (tokens.size() < 4) r.fail("vertex needs 3 coordinates");
      verts.emplace_back(to_double(r, tokens[1]), to_double(r, tokens[2]), to_double(r, tokens[3]));
    } else if (tag == "vn") {
      if (tokens.size() < 4) r.fail("normal needs 3 components");
      file_normals.emplace_back(to_double(r, tokens[1]), to_double(r, tokens[2]), to_double(r, tokens[3]));
    } else if (tag == "f") {
      if (tokens.size() < 4) r.fail("face needs at least 3 vertices");
      std::vector<int> poly;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        const auto slash = tok.find('/');
        long idx = to_long(r, tok.substr(0, slash));
        if (idx == 0) r.fail("face index 0 is invalid (OBJ indices are 1-based)");
        idx = idx > 0 ? idx - 1 : static_cast<long>(verts.size()) + idx;
        if (idx < 0 || idx >= static_cast<long>(verts.size())) r.fail("face index out of range");
        poly.push_back(static_cast<int>(idx));
        if (slash != std::string::npos) {
          const auto slash2 = tok.find('/', slash + 1);
          if (slash2 != std::string::npos && slash2 + 1 < tok.size()) {
            long nidx = to_long(r, tok.substr(slash2 + 1));
            if (nidx == 0) r.fail("normal index 0 is invalid");
            nidx = nidx > 0 ? nidx - 1 : static_cast<long>(file_normals.size()) + nidx;
            if (nidx < 0 || nidx >= static_cast<long>(file_normals.size())) r.fail("normal index out of range");
            normal_refs.emplace_back(static_cast<int>(idx), static_cast<int>(nidx));
          }
        }
      }
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) tris.emplace_back(poly[0], poly[i], poly[i + 1]);
    }
    // Other records (vt, o, g, s, usemtl, mtllib) carry nothing we need.
  }
  std::vector<Eigen::Vector3d> normals;
  if (!normal_refs.empty()) {
    normals.assign(verts.size(), Eigen::Vector3d::Zero());
    std::vector<char> set(verts.size(), 0);
    for (auto [v, n] : normal_refs) {
      normals[v] = file_normals[n];
      set[v] = 1;
    }
    if (std::find(set.begin(), set.end(), 0) != set.end()) normals.clear();
  } else if (file_normals.size() == verts.size()) {
    normals = file_normals;
  }
  return assemble(verts, tris, normals);
}

TriMesh parse_off(const std::string& text, const std::string& name) {
  LineReader r(text, name);
  std::string line;
  auto next_tokens = [&]() {
    while (r.next(line)) {
      auto t = split(strip_comment(line));
      if (!t.empty()) return t;
    }
    r.fail("unexpected end of file");
  };
  auto tokens = next_tokens();
  if (tokens[0] != "OFF") r.fail("missing OFF header");
  tokens.erase(tokens.begin());
  if (tokens.empty()) tokens = next_tokens();
  if (tokens.size() < 2) r.fail("expected vertex and face counts");
  const long nv = to_long(r, tokens[0]), nf = to_long(r, tokens[1]);
  if (nv < 0 || nf < 0) r.fail("negative element count");
  std::vector<Eigen::Vector3d> verts;
  std::vector<Eigen::Vector3i> tris;
  for (long i = 0; i < nv; ++i) {
    const auto t = next_tokens();
    if (t.size() < 3) r.fail("vertex needs 3 coordinates");
    verts.emplace_back(to_double(r, t[0]), to_double(r, t[1]), to_double(r, t[2]));
  }
  for (long i = 0; i < nf; ++i) {
    const auto t = next_tokens();
    const long count = to_long(r, t[0]);
    if (count < 3 || static_cast<long>(t.size()) < count + 1) r.fail("malformed face record");
    std::vector<int> poly;
    for (long j = 0; j < count; ++j) {
      const long idx = to_long(r, t[static_cast<std::size_t>(j + 1)]);
      if (idx < 0 || idx >= nv) r.fail("face index out of range");
      poly.push_back(static_cast<int>(idx));
    }
    for (std::size_t j = 1; j + 1 < poly.size(); ++j) tris.emplace_back(poly[0], poly[j], poly[j + 1]);
  }
  return assemble(verts, tris, {});
}

TriMesh parse_ply(const std::string& text, const std::string& name) {
  LineReader r(text, name);
  std::string line;
  if (!r.next(line) || split(line) != std::vector<std::string>{"ply"}) r.fail("missing ply magic");
  struct Element {
    std::string name;
    long count = 0;
    std::vector<std::string> props;  // "list" properties are stored as "list:<name>"
  };
  std::vector<Element> elements;
  bool ascii = false;
  while (true) {
    if (!r.next(line)) r.fail("unterminated header");
    const auto t = split(line);
    if (t.empty()) continue;
    if (t[0] == "format") {
      if (t.size() < 2 || t[1] != "ascii") r.fail("only ascii PLY is supported");
      ascii = true;
    } else if (t[0] == "element") {
      if (t.size() < 3) r.fail("malformed element line");
      elements.push_back({t[1], to_long(r, t[2]), {}});
    } else if (t[0] == "property") {
      if (elements.empty()) r.fail("property before element");
      if (t.size() >= 5 && t[1] == "list") elements.back().props.push_back("list:" + t[4]);
      else if (t.size() >= 3) elements.back().props.push_back(t[2]);
      else r.fail("malformed property line");
    } else if (t[0] == "end_header") {
      break;
    }
  }
  if (!ascii) r.fail("missing format line");
  std::vector<Eigen::Vector3d> verts, normals;
  std::vector<Eigen::Vector3i> tris;
  for (const Element& el : elements) {
    for (long i = 0; i < el.count; ++i) {
      std::vector<std::string> t;
      do {
        if (!r.next(line)) r.fail("unexpected end of file in element '" + el.name + "'");
        t = split(line);
      } while (t.empty());
      std::size_t pos = 0;
      Eigen::Vector3d p = Eigen::Vector3d::Zero(), n = Eigen::Vector3d::Zero();
      bool has_n = false;
      for (const std::string& prop : el.props) {
        if (prop.rfind("list:", 0) == 0) {
          if (pos >= t.size()) r.fail("truncated list property");
          const long count = to_long(r, t[pos++]);
          if (count < 0 || pos + static_cast<std::size_t>(count) > t.size()) r.fail("truncated list property");
          if (el.name == "face" && (prop == "list:vertex_indices" || prop == "list:vertex_index")) {
            if (count < 3) r.fail("face needs at least 3 vertices");
            std::vector<int> poly;
            for (long j = 0; j < count; ++j) {
              const long idx = to_long(r, t[pos + static_cast<std::size_t>(j)]);
              if (idx < 0 || idx >= static_cast<long>(verts.size())) r.fail("face index out of range");
              poly.push_back(static_cast<int>(idx));
            }
            for (std::size_t j = 1; j + 1 < poly.size(); ++j) tris.emplace_back(poly[0], poly[j], poly[j + 1]);
          }
          pos += static_cast<std::size_t>(count);
          continue;
        }
        if (pos >= t.size()) r.fail("too few values for element '" + el.name + "'");
        const std::string& tok = t[pos++];
        if (el.name != "vertex") continue;
        if (prop == "x") p.x() = to_double(r, tok);
        else if (prop == "y") p.y() = to_double(r, tok);
        else if (prop == "z") p.z() = to_double(r, tok);
        else if (prop == "nx") { n.x() = to_double(r, tok); has_n = true; }
        else if (prop == "ny") n.y() = to_double(r, tok);
        else if (prop == "nz") n.z() = to_double(r, tok);
      }
      if (el.name == "vertex") {
        verts.push_back(p);
        if (has_n) normals.push_back(n);
      }
    }
  }
  return assemble(verts, tris, normals);
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  const std::string text = read_file(path);
  if (ext == ".obj") return parse_obj(text, path.string());
  if (ext == ".off") return parse_off(text, path.string());
  if (ext == ".ply") return parse_ply(text, path.string());
  throw FormatError(path.string(), 0, "unsupported mesh format '" + ext + "'");
}

std::string to_obj(const TriMesh& mesh) {
  std::ostringstream out;
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    out << "v " << format_double(mesh.vertices(0, v), 17) << ' ' << format_double(mesh.vertices(1, v), 17) << ' '
        << format_double(mesh.vertices(2, v), 17) << '\n';
  const bool normals = mesh.has_normals();
  if (normals)
    for (Index v = 0; v < mesh.num_vertices(); ++v)
      out << "vn " << format_double(mesh.normals(0, v), 17) << ' ' << format_double(mesh.normals(1, v), 17) << ' '
          << format_double(mesh.normals(2, v), 17) << '\n';
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    out << 'f';
    for (int k = 0; k < 3; ++k) {
      const int i = mesh.faces(k, f) + 1;
      out << ' ' << i;
      if (normals) out << "//" << i;
    }
    out << '\n';
  }
  return out.str();
}

std::string to_off(const TriMesh& mesh) {
  std::ostringstream out;
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    out << format_double(mesh.vertices(0, v), 17) << ' ' << format_double(mesh.vertices(1, v), 17) << ' '
        << format_double(mesh.vertices(2, v), 17) << '\n';
  for (Index f = 0; f < mesh.num_faces(); ++f)
    out << "3 " << mesh.faces(0, f) << ' ' << mesh.faces(1, f) << ' ' << mesh.faces(2, f) << '\n';
  return out.str();
}

std::string to_ply(const TriMesh& mesh, const VertexAttributes& attributes) {
  const bool colors = attributes.colors.cols() == mesh.num_vertices() && mesh.num_vertices() > 0;
  const bool labels = attributes.labels.size() == mesh.num_vertices() && mesh.num_vertices() > 0;
  const bool normals = mesh.has_normals();
  std::ostringstream out;
  out << "ply\nformat ascii 1.0\nelement vertex " << mesh.num_vertices() << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  if (normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
  if (colors) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  if (labels) out << "property int label\n";
  out << "element face " << mesh.num_faces() << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    out << format_double(mesh.vertices(0, v), 17) << ' ' << format_double(mesh.vertices(1, v), 17) << ' '
        << format_double(mesh.vertices(2, v), 17);
    if (normals)
      out << ' ' << format_double(mesh.normals(0, v), 17) << ' ' << format_double(mesh.normals(1, v), 17) << ' '
          << format_double(mesh.normals(2, v), 17);
    if (colors)
      for (int c = 0; c < 3; ++c)
        out << ' ' << static_cast<int>(std::lround(std::clamp(attributes.colors(c, v), 0.0, 1.0) * 255.0));
    if (labels) out << ' ' << attributes.labels(v);
    out << '\n';
  }
  for (Index f = 0; f < mesh.num_faces(); ++f)
    out << "3 " << mesh.faces(0, f) << ' ' << mesh.faces(1, f) << ' ' << mesh.faces(2, f) << '\n';
  return out.str();
}

void save_mesh(const std::filesystem::path& path, const TriMesh& mesh, const VertexAttributes& attributes) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".obj") write_file_atomic(path, to_obj(mesh));
  else if (ext == ".off") write_file_atomic(path, to_off(mesh));
  else if (ext == ".ply") write_file_atomic(path, to_ply(mesh, attributes));
  else throw Error("unsupported mesh format '" + ext + "'");
}

Eigen::Vector3d label_color(int label) {
  static const double palette[][3] = {{0.90, 0.10, 0.10}, {0.10, 0.60, 0.90}, {0.20, 0.75, 0.20}, {0.95, 0.70, 0.10},
                                      {0.60, 0.20, 0.80}, {0.10, 0.80, 0.70}, {0.95, 0.45, 0.70}, {0.50, 0.35, 0.20},
                                      {0.55, 0.55, 0.55}, {0.70, 0.85, 0.20}};
  constexpr int kPalette = sizeof(palette) / sizeof(palette[0]);
  if (label < 0) return {0.0, 0.0, 0.0};
  const auto& c = palette[label % kPalette];
  // Darken on wrap-around so labels beyond the palette stay distinguishable.
  const double shade = 1.0 / (1.0 + label / kPalette);
  return Eigen::Vector3d(c[0], c[1], c[2]) * shade;
}

}  // namespace fmgrasp
