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
#include "fmgrasp/cli/config.h"

#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"

namespace fmgrasp {
namespace {

ConfigError syntax_error(const std::string& name, int line, const std::string& reason) {
  return ConfigError(name + ":" + std::to_string(line) + ": " + reason);
}

using Value = std::variant<bool, double, std::string>;

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const Value&, const std::string&)> set;
  std::string path() const { return section.empty() ? key : section + "." + key; }
};

[[noreturn]] void type_error(const std::string& where, const std::string& want) {
  throw ConfigError(where + ": expected " + want);
}

double as_number(const Value& v, const std::string& where) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  type_error(where, "a number");
}

template <typename Int>
Int as_integer(const Value& v, const std::string& where) {
  const double d = as_number(v, where);
  if (d != std::floor(d) || std::abs(d) > 9.0e15) type_error(where, "an integer");
  return static_cast<Int>(d);
}

bool as_bool(const Value& v, const std::string& where) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  type_error(where, "true or false");
}

std::string as_string(const Value& v, const std::string& where) {
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  type_error(where, "a quoted string");
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  for (int precision = 15; precision < 17; ++precision) {
    const std::string text = format_double(v, precision);
    if (std::strtod(text.c_str(), nullptr) == v) return text;
  }
  return format_double(v, 17);
}

#define FM_DOUBLE(sec, name, member)                                                                   \
  Field {                                                                                              \
    sec, name, [](const PipelineConfig& c) { return num(c.member); },                                  \
        [](PipelineConfig& c, const Value& v, const std::string& w) { c.member = as_number(v, w); }    \
  }
#define FM_INT(sec, name, member, type)                                                                \
  Field {                                                                                              \
    sec, name, [](const PipelineConfig& c) { return std::to_string(c.member); },                       \
        [](PipelineConfig& c, const Value& v, const std::string& w) { c.member = as_integer<type>(v, w); } \
  }
#define FM_BOOL(sec, name, member)                                                                     \
  Field {                                                                                              \
    sec, name, [](const PipelineConfig& c) { return std::string(c.member ? "true" : "false"); },       \
        [](PipelineConfig& c, const Value& v, const std::string& w) { c.member = as_bool(v, w); }      \
  }
#define FM_STRING(sec, name, member)                                                                   \
  Field {                                                                                              \
    sec, name, [](const PipelineConfig& c) { return quote(c.member); },                                \
        [](PipelineConfig& c, const Value& v, const std::string& w) { c.member = as_string(v, w); }    \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      FM_STRING("", "schema", schema),
      Field{"pipeline", "method", [](const PipelineConfig& c) { return quote(to_string(c.method)); },
            [](PipelineConfig& c, const Value& v, const std::string& w) {
              c.method = match_method_from_string(as_string(v, w));
            }},
      FM_INT("pipeline", "seed", seed, std::uint64_t),
      FM_INT("spectral", "k", k, Index),
      FM_INT("spectral", "dense_threshold", eigen.dense_threshold, Index),
      FM_DOUBLE("spectral", "tolerance", eigen.tolerance),
      FM_STRING("spectral", "cache_dir", cache_dir),
      FM_INT("descriptors", "d", d, Index),
      FM_DOUBLE("descriptors", "sigma_factor", sigma_factor),
      FM_DOUBLE("fmap", "w_desc", fmap.w_desc),
      FM_DOUBLE("fmap", "w_lap", fmap.w_lap),
      FM_DOUBLE("fmap", "w_opcomm", fmap.w_opcomm),
      FM_DOUBLE("fmap", "w_orient", fmap.w_orient),
      FM_INT("fmap", "operator_step", fmap.operator_step, Index),
      FM_BOOL("fmap", "normalize_descriptors", fmap.normalize_descriptors),
      FM_INT("fmap", "refine_iterations", fmap.refine_iterations, int),
      FM_BOOL("fmap", "bijective", fmap.bijective),
      FM_DOUBLE("fmap", "tolerance", fmap.tolerance),
      FM_INT("fmap", "max_solver_iterations", fmap.max_solver_iterations, int),
      FM_INT("icp", "max_iterations", icp.max_iterations, int),
      FM_DOUBLE("icp", "trim_fraction", icp.trim_fraction),
      FM_DOUBLE("icp", "tolerance", icp.tolerance),
      FM_DOUBLE("cpd", "beta", cpd.beta),
      FM_DOUBLE("cpd", "lambda", cpd.lambda),
      FM_DOUBLE("cpd", "w_outlier", cpd.w_outlier),
      FM_INT("cpd", "max_iterations", cpd.max_iterations, int),
      FM_DOUBLE("cpd", "tolerance", cpd.tolerance),
      FM_INT("cpd", "max_points", cpd.max_points, Index),
      FM_INT("segmentation", "n_clusters", n_clusters, int),
      FM_INT("grasp", "count", grasp_count, int),
      FM_STRING("grasp", "gripper", gripper_path),
      FM_DOUBLE("replan", "mu1", transfer.replan.mu1),
      FM_DOUBLE("replan", "mu2", transfer.replan.mu2),
      FM_DOUBLE("replan", "psi", transfer.replan.psi),
      FM_DOUBLE("replan", "rho", transfer.replan.rho),
      FM_BOOL("replan", "squared_change", transfer.replan.squared_change),
      FM_DOUBLE("replan", "translation_step", transfer.replan.translation_step),
      FM_DOUBLE("replan", "rotation_step_deg", transfer.replan.rotation_step_deg),
      FM_DOUBLE("replan", "min_translation_step", transfer.replan.min_translation_step),
      FM_DOUBLE("replan", "min_rotation_step_deg", transfer.replan.min_rotation_step_deg),
      FM_INT("replan", "max_evaluations", transfer.replan.max_evaluations, int),
  };
  return table;
}

#undef FM_DOUBLE
#undef FM_INT
#undef FM_BOOL
#undef FM_STRING

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

Value parse_value(const std::string& raw, const std::string& name, int line) {
  if (raw.empty()) throw syntax_error(name, line, "missing value");
  if (raw.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < raw.size() && raw[i] != '"'; ++i) {
      if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
      out += raw[i];
    }
    if (i >= raw.size()) throw syntax_error(name, line, "unterminated string");
    const std::string rest = trim(raw.substr(i + 1));
    if (!rest.empty() && rest.front() != '#') throw syntax_error(name, line, "unexpected text after string");
    return out;
  }
  std::string token = trim(raw.substr(0, raw.find('#')));
  if (token == "true") return true;
  if (token == "false") return false;
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw syntax_error(name, line, "cannot parse value '" + token + "'");
  return value;
}

}  // namespace

std::string to_string(MatchMethod method) {
  switch (method) {
    case MatchMethod::FunctionalMap: return "fm";
    case MatchMethod::Cpd: return "cpd";
    case MatchMethod::Icp: return "icp";
  }
  return "fm";
}

MatchMethod match_method_from_string(const std::string& name) {
  if (name == "fm") return MatchMethod::FunctionalMap;
  if (name == "cpd") return MatchMethod::Cpd;
  if (name == "icp") return MatchMethod::Icp;
  throw ConfigError("method must be one of fm, cpd, icp (got '" + name + "')");
}

void PipelineConfig::validate() const {
  if (schema != kConfigSchema)
    throw ConfigError("schema: expected \"" + std::string(kConfigSchema) + "\", got \"" + schema + "\"");
  if (k < 2) throw ConfigError("spectral.k must be >= 2");
  if (d < 1) throw ConfigError("descriptors.d must be >= 1");
  if (!(sigma_factor > 0)) throw ConfigError("descriptors.sigma_factor must be > 0");
  if (eigen.dense_threshold < 0) throw ConfigError("spectral.dense_threshold must be >= 0");
  if (!(eigen.tolerance > 0)) throw ConfigError("spectral.tolerance must be > 0");
  if (n_clusters < 1) throw ConfigError("segmentation.n_clusters must be >= 1");
  if (grasp_count < 1) throw ConfigError("grasp.count must be >= 1");
  fmap.validate();
  icp.validate();
  cpd.validate();
  transfer.replan.validate();
  transfer.gripper.validate();
}

PipelineConfig parse_config(const std::string& text, const std::string& name) {
  std::map<std::string, const Field*> lookup;
  std::set<std::string> sections;
  for (const Field& f : fields()) {
    lookup[f.path()] = &f;
    if (const auto dot = f.path().find('.'); dot != std::string::npos) sections.insert(f.path().substr(0, dot));
  }

  PipelineConfig config;
  config.schema.clear();
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      const auto close = t.find(']');
      if (close == std::string::npos) throw syntax_error(name, line_no, "unterminated section header");
      section = trim(t.substr(1, close - 1));
      if (!sections.count(section)) throw syntax_error(name, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw syntax_error(name, line_no, "expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string path = section.empty() ? key : section + "." + key;
    const auto it = lookup.find(path);
    if (it == lookup.end()) throw ConfigError(name + ":" + std::to_string(line_no) + ": unknown key '" + path + "'");
    if (seen.count(path))
      throw ConfigError(name + ":" + std::to_string(line_no) + ": duplicate key '" + path + "' (first on line " +
                        std::to_string(seen[path]) + ")");
    seen[path] = line_no;
    it->second->set(config, parse_value(trim(t.substr(eq + 1)), name, line_no), path);
  }
  if (config.schema.empty()) throw ConfigError(name + ": missing schema field");
  config.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path), path.string()); }

std::string to_config_text(const PipelineConfig& config) {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    if (f.section != section) {
      section = f.section;
      out += "\n[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace fmgrasp
