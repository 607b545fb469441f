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
// fmgrasp: segment, match, transfer, bench, deform and decimate from the command line.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fmgrasp/cli/config.h"
#include "fmgrasp/cli/match.h"
#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"
#include "fmgrasp/eval/bench.h"
#include "fmgrasp/eval/metrics.h"
#include "fmgrasp/eval/synthetic.h"
#include "fmgrasp/fmap/fmap_io.h"
#include "fmgrasp/grasp/antipodal.h"
#include "fmgrasp/grasp/grasp_io.h"
#include "fmgrasp/mesh/decimate.h"
#include "fmgrasp/mesh/deform.h"
#include "fmgrasp/mesh/kmeans.h"
#include "fmgrasp/mesh/mesh_io.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace fmgrasp;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kNoGrasps = 3, kUnreachableExit = 4, kNumerical = 5 };

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string method;
};

PipelineConfig resolve_config(const Globals& g) {
  PipelineConfig cfg = g.config_path.empty() ? PipelineConfig{} : load_config(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  if (!g.method.empty()) cfg.method = match_method_from_string(g.method);
  cfg.validate();
  return cfg;
}

TransferConfig transfer_config(const PipelineConfig& cfg) {
  TransferConfig t = cfg.transfer;
  if (!cfg.gripper_path.empty()) t.gripper = load_gripper(cfg.gripper_path);
  return t;
}

Eigen::Vector3d parse_point(const std::vector<double>& v) {
  if (v.size() != 3) throw ConfigError("expected three coordinates");
  return {v[0], v[1], v[2]};
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::optional<PointMap> ground_truth(const std::string& spec, const TriMesh& source, const TriMesh& target) {
  if (spec.empty()) return std::nullopt;
  if (spec == "identity") {
    if (source.num_vertices() != target.num_vertices())
      throw ValidationError("identity ground truth needs equal vertex counts");
    return PointMap::identity(target.num_vertices());
  }
  return load_pointmap(spec);
}

int run_segment(const Globals& g, const std::string& mesh_path, std::optional<int> clusters) {
  const PipelineConfig cfg = resolve_config(g);
  const int n = clusters.value_or(cfg.n_clusters);
  if (n < 1) throw ConfigError("clusters: must be at least 1");
  const TriMesh mesh = load_mesh(mesh_path);
  const Segmentation seg = kmeans_segment(mesh, n, cfg.seed);
  const fs::path out = fs::path(g.out_dir) / stem_of(mesh_path);
  write_file_atomic(out.string() + ".labels", to_label_text(seg));
  VertexAttributes attr;
  attr.labels = seg.labels;
  attr.colors.resize(3, mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) attr.colors.col(v) = label_color(seg.labels[v]);
  save_mesh(out.string() + "_segments.ply", mesh, attr);
  const auto sizes = seg.cluster_sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c) std::cout << "cluster " << c << ": " << sizes[c] << " vertices\n";
  return kOk;
}

int run_match(const Globals& g, const std::string& source_path, const std::string& target_path,
              const std::string& truth_spec) {
  const PipelineConfig cfg = resolve_config(g);
  const TriMesh source = load_mesh(source_path);
  const TriMesh target = load_mesh(target_path);
  const MatchOutput out = match_shapes(source, target, cfg);
  print_warnings(out.warnings);
  const fs::path dir(g.out_dir);
  save_pointmap(dir / "pointmap.txt", out.map);
  if (out.fmap) save_fmap(dir / "fmap", *out.fmap, cfg.fmap);
  save_correspondence_plys(dir / "correspondence", source, target, out.map);

  nlohmann::ordered_json report;
  report["method"] = to_string(out.method);
  report["residual"] = out.residual;
  report["refine_history"] = out.refine_history;
  report["round_trip_history"] = out.round_trip_history;
  report["warnings"] = out.warnings;
  report["timings"] = {{"basis", out.timings.basis},
                       {"fit", out.timings.fit},
                       {"refine", out.timings.refine},
                       {"total", out.timings.total}};
  if (const auto truth = ground_truth(truth_spec, source, target)) {
    const CorrespondenceError err = geodesic_error(out.map, *truth, source);
    report["mean_geodesic_error"] = err.mean;
    report["fraction_below_0.1"] = err.fraction_below_threshold(0.1);
    std::cout << "mean geodesic error: " << format_double(err.mean, 6) << " of diameter\n";
  }
  if (!out.report_json.empty()) report["registration"] = nlohmann::ordered_json::parse(out.report_json);
  write_file_atomic(dir / "match_report.json", report.dump(2) + "\n");
  std::cout << "method " << to_string(out.method) << ", residual " << format_double(out.residual, 9) << "\n";
  return kOk;
}

struct TransferArgs {
  std::string source, target, labels, grasps, pointmap;
  std::optional<int> region;
  std::vector<double> region_point;
  bool generate = false;
};

int run_transfer(const Globals& g, const TransferArgs& a) {
  const PipelineConfig cfg = resolve_config(g);
  if (a.grasps.empty() == !a.generate) throw ConfigError("transfer: pass exactly one of --grasps or --generate");
  if (!a.region && a.region_point.empty()) throw ConfigError("transfer: pass --region or --region-point");
  const TransferConfig transfer = transfer_config(cfg);
  const TriMesh source = load_mesh(a.source);
  const TriMesh target = load_mesh(a.target);
  Segmentation seg =
      a.labels.empty() ? kmeans_segment(source, cfg.n_clusters, cfg.seed) : parse_label_text(read_file(a.labels), source);
  const int region = a.region ? *a.region : region_at(seg, source, parse_point(a.region_point));
  if (region < 0 || region >= seg.num_clusters()) throw ConfigError("region: id out of range");

  const fs::path dir(g.out_dir);
  std::vector<Grasp> grasps;
  if (a.generate) {
    grasps = generate_antipodal_grasps(source, seg.members(region), transfer.gripper, cfg.grasp_count, cfg.seed);
    save_grasps(dir / "grasps.json", grasps);
  } else {
    grasps = load_grasps(a.grasps, &source);
  }
  const GraspModel model = build_grasp_model(source, std::move(seg), region, grasps);

  PointMap map;
  if (a.pointmap.empty()) {
    const MatchOutput out = match_shapes(source, target, cfg);
    print_warnings(out.warnings);
    map = out.map;
    save_pointmap(dir / "pointmap.txt", map);
  } else {
    map = load_pointmap(a.pointmap);
  }
  const GraspResult result = transfer_pipeline(model, target, map, transfer);
  for (const auto& r : result.rejections) std::cerr << "rejected: " << r << "\n";
  write_file_atomic(dir / "grasp_result.json", grasp_result_to_json(result));
  save_scene_ply(dir / "scene.ply", target, result);
  std::cout << "grasp rank " << result.rank << ", region accurate " << (result.region_accurate ? "yes" : "no")
            << ", contact error " << format_double(result.contact_error, 6) << "\n";
  return kOk;
}

int run_bench(const Globals& g, const std::string& manifest_path, bool synthetic, int around, int along) {
  const PipelineConfig cfg = resolve_config(g);
  const fs::path dir(g.out_dir);
  Manifest manifest;
  if (synthetic) {
    SyntheticOptions opts;
    opts.around = around;
    opts.along = along;
    manifest = load_manifest(write_synthetic_dataset(dir / "data", synthetic_objects(opts), cfg.n_clusters, cfg.seed));
  } else {
    if (manifest_path.empty()) throw ConfigError("bench: pass --manifest or --synthetic");
    manifest = load_manifest(manifest_path);
  }
  BenchOptions opts;
  if (!g.method.empty()) opts.methods = {cfg.method};
  opts.artifact_dir = dir / "artifacts";
  const ComparisonReport report = compare_methods(manifest, cfg, opts);
  write_report(dir, report);
  for (MatchMethod m : opts.methods) {
    const std::string name = to_string(m);
    if (!report.count(name)) continue;
    std::cout << name << ": region accuracy " << format_double(100.0 * report.pass_rate(name), 4) << "% over "
              << report.count(name) << " configurations\n";
  }
  return kOk;
}

struct DeformArgs {
  std::string mesh, kind = "bend", output;
  double magnitude = 0.0, begin = 0.0, end = 1.0;
  std::vector<double> axis, origin, bend_axis;
  bool suite = false;
  int around = 32, along = 64;
};

int run_deform(const Globals& g, const DeformArgs& a) {
  const PipelineConfig cfg = resolve_config(g);
  if (a.suite) {
    SyntheticOptions opts;
    opts.around = a.around;
    opts.along = a.along;
    const fs::path manifest = write_synthetic_dataset(g.out_dir, synthetic_objects(opts), cfg.n_clusters, cfg.seed);
    std::cout << "wrote " << manifest.string() << "\n";
    return kOk;
  }
  if (a.mesh.empty()) throw ConfigError("deform: pass --mesh or --suite");
  DeformationSpec spec;
  spec.kind = deformation_kind_from_string(a.kind);
  spec.magnitude = a.magnitude;
  spec.begin = a.begin;
  spec.end = a.end;
  if (!a.axis.empty()) spec.axis = parse_point(a.axis);
  if (!a.origin.empty()) spec.origin = parse_point(a.origin);
  if (!a.bend_axis.empty()) spec.bend_axis = parse_point(a.bend_axis);
  validate(spec);
  const TriMesh out = synth_deform(load_mesh(a.mesh), spec);
  const fs::path path =
      a.output.empty() ? fs::path(g.out_dir) / (stem_of(a.mesh) + "_" + a.kind + ".obj") : fs::path(a.output);
  save_mesh(path, out);
  std::cout << "wrote " << path.string() << "\n";
  return kOk;
}

int run_decimate(const Globals& g, const std::string& mesh_path, Index vertices, const std::string& output) {
  resolve_config(g);
  if (vertices < 4) throw ConfigError("vertices: must be at least 4");
  const TriMesh mesh = load_mesh(mesh_path);
  const TriMesh out = decimate_quadric(mesh, vertices);
  const fs::path path = output.empty() ? fs::path(g.out_dir) / (stem_of(mesh_path) + "_decimated.obj") : fs::path(output);
  save_mesh(path, out);
  std::cout << mesh.num_vertices() << " -> " << out.num_vertices() << " vertices, wrote " << path.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grasp transfer between deformed shapes via functional maps"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "Pipeline configuration file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Random seed override");
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--method", g.method, "Matching method: fm, cpd or icp")
      ->check(CLI::IsMember({"fm", "cpd", "icp"}));

  std::function<int()> action;

  auto* segment = app.add_subcommand("segment", "K-means segmentation with a colored PLY");
  std::string seg_mesh;
  std::optional<int> seg_clusters;
  segment->add_option("mesh", seg_mesh, "Input mesh")->required()->check(CLI::ExistingFile);
  segment->add_option("--clusters", seg_clusters, "Number of clusters");
  segment->callback([&] { action = [&] { return run_segment(g, seg_mesh, seg_clusters); }; });

  auto* match = app.add_subcommand("match", "Point map from target to source");
  std::string match_source, match_target, match_truth;
  match->add_option("source", match_source, "Source mesh")->required()->check(CLI::ExistingFile);
  match->add_option("target", match_target, "Target mesh")->required()->check(CLI::ExistingFile);
  match->add_option("--ground-truth", match_truth, "'identity' or a point map file");
  match->callback([&] { action = [&] { return run_match(g, match_source, match_target, match_truth); }; });

  auto* transfer = app.add_subcommand("transfer", "Transfer a grasp from the source region to the target");
  TransferArgs ta;
  transfer->add_option("source", ta.source, "Source mesh")->required()->check(CLI::ExistingFile);
  transfer->add_option("target", ta.target, "Target mesh")->required()->check(CLI::ExistingFile);
  transfer->add_option("--labels", ta.labels, "Segmentation labels from 'segment'")->check(CLI::ExistingFile);
  transfer->add_option("--region", ta.region, "Region id");
  transfer->add_option("--region-point", ta.region_point, "Point inside the region: x y z")->expected(3);
  transfer->add_option("--grasps", ta.grasps, "Grasp list JSON")->check(CLI::ExistingFile);
  transfer->add_flag("--generate", ta.generate, "Sample antipodal grasps in the region");
  transfer->add_option("--pointmap", ta.pointmap, "Precomputed point map")->check(CLI::ExistingFile);
  transfer->callback([&] { action = [&] { return run_transfer(g, ta); }; });

  auto* bench = app.add_subcommand("bench", "Compare matching methods over a manifest");
  std::string bench_manifest;
  bool bench_synthetic = false;
  int bench_around = 32, bench_along = 64;
  bench->add_option("--manifest", bench_manifest, "Manifest JSON")->check(CLI::ExistingFile);
  bench->add_flag("--synthetic", bench_synthetic, "Generate and run the synthetic suite");
  bench->add_option("--around", bench_around, "Synthetic ring resolution");
  bench->add_option("--along", bench_along, "Synthetic ring count");
  bench->callback([&] {
    action = [&] { return run_bench(g, bench_manifest, bench_synthetic, bench_around, bench_along); };
  });

  auto* deform = app.add_subcommand("deform", "Bend, twist or stretch a mesh, or write the synthetic suite");
  DeformArgs da;
  deform->add_option("--mesh", da.mesh, "Input mesh")->check(CLI::ExistingFile);
  deform->add_option("--kind", da.kind, "bend, twist or stretch");
  deform->add_option("--magnitude", da.magnitude, "Angle in radians, or stretch factor");
  deform->add_option("--axis", da.axis, "Deformation axis: x y z")->expected(3);
  deform->add_option("--origin", da.origin, "Axis origin: x y z")->expected(3);
  deform->add_option("--bend-axis", da.bend_axis, "Bend rotation axis: x y z")->expected(3);
  deform->add_option("--begin", da.begin, "Start of the deformed interval");
  deform->add_option("--end", da.end, "End of the deformed interval");
  deform->add_option("-o,--output", da.output, "Output mesh");
  deform->add_flag("--suite", da.suite, "Write the synthetic objects and manifest");
  deform->add_option("--around", da.around, "Synthetic ring resolution");
  deform->add_option("--along", da.along, "Synthetic ring count");
  deform->callback([&] { action = [&] { return run_deform(g, da); }; });

  auto* decimate = app.add_subcommand("decimate", "Quadric edge-collapse simplification");
  std::string dec_mesh, dec_output;
  Index dec_vertices = 3000;
  decimate->add_option("mesh", dec_mesh, "Input mesh")->required()->check(CLI::ExistingFile);
  decimate->add_option("--vertices", dec_vertices, "Target vertex count");
  decimate->add_option("-o,--output", dec_output, "Output mesh");
  decimate->callback([&] { action = [&] { return run_decimate(g, dec_mesh, dec_vertices, dec_output); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  if (*seed_opt) g.seed = seed;

  try {
    std::error_code ec;
    fs::create_directories(g.out_dir, ec);
    return action();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const NoGraspsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoGrasps;
  } catch (const UnreachableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnreachableExit;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
