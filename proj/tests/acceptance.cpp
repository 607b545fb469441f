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
// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "fmgrasp/cli/config.h"
#include "fmgrasp/cli/match.h"
#include "fmgrasp/common/error.h"
#include "fmgrasp/common/io.h"
#include "fmgrasp/descriptors/wks.h"
#include "fmgrasp/eval/bench.h"
#include "fmgrasp/eval/metrics.h"
#include "fmgrasp/eval/synthetic.h"
#include "fmgrasp/fmap/functional_map.h"
#include "fmgrasp/fmap/refine.h"
#include "fmgrasp/grasp/replan.h"
#include "fmgrasp/mesh/kmeans.h"
#include "fmgrasp/mesh/primitives.h"
#include "fmgrasp/registration/cpd.h"
#include "fmgrasp/registration/icp.h"
#include "fmgrasp/registration/rigid_transform.h"
#include "fmgrasp/spectral/basis_cache.h"
#include "fmgrasp/spectral/eigenbasis.h"
#include "fmgrasp/spectral/laplacian.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace fmgrasp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int p = 4) { return format_double(v, p); }

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "fmgrasp_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Compact suite used by the method comparison and the determinism check.
constexpr int kBenchAround = 20;
constexpr int kBenchAlong = 40;

PipelineConfig bench_config() {
  PipelineConfig cfg;
  cfg.k = 50;
  cfg.cpd.max_points = 300;
  cfg.cache_dir = (work_dir() / "basis_cache").string();
  return cfg;
}

const std::vector<SyntheticObject>& bench_objects() {
  static const std::vector<SyntheticObject> objects = [] {
    SyntheticOptions opts;
    opts.around = kBenchAround;
    opts.along = kBenchAlong;
    return synthetic_objects(opts);
  }();
  return objects;
}

Index identity_hits(const PointMap& map) {
  Index hits = 0;
  for (Index v = 0; v < map.num_target(); ++v) hits += map.to_source(v) == v;
  return hits;
}

bool non_increasing(const std::vector<double>& h, double slack = 1e-9) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1] + slack * std::max(1.0, std::abs(h[i - 1]))) return false;
  return true;
}

Outcome ac1_spectral_oracle() {
  const TriMesh sphere = make_icosphere(4);
  const auto start = Clock::now();
  const LaplaceOperator op = cotan_laplacian(sphere);
  const SpectralBasis b = eigenbasis(op, 30);
  const double runtime = seconds_since(start);
  double worst = 0.0;
  for (Index i = 1; i <= 15; ++i) {
    const double l = i < 4 ? 1 : (i < 9 ? 2 : 3);
    worst = std::max(worst, std::abs(b.eigenvalues(i) - l * (l + 1)) / (l * (l + 1)));
  }
  const Eigen::MatrixXd gram = b.functions.transpose() * b.mass.asDiagonal() * b.functions;
  const double ortho = (gram - Eigen::MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff();
  Outcome o;
  o.pass = sphere.num_vertices() == 2562 && std::abs(b.eigenvalues(0)) < 1e-8 && worst <= 0.05 && ortho <= 1e-8 &&
           runtime <= 10.0;
  o.detail = "n=" + std::to_string(sphere.num_vertices()) + " max rel eigenvalue error " + fmt(worst) +
             ", orthonormality " + fmt(ortho, 3) + ", " + fmt(runtime, 3) + " s";
  return o;
}

Outcome ac2_wks_normalization() {
  const PipelineConfig cfg = bench_config();
  const BasisCache cache(cfg.cache_dir);
  double worst = 0.0;
  int meshes = 0;
  for (const auto& obj : bench_objects()) {
    std::vector<TriMesh> all{obj.mesh};
    for (const auto& c : obj.configurations) all.push_back(apply_configuration(obj.mesh, c));
    for (const TriMesh& m : all) {
      const SpectralBasis b = cache.get(m, cfg.k, cfg.eigen);
      const DescriptorField f = wks(b, cfg.d, cfg.sigma_factor);
      const Eigen::VectorXd integral = f.values.transpose() * b.mass;
      worst = std::max(worst, (integral.array() - 1.0).abs().maxCoeff());
      ++meshes;
    }
  }
  return {worst <= 1e-6, std::to_string(meshes) + " meshes, max |integral - 1| = " + fmt(worst, 3)};
}

Outcome ac3_self_map() {
  PipelineConfig cfg;
  const TriMesh& cable = bench_objects()[0].mesh;
  const MatchOutput self = match_shapes(cable, cable, cfg);
  const double self_rate = double(identity_hits(self.map)) / double(cable.num_vertices());

  const TriMesh sphere = make_icosphere(3);
  Eigen::VectorXi perm(sphere.num_vertices());
  for (Index i = 0; i < perm.size(); ++i) perm(i) = static_cast<int>(i);
  std::mt19937_64 rng(1);
  std::shuffle(perm.data(), perm.data() + perm.size(), rng);
  const TriMesh shuffled = permute_vertices(sphere, perm);
  cfg.k = 30;
  const MatchOutput pm = match_shapes(sphere, shuffled, cfg);
  Index recovered = 0;
  for (Index v = 0; v < shuffled.num_vertices(); ++v) {
    Index truth = 0;
    (sphere.vertices.colwise() - shuffled.vertex(v)).colwise().squaredNorm().minCoeff(&truth);
    recovered += pm.map.to_source(v) == truth;
  }
  const double perm_rate = double(recovered) / double(sphere.num_vertices());
  return {self_rate >= 0.999 && sphere.num_vertices() == 642 && perm_rate >= 0.95,
          "self-map identity " + fmt(100 * self_rate) + "%, permutation recovered " + fmt(100 * perm_rate) +
              "% of " + std::to_string(sphere.num_vertices())};
}

Outcome ac4_ground_truth() {
  SyntheticOptions resolution;
  resolution.around = 32;
  resolution.along = 90;
  const auto objects = synthetic_objects(resolution);
  struct Case {
    std::string object, configuration;
  };
  bool pass = true;
  std::ostringstream detail;
  for (const Case& c : {Case{"cable", "bend90"}, Case{"bar", "twist60"}}) {
    const auto& obj = *std::find_if(objects.begin(), objects.end(), [&](const auto& o) { return o.name == c.object; });
    const auto& conf = *std::find_if(obj.configurations.begin(), obj.configurations.end(),
                                     [&](const auto& x) { return x.name == c.configuration; });
    const TriMesh target = apply_configuration(obj.mesh, conf);
    PipelineConfig cfg;
    cfg.fmap.bijective = false;
    auto start = Clock::now();
    const MatchOutput icp = match_shapes(obj.mesh, target, cfg);
    const double icp_time = seconds_since(start);
    const CorrespondenceError err = geodesic_error(icp.map, PointMap::identity(target.num_vertices()), obj.mesh);
    cfg.fmap.bijective = true;
    start = Clock::now();
    const MatchOutput bij = match_shapes(obj.mesh, target, cfg);
    const double bij_time = seconds_since(start);
    const bool ok = err.mean <= 0.05 && err.fraction_below_threshold(0.1) >= 0.8 &&
                    non_increasing(bij.round_trip_history, 0.0) && icp_time <= 60.0 && bij_time <= 60.0 &&
                    non_increasing(icp.refine_history);
    pass = pass && ok;
    detail << c.object << "/" << c.configuration << " n=" << obj.mesh.num_vertices() << ": mean " << fmt(err.mean, 3)
           << ", below 10% " << fmt(100 * err.fraction_below_threshold(0.1), 4) << "%, round trip "
           << fmt(bij.round_trip_history.front(), 4) << " -> " << fmt(bij.round_trip_history.back(), 4) << ", "
           << fmt(icp_time, 3) << " s / " << fmt(bij_time, 3) << " s; ";
  }
  return {pass, detail.str()};
}

Outcome ac5_procrustes() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double worst_r = 0.0, worst_t = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Matrix3Xd src(3, 50);
    for (Index i = 0; i < src.cols(); ++i) src.col(i) = Eigen::Vector3d(u(rng), u(rng), u(rng));
    const Eigen::Matrix3d r = Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
    const Eigen::Vector3d t(u(rng), u(rng), u(rng));
    const RigidTransformd est = kabsch<double>(src, (r * src).colwise() + t);
    worst_r = std::max(worst_r, rotation_angle_between(est.rotation, r));
    worst_t = std::max(worst_t, (est.translation - t).norm());
  }
  return {worst_r <= 1e-6 && worst_t <= 1e-9,
          "100 trials, max rotation error " + fmt(worst_r, 3) + " rad, max translation error " + fmt(worst_t, 3) + " m"};
}

Outcome ac6_replan() {
  TriMesh slab = make_box({0.04, 0.2, 0.2}, {4, 40, 40});
  slab.vertices.row(2).array() += 0.08;
  const GraspChecker checker(slab, GripperSpec{});
  ReplanConfig cfg;
  cfg.mu1 = 0.2;
  cfg.mu2 = 0.8;
  auto grasp_at = [&](const RigidTransformd& pose) {
    const FeasibilityReport r = checker.check(pose);
    Grasp g;
    g.pose = pose;
    g.opening = r.required_opening;
    g.contacts = checker.contacts(pose, r, r.required_opening);
    return g;
  };
  auto positions = [](const Grasp& g) {
    std::vector<Eigen::Vector3d> out;
    for (const auto& c : g.contacts) out.push_back(c.position);
    return out;
  };
  const Grasp start = grasp_at(RigidTransformd::identity());
  const ReplanResult zero = replan_local(start, positions(start), checker, cfg);
  RigidTransformd shifted = RigidTransformd::identity();
  shifted.translation = Eigen::Vector3d(0.0, 0.005, 0.0);
  const ReplanResult moved = replan_local(start, positions(grasp_at(shifted)), checker, cfg);
  return {zero.pose_change <= 1e-6 && moved.contact_error <= 1e-3 && moved.report.feasible(),
          "zero offset pose change " + fmt(zero.pose_change, 3) + ", 5 mm offset contact error " +
              fmt(1e3 * moved.contact_error, 3) + " mm after " + std::to_string(moved.evaluations) + " evaluations"};
}

const ComparisonReport& bench_report() {
  static const ComparisonReport report = [] {
    const fs::path manifest = write_synthetic_dataset(work_dir() / "suite", bench_objects());
    BenchOptions opts;
    opts.artifact_dir = work_dir() / "bench" / "artifacts";
    ComparisonReport r = compare_methods(load_manifest(manifest), bench_config(), opts);
    write_report(work_dir() / "bench", r);
    return r;
  }();
  return report;
}

Outcome ac7_ordering() {
  const ComparisonReport& r = bench_report();
  const double fm = r.pass_rate("fm", "large"), cpd = r.pass_rate("cpd", "large"), icp = r.pass_rate("icp", "large");
  const double icp_small = r.pass_rate("icp", "small");
  const std::size_t large = r.count("fm", "large");
  std::ostringstream d;
  d << large << " large configurations: fm " << fmt(100 * fm) << "%, cpd " << fmt(100 * cpd) << "%, icp "
    << fmt(100 * icp) << "%; small (" << r.count("icp", "small") << "): fm " << fmt(100 * r.pass_rate("fm", "small"))
    << "%, cpd " << fmt(100 * r.pass_rate("cpd", "small")) << "%, icp " << fmt(100 * icp_small) << "%";
  return {large >= 8 && fm >= cpd && cpd >= icp && fm >= 0.85 && icp_small > 0.0, d.str()};
}

Outcome ac8_monotonicity() {
  const PipelineConfig cfg = bench_config();
  const BasisCache cache(cfg.cache_dir);
  int checked = 0, failed = 0;
  auto check = [&](const std::vector<double>& h) {
    ++checked;
    failed += !non_increasing(h);
  };
  for (const auto& obj : bench_objects()) {
    check(kmeans_segment(obj.mesh, 7, 1).objective_history);
    for (const auto& conf : obj.configurations) {
      if (conf.suite != "large") continue;
      const TriMesh target = apply_configuration(obj.mesh, conf);
      check(icp_rigid(obj.mesh.vertices, target.vertices, cfg.icp).mse_history);
      check(cpd_nonrigid(obj.mesh.vertices, target.vertices, cfg.cpd).objective_history);
      const SpectralBasis bx = cache.get(obj.mesh, cfg.k), by = cache.get(target, cfg.k);
      const FunctionalMap fm = fit_fmap(bx, by, wks(bx, cfg.d), wks(by, cfg.d), cfg.fmap, &obj.mesh, &target);
      check(icp_refine(fm.C, bx, by, cfg.fmap.refine_iterations).error_history);
      break;
    }
  }
  return {failed == 0, std::to_string(checked) + " histories, " + std::to_string(failed) + " increasing"};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FMGRASP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac9_determinism() {
  // Two objects, two configurations each, all three methods.
  auto objects = std::vector<SyntheticObject>(bench_objects().begin(), bench_objects().begin() + 2);
  for (auto& o : objects) {
    std::vector<SyntheticConfiguration> kept;
    for (const auto& c : o.configurations)
      if (kept.size() < 2 && (kept.empty() || kept.back().suite != c.suite)) kept.push_back(c);
    o.configurations = kept;
  }
  const fs::path manifest = write_synthetic_dataset(work_dir() / "determinism", objects);
  PipelineConfig cfg = bench_config();
  cfg.cache_dir.clear();
  write_file_atomic(work_dir() / "determinism.toml", to_config_text(cfg));
  std::string csv[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = work_dir() / ("determinism_run" + std::to_string(run));
    const int code = run_cli("--seed 7 --config " + (work_dir() / "determinism.toml").string() + " --out-dir " +
                             out.string() + " bench --manifest " + manifest.string());
    if (code != 0) return {false, "bench exited with code " + std::to_string(code)};
    csv[run] = read_file(out / "report.csv");
  }
  const auto lines = std::count(csv[0].begin(), csv[0].end(), '\n');
  return {csv[0] == csv[1] && lines > 1,
          std::to_string(lines - 1) + " rows, CSVs " + (csv[0] == csv[1] ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 spectral oracle", ac1_spectral_oracle},
      {"AC2 WKS normalization", ac2_wks_normalization},
      {"AC3 self-map exactness", ac3_self_map},
      {"AC4 ground-truth correspondence", ac4_ground_truth},
      {"AC5 Procrustes recovery", ac5_procrustes},
      {"AC6 local re-planning", ac6_replan},
      {"AC7 baseline ordering", ac7_ordering},
      {"AC8 monotonicity", ac8_monotonicity},
      {"AC9 determinism", ac9_determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << " [" << fmt(seconds_since(start), 3)
              << " s]" << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
