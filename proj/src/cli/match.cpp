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
#include "fmgrasp/cli/match.h"

#include <algorithm>
#include <chrono>

#include "fmgrasp/descriptors/wks.h"
#include "fmgrasp/fmap/refine.h"
#include "fmgrasp/spectral/basis_cache.h"

namespace fmgrasp {
namespace {

class Stopwatch {
public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void match_functional(const TriMesh& x, const TriMesh& y, const PipelineConfig& config, MatchOutput& out) {
  Stopwatch clock;
  const BasisCache cache(config.cache_dir);
  const Index k = std::min({config.k, x.num_vertices() - 1, y.num_vertices() - 1});
  if (k < config.k)
    out.warnings.push_back("k reduced to " + std::to_string(k) + " to fit the smaller mesh");
  const SpectralBasis bx = cache.get(x, k, config.eigen);
  const SpectralBasis by = cache.get(y, k, config.eigen);
  out.timings.basis = clock.lap();

  const DescriptorField f = wks(bx, config.d, config.sigma_factor);
  const DescriptorField h = wks(by, config.d, config.sigma_factor);
  FunctionalMap forward = fit_fmap(bx, by, f, h, config.fmap, &x, &y);
  out.residual = forward.energy.total();
  out.timings.fit = clock.lap();

  const int iterations = config.fmap.refine_iterations;
  if (iterations == 0) {
    out.map = p2p_from_fmap(forward.C, bx, by);
  } else if (config.fmap.bijective) {
    const FunctionalMap backward = fit_fmap(by, bx, h, f, config.fmap, &y, &x);
    BijectiveRefineResult refined = bijective_refine(forward.C, backward.C, x, y, bx, by, iterations);
    out.map = std::move(refined.map);
    out.round_trip_history = std::move(refined.round_trip_history);
    for (auto& w : refined.warnings) out.warnings.push_back(std::move(w));
  } else {
    IcpRefineResult refined = icp_refine(forward.C, bx, by, iterations);
    out.map = std::move(refined.p2p);
    out.refine_history = std::move(refined.error_history);
    forward.C = refined.map.C;
  }
  out.fmap = std::move(forward);
  out.timings.refine = clock.lap();
}

}  // namespace

MatchOutput match_shapes(const TriMesh& source, const TriMesh& target, const PipelineConfig& config) {
  config.validate();
  Stopwatch total;
  MatchOutput out;
  out.method = config.method;
  switch (config.method) {
    case MatchMethod::FunctionalMap:
      match_functional(source, target, config, out);
      break;
    case MatchMethod::Icp: {
      const IcpResult r = icp_rigid(source.vertices, target.vertices, config.icp);
      out.map = r.map;
      out.refine_history = r.mse_history;
      out.residual = r.residual();
      out.report_json = icp_report_json(r);
      break;
    }
    case MatchMethod::Cpd: {
      CpdResult r = cpd_nonrigid(source.vertices, target.vertices, config.cpd);
      out.map = r.map;
      out.refine_history = r.objective_history;
      out.residual = r.objective_history.empty() ? 0.0 : r.objective_history.back();
      out.report_json = cpd_report_json(r);
      for (auto& w : r.warnings) out.warnings.push_back(std::move(w));
      break;
    }
  }
  out.timings.total = total.lap();
  return out;
}

}  // namespace fmgrasp
