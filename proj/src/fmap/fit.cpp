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
#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <string>

#include "fmgrasp/common/error.h"
#include "fmgrasp/fmap/functional_map.h"
#include "fmgrasp/fmap/nearest.h"

namespace fmgrasp {
namespace {

using Mat = Eigen::MatrixXd;

Mat rms_scaled(const Eigen::VectorXd& f, const Eigen::VectorXd& mass) {
  const double norm = std::sqrt(f.cwiseAbs2().dot(mass) / mass.sum());
  return norm > 0 ? Mat(f / norm) : Mat(f);
}

Mat multiplication_operator(const SpectralBasis& basis, const Eigen::VectorXd& f) {
  return basis.functions.transpose() * basis.mass.cwiseProduct(f).asDiagonal() * basis.functions;
}

/// Smallest positive eigenvalue of either basis.
double eigenvalue_scale(const SpectralBasis& bx, const SpectralBasis& by) {
  const double top = std::max(bx.eigenvalues.maxCoeff(), by.eigenvalues.maxCoeff());
  double scale = top;
  for (const auto* b : {&bx, &by})
    for (Index i = 0; i < b->size(); ++i)
      if (b->eigenvalues[i] > kZeroEigenvalue * top) scale = std::min(scale, b->eigenvalues[i]);
  return scale > 0 ? scale : 1.0;
}

/// Matrix-free Hessian (half of it) of the objective, with optional ridge.
class Quadratic {
public:
  Quadratic(const FmapProblem& p, double ridge) : p_(p), ridge_(ridge) {
    const auto& cfg = p.config;
    fft_ = p.F * p.F.transpose();
    const Index ky = p.H.rows(), kx = p.F.rows();
    lap_.resize(ky, kx);
    for (Index i = 0; i < ky; ++i)
      for (Index j = 0; j < kx; ++j) {
        const double d = p.lambda_x[j] - p.lambda_y[i];
        lap_(i, j) = d * d;
      }
    diag_ = (cfg.w_desc * fft_.diagonal()).transpose().replicate(ky, 1) + cfg.w_lap * lap_;
    diag_.array() += ridge_;
    add_operator_diagonal(p.opcomm_x, p.opcomm_y, cfg.w_opcomm);
    add_operator_diagonal(p.orient_x, p.orient_y, cfg.w_orient);
    rhs_ = cfg.w_desc * p.H * p.F.transpose();
    rhs_ += ridge_ * Mat::Identity(ky, kx);
  }

  Mat apply(const Mat& c) const {
    const auto& cfg = p_.config;
    Mat out = cfg.w_desc * c * fft_ + cfg.w_lap * lap_.cwiseProduct(c) + ridge_ * c;
    apply_operators(c, p_.opcomm_x, p_.opcomm_y, cfg.w_opcomm, out);
    apply_operators(c, p_.orient_x, p_.orient_y, cfg.w_orient, out);
    return out;
  }

  const Mat& rhs() const { return rhs_; }
  const Mat& diagonal() const { return diag_; }
  const Mat& fft() const { return fft_; }
  const Mat& lap() const { return lap_; }

private:
  void add_operator_diagonal(const std::vector<Mat>& mx, const std::vector<Mat>& my, double w) {
    if (w <= 0) return;
    for (std::size_t o = 0; o < mx.size(); ++o) {
      const Eigen::VectorXd row_x = mx[o].rowwise().squaredNorm();
      const Eigen::VectorXd col_y = my[o].colwise().squaredNorm().transpose();
      const Eigen::VectorXd dx = mx[o].diagonal(), dy = my[o].diagonal();
      for (Index i = 0; i < diag_.rows(); ++i)
        for (Index j = 0; j < diag_.cols(); ++j) diag_(i, j) += w * (row_x[j] + col_y[i] - 2 * dx[j] * dy[i]);
    }
  }

  static void apply_operators(const Mat& c, const std::vector<Mat>& mx, const std::vector<Mat>& my, double w,
                              Mat& out) {
    if (w <= 0) return;
    for (std::size_t o = 0; o < mx.size(); ++o) {
      const Mat r = c * mx[o] - my[o] * c;
      out.noalias() += w * (r * mx[o].transpose());
      out.noalias() -= w * (my[o].transpose() * r);
    }
  }

  const FmapProblem& p_;
  double ridge_;
  Mat fft_, lap_, diag_, rhs_;
};

/// Row-separable solve of the descriptor and Laplacian terms (plus ridge).
Mat separable_solve(const Quadratic& q, const FmapConfig& cfg, double ridge, bool* deficient) {
  const Index ky = q.rhs().rows(), kx = q.rhs().cols();
  Mat c(ky, kx);
  if (deficient) *deficient = false;
  for (Index r = 0; r < ky; ++r) {
    Mat m = cfg.w_desc * q.fft();
    m.diagonal() += cfg.w_lap * q.lap().row(r).transpose();
    m.diagonal().array() += ridge;
    Eigen::LDLT<Mat> ldlt(m);
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    if (deficient && (ldlt.info() != Eigen::Success || !(d.minCoeff() > 1e-12 * d.maxCoeff()))) *deficient = true;
    c.row(r) = ldlt.solve(q.rhs().row(r).transpose()).transpose();
  }
  return c;
}

struct CgResult {
  Mat c;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

CgResult conjugate_gradient(const Quadratic& q, Mat c, double tol, int max_iterations) {
  const double bnorm = std::max(q.rhs().norm(), 1e-300);
  Mat r = q.rhs() - q.apply(c);
  Mat z = r.cwiseQuotient(q.diagonal());
  Mat p = z;
  double rz = (r.array() * z.array()).sum();
  CgResult out;
  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    if (r.norm() <= tol * bnorm) break;
    const Mat ap = q.apply(p);
    const double alpha = rz / (p.array() * ap.array()).sum();
    c += alpha * p;
    r -= alpha * ap;
    if (out.iterations % 50 == 49) r = q.rhs() - q.apply(c);
    z = r.cwiseQuotient(q.diagonal());
    const double rz_next = (r.array() * z.array()).sum();
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  r = q.rhs() - q.apply(c);
  out.relative_residual = r.norm() / bnorm;
  out.converged = out.relative_residual <= tol;
  out.c = std::move(c);
  return out;
}

}  // namespace

void FmapConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(w_desc > 0, "w_desc must be > 0");
  require(w_lap >= 0, "w_lap must be >= 0");
  require(w_opcomm >= 0, "w_opcomm must be >= 0");
  require(w_orient >= 0, "w_orient must be >= 0");
  require(operator_step >= 1, "operator_step must be >= 1");
  require(refine_iterations >= 0, "refine_iterations must be >= 0");
  require(tolerance > 0, "fmap tolerance must be > 0");
  require(max_solver_iterations > 0, "max_solver_iterations must be > 0");
}

Eigen::MatrixXd orientation_operator(const TriMesh& mesh, const SpectralBasis& basis, const Eigen::VectorXd& f) {
  const Index k = basis.size();
  Mat p = Mat::Zero(mesh.num_faces(), k);
  Mat q = Mat::Zero(mesh.num_faces(), k);
  for (Index t = 0; t < mesh.num_faces(); ++t) {
    const int v[3] = {mesh.faces(0, t), mesh.faces(1, t), mesh.faces(2, t)};
    const Eigen::Vector3d x[3] = {mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2])};
    const Eigen::Vector3d cr = (x[1] - x[0]).cross(x[2] - x[0]);
    const double area = 0.5 * cr.norm();
    const Eigen::Vector3d n = cr.normalized();
    Eigen::Vector3d hat[3];
    for (int i = 0; i < 3; ++i) hat[i] = n.cross(x[(i + 2) % 3] - x[(i + 1) % 3]) / (2 * area);
    Eigen::Vector3d grad_f = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i) grad_f += f[v[i]] * hat[i];
    const Eigen::Vector3d rotated = n.cross(grad_f);
    for (int i = 0; i < 3; ++i) {
      p.row(t) += (area / 3.0) * basis.functions.row(v[i]);
      q.row(t) += rotated.dot(hat[i]) * basis.functions.row(v[i]);
    }
  }
  return p.transpose() * q;
}

FmapProblem make_fmap_problem(const SpectralBasis& basis_x, const SpectralBasis& basis_y, const DescriptorField& f,
                              const DescriptorField& h, const FmapConfig& config, const TriMesh* mesh_x,
                              const TriMesh* mesh_y) {
  config.validate();
  if (f.size() != h.size())
    throw ValidationError("descriptor counts differ: " + std::to_string(f.size()) + " vs " + std::to_string(h.size()));
  if (f.num_vertices() != basis_x.num_vertices() || h.num_vertices() != basis_y.num_vertices())
    throw ValidationError("descriptor fields do not match their bases");
  if (config.w_orient > 0 && (!mesh_x || !mesh_y)) throw ConfigError("w_orient > 0 requires both meshes");

  FmapProblem p;
  p.config = config;
  const Mat fv = config.normalize_descriptors ? normalize_columns(f.values, basis_x.mass) : f.values;
  const Mat hv = config.normalize_descriptors ? normalize_columns(h.values, basis_y.mass) : h.values;
  p.F = project(basis_x, fv);
  p.H = project(basis_y, hv);
  const double scale = eigenvalue_scale(basis_x, basis_y);
  p.lambda_x = basis_x.eigenvalues / scale;
  p.lambda_y = basis_y.eigenvalues / scale;
  for (Index j = 0; j < fv.cols(); j += config.operator_step) {
    const Mat fx = rms_scaled(fv.col(j), basis_x.mass);
    const Mat hy = rms_scaled(hv.col(j), basis_y.mass);
    if (config.w_opcomm > 0) {
      p.opcomm_x.push_back(multiplication_operator(basis_x, fx.col(0)));
      p.opcomm_y.push_back(multiplication_operator(basis_y, hy.col(0)));
    }
    if (config.w_orient > 0) {
      p.orient_x.push_back(orientation_operator(*mesh_x, basis_x, fx.col(0)) / scale);
      p.orient_y.push_back(orientation_operator(*mesh_y, basis_y, hy.col(0)) / scale);
    }
  }
  return p;
}

EnergyBreakdown evaluate_energy(const FmapProblem& p, const Eigen::MatrixXd& c) {
  const auto& cfg = p.config;
  EnergyBreakdown e;
  e.descriptor = cfg.w_desc * (c * p.F - p.H).squaredNorm();
  Mat lap = c * p.lambda_x.asDiagonal();
  lap -= p.lambda_y.asDiagonal() * c;
  e.laplacian = cfg.w_lap * lap.squaredNorm();
  for (std::size_t o = 0; o < p.opcomm_x.size(); ++o)
    e.opcomm += cfg.w_opcomm * (c * p.opcomm_x[o] - p.opcomm_y[o] * c).squaredNorm();
  for (std::size_t o = 0; o < p.orient_x.size(); ++o)
    e.orientation += cfg.w_orient * (c * p.orient_x[o] - p.orient_y[o] * c).squaredNorm();
  return e;
}

FunctionalMap fit_fmap(const FmapProblem& problem) {
  const auto& cfg = problem.config;
  bool deficient = false;
  Quadratic plain(problem, 0.0);
  Mat c = separable_solve(plain, cfg, 0.0, &deficient);
  double ridge = 0.0;
  if (deficient || !c.allFinite()) {
    ridge = 1e-9 * cfg.w_desc * std::max(plain.fft().diagonal().maxCoeff(), 1.0);
    Quadratic regularized(problem, ridge);
    c = separable_solve(regularized, cfg, ridge, nullptr);
  }
  const bool coupled = !problem.opcomm_x.empty() || !problem.orient_x.empty();
  FunctionalMap out;
  int iterations = 0;
  double relative = 0.0;
  if (coupled) {
    Quadratic q(problem, ridge);
    CgResult cg = conjugate_gradient(q, c, cfg.tolerance, cfg.max_solver_iterations);
    if (!cg.converged && ridge == 0.0) {
      ridge = 1e-9 * cfg.w_desc * std::max(plain.fft().diagonal().maxCoeff(), 1.0);
      Quadratic rq(problem, ridge);
      cg = conjugate_gradient(rq, cg.c, cfg.tolerance, cfg.max_solver_iterations);
    }
    if (!cg.converged)
      throw NumericalError("functional map solve stalled at relative gradient " + std::to_string(cg.relative_residual));
    c = std::move(cg.c);
    iterations = cg.iterations;
    relative = cg.relative_residual;
  } else {
    Quadratic q(problem, ridge);
    relative = (q.rhs() - q.apply(c)).norm() / std::max(q.rhs().norm(), 1e-300);
  }
  if (!c.allFinite()) throw NumericalError("functional map has non-finite entries");
  out.energy = evaluate_energy(problem, c);
  out.energy.regularized = ridge > 0;
  out.energy.ridge = ridge * (c - Mat::Identity(c.rows(), c.cols())).squaredNorm();
  out.energy.iterations = iterations;
  out.energy.relative_gradient = relative;
  out.C = std::move(c);
  return out;
}

FunctionalMap fit_fmap(const SpectralBasis& basis_x, const SpectralBasis& basis_y, const DescriptorField& f,
                       const DescriptorField& h, const FmapConfig& config, const TriMesh* mesh_x,
                       const TriMesh* mesh_y) {
  return fit_fmap(make_fmap_problem(basis_x, basis_y, f, h, config, mesh_x, mesh_y));
}

Eigen::MatrixXd fmap_from_p2p(const PointMap& map, const SpectralBasis& basis_x, const SpectralBasis& basis_y) {
  if (map.num_target() != basis_y.num_vertices() || !map.valid(basis_x.num_vertices()))
    throw ValidationError("point map does not match the bases");
  Mat pulled(map.num_target(), basis_x.size());
  for (Index y = 0; y < map.num_target(); ++y) pulled.row(y) = basis_x.functions.row(map.to_source[y]);
  return basis_y.functions.transpose() * basis_y.mass.asDiagonal() * pulled;
}

PointMap p2p_from_fmap(const Eigen::MatrixXd& c, const SpectralBasis& basis_x, const SpectralBasis& basis_y) {
  if (c.rows() != basis_y.size() || c.cols() != basis_x.size())
    throw ValidationError("functional map is " + std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                          ", bases need " + std::to_string(basis_y.size()) + "x" + std::to_string(basis_x.size()));
  if (!c.allFinite()) throw ValidationError("functional map has non-finite entries");
  PointMap map;
  map.to_source = nearest_rows(basis_y.functions, basis_x.functions * c.transpose()).first;
  return map;
}

}  // namespace fmgrasp
