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
#include "fmgrasp/grasp/replan.h"

#include <cmath>
#include <string>

#include "fmgrasp/common/error.h"

namespace fmgrasp {
namespace {

struct Evaluation {
  double objective = 0.0;
  double contact_error = 0.0;
  double change = 0.0;
  FeasibilityReport report;
  std::vector<Contact> contacts;
};

class Objective {
public:
  Objective(const Grasp& start, const std::vector<Eigen::Vector3d>& targets, const GraspChecker& checker,
            const ReplanConfig& config)
      : start_(start), targets_(targets), checker_(checker), config_(config) {}

  Evaluation operator()(const RigidTransformd& pose) {
    ++count;
    Evaluation e;
    e.report = checker_.check(pose);
    e.change = pose_change(start_.pose, pose, config_.rho, config_.squared_change);
    e.contacts = checker_.contacts(pose, e.report, start_.opening);
    for (std::size_t j = 0; j < targets_.size(); ++j) e.contact_error += (e.contacts[j].position - targets_[j]).norm();
    e.objective = config_.mu1 * e.contact_error + config_.mu2 * e.change + (e.report.feasible() ? 0.0 : config_.psi);
    return e;
  }

  int count = 0;

private:
  const Grasp& start_;
  const std::vector<Eigen::Vector3d>& targets_;
  const GraspChecker& checker_;
  const ReplanConfig& config_;
};

RigidTransformd perturb(const RigidTransformd& pose, int axis, double amount) {
  RigidTransformd delta;
  if (axis < 3) {
    delta.translation[axis] = amount;
  } else {
    delta.rotation = Eigen::AngleAxisd(amount, Eigen::Vector3d::Unit(axis - 3)).toRotationMatrix();
  }
  return pose * delta;
}

}  // namespace

void ReplanConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("replan: " + msg);
  };
  require(mu1 >= 0 && mu2 >= 0, "mu1 and mu2 must be >= 0");
  require(psi > 0, "psi must be > 0");
  require(rho > 0, "rho must be > 0");
  require(translation_step > 0 && rotation_step_deg > 0, "steps must be > 0");
  require(min_translation_step > 0 && min_translation_step <= translation_step, "min_translation_step out of range");
  require(min_rotation_step_deg > 0 && min_rotation_step_deg <= rotation_step_deg, "min_rotation_step_deg out of range");
  require(max_evaluations >= 1, "max_evaluations must be >= 1");
}

double pose_change(const RigidTransformd& from, const RigidTransformd& to, double rho, bool squared) {
  const double angle = rotation_angle_between<double>(from.rotation, to.rotation);
  if (!squared) return (to.translation - from.translation).norm() + rho * angle;
  return (to.translation - from.translation).squaredNorm() + (rho * angle) * (rho * angle);
}

ReplanResult replan_local(const Grasp& start, const std::vector<Eigen::Vector3d>& targets, const GraspChecker& checker,
                          const ReplanConfig& config) {
  config.validate();
  if (static_cast<int>(targets.size()) != checker.gripper().num_fingers())
    throw ValidationError("replan needs one target per finger");
  Objective objective(start, targets, checker, config);

  RigidTransformd pose = start.pose;
  Evaluation best = objective(pose);
  const double entry = best.objective;
  double step_t = config.translation_step;
  double step_r = config.rotation_step_deg * M_PI / 180.0;
  const double min_t = config.min_translation_step, min_r = config.min_rotation_step_deg * M_PI / 180.0;

  while (objective.count < config.max_evaluations && best.objective > 0.0) {
    bool improved = false;
    RigidTransformd best_pose = pose;
    for (int axis = 0; axis < 6 && objective.count < config.max_evaluations; ++axis) {
      for (double sign : {1.0, -1.0}) {
        if (objective.count >= config.max_evaluations) break;
        const RigidTransformd trial = perturb(pose, axis, sign * (axis < 3 ? step_t : step_r));
        Evaluation e = objective(trial);
        if (e.objective < best.objective) {
          best = std::move(e);
          best_pose = trial;
          improved = true;
        }
      }
    }
    if (improved) {
      pose = best_pose;
      continue;
    }
    if (step_t <= min_t && step_r <= min_r) break;
    step_t = std::max(0.5 * step_t, min_t);
    step_r = std::max(0.5 * step_r, min_r);
  }

  if (!best.report.feasible())
    throw UnreachableError("grasp unreachable", {"replan: no feasible pose within " +
                                                     std::to_string(objective.count) + " evaluations; last: " +
                                                     best.report.summary()});
  ReplanResult out;
  out.grasp = start;
  out.grasp.pose = pose;
  out.grasp.opening = best.report.required_opening;
  out.grasp.contacts = best.contacts;
  out.report = best.report;
  out.objective_start = entry;
  out.objective = best.objective;
  out.contact_error = best.contact_error;
  out.pose_change = best.change;
  out.evaluations = objective.count;
  return out;
}

ReplanResult replan_local(const Grasp& start, const std::vector<Eigen::Vector3d>& targets, const TriMesh& mesh,
                          const GripperSpec& gripper, const ReplanConfig& config) {
  return replan_local(start, targets, GraspChecker(mesh, gripper), config);
}

}  // namespace fmgrasp
