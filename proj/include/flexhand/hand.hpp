#pragma once

#include <vector>

#include <Eigen/Core>

#include "flexhand/equilibrium.hpp"
#include "flexhand/geometry.hpp"
#include "flexhand/statics.hpp"

namespace flexhand {

/// Fingers sit on a circle of this radius, evenly spaced, each flexing in the
/// vertical plane through the hand axis and its base point. Two fingers give
/// the opposed layout with base separation 2 * base_radius.
struct HandLayout {
  double base_radius = 0.0;  // [m]
};

/// n identical fingers in discrete rotational symmetry, driven by one
/// actuator through a shared pull loop.
class HandModel {
 public:
  HandModel(FingerGeometry finger, const StiffnessVector& stiffness,
            int finger_count, HandLayout layout);

  const FingerGeometry& finger() const { return finger_; }
  int fingerCount() const { return finger_count_; }
  const HandLayout& layout() const { return layout_; }

  const StiffnessVector& stiffness(int finger_index) const;
  void setStiffness(int finger_index, const StiffnessVector& k);

  double azimuth(int finger_index) const;
  Eigen::Vector3d basePosition(int finger_index) const;

  /// Maps a fingertip from the finger's flexion plane into hand coordinates
  /// (local x points radially outward, local y along the hand axis).
  Eigen::Vector3d fingertipPosition(int finger_index,
                                    const Eigen::VectorXd& angles) const;

 private:
  FingerGeometry finger_;
  std::vector<StiffnessVector> stiffness_;
  int finger_count_;
  HandLayout layout_;
};

HandModel assembleHand(const FingerGeometry& finger, const StiffnessVector& k,
                       int finger_count, const HandLayout& layout);

struct HandState {
  std::vector<Eigen::VectorXd> finger_angles;
  std::vector<double> tensions;            // [N], sums to the actuator force
  std::vector<double> excursions;          // per-finger band payout [m]
  double actuator_force = 0.0;             // [N]
  double pull_loop_displacement = 0.0;     // mean excursion [m]
};

/// Frictionless-pulley differential: the pull loop equalizes band tension, so
/// each finger sees actuator_force / n and is solved independently with its
/// own clamps. The pull-loop displacement is the mean of the finger payouts.
///
/// clamps_per_finger is empty or one ClampSet per finger. Solver failures are
/// rethrown tagged with the finger index.
HandState solveHand(const HandModel& hand, double actuator_force,
                    const std::vector<ClampSet>& clamps_per_finger = {},
                    const SolverOptions& opts = {});

/// Minimum fingertip-to-fingertip distance across finger pairs.
double aperture(const HandModel& hand, const HandState& state);

}  // namespace flexhand
