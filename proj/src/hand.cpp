#include "flexhand/hand.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "flexhand/errors.hpp"

namespace flexhand {

HandModel::HandModel(FingerGeometry finger, const StiffnessVector& stiffness,
                     int finger_count, HandLayout layout)
    : finger_(std::move(finger)), finger_count_(finger_count), layout_(layout) {
  if (finger_count_ < 2) {
    throw std::invalid_argument("a hand needs at least two fingers");
  }
  finger_.validate();
  if (stiffness.jointCount() != finger_.joint_count) {
    throw std::invalid_argument("stiffness size does not match finger");
  }
  if (!(layout_.base_radius > 0.0)) {
    throw std::invalid_argument("base radius must be positive");
  }
  stiffness_.assign(finger_count_, stiffness);
}

const StiffnessVector& HandModel::stiffness(int finger_index) const {
  return stiffness_.at(finger_index);
}

void HandModel::setStiffness(int finger_index, const StiffnessVector& k) {
  if (k.jointCount() != finger_.joint_count) {
    throw std::invalid_argument("stiffness size does not match finger");
  }
  stiffness_.at(finger_index) = k;
}

double HandModel::azimuth(int finger_index) const {
  return 2.0 * kPi * finger_index / finger_count_;
}

Eigen::Vector3d HandModel::basePosition(int finger_index) const {
  const double psi = azimuth(finger_index);
  return layout_.base_radius * Eigen::Vector3d(std::cos(psi), std::sin(psi), 0.0);
}

Eigen::Vector3d HandModel::fingertipPosition(
    int finger_index, const Eigen::VectorXd& angles) const {
  const JointConfiguration q(finger_, angles);
  const Eigen::Vector2d tip = forwardKinematics(finger_, q).fingertip;
  const double psi = azimuth(finger_index);
  const Eigen::Vector3d radial(std::cos(psi), std::sin(psi), 0.0);
  return basePosition(finger_index) + tip.x() * radial +
         tip.y() * Eigen::Vector3d::UnitZ();
}

HandModel assembleHand(const FingerGeometry& finger, const StiffnessVector& k,
                       int finger_count, const HandLayout& layout) {
  return HandModel(finger, k, finger_count, layout);
}

HandState solveHand(const HandModel& hand, double actuator_force,
                    const std::vector<ClampSet>& clamps_per_finger,
                    const SolverOptions& opts) {
  if (actuator_force < 0.0) {
    throw std::invalid_argument("actuator force must be non-negative");
  }
  const int n = hand.fingerCount();
  if (!clamps_per_finger.empty() &&
      static_cast<int>(clamps_per_finger.size()) != n) {
    throw std::invalid_argument("need one clamp set per finger (or none)");
  }

  HandState state;
  state.actuator_force = actuator_force;
  state.tensions.assign(n, actuator_force / n);
  // Keep the sum exact even when the division rounds.
  state.tensions.back() =
      actuator_force - (n - 1) * (actuator_force / n);

  for (int f = 0; f < n; ++f) {
    const ClampSet clamps =
        clamps_per_finger.empty() ? ClampSet{} : clamps_per_finger[f];
    try {
      const ClampedSolution sol = solveWithClamps(
          hand.finger(), hand.stiffness(f), state.tensions[f], clamps, opts);
      state.finger_angles.push_back(sol.angles);
      const JointConfiguration q(hand.finger(), sol.angles);
      state.excursions.push_back(tendonExcursion(hand.finger(), q));
    } catch (const ConvergenceFailure& failure) {
      throw ConvergenceFailure(
          "finger " + std::to_string(f + 1) + ": " + failure.what(),
          failure.bestIterate(), failure.residualNorm());
    }
  }

  double total = 0.0;
  for (double e : state.excursions) total += e;
  state.pull_loop_displacement = total / n;
  return state;
}

double aperture(const HandModel& hand, const HandState& state) {
  const int n = hand.fingerCount();
  if (static_cast<int>(state.finger_angles.size()) != n) {
    throw std::invalid_argument("hand state does not match the hand");
  }
  double min_distance = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d tip_i =
        hand.fingertipPosition(i, state.finger_angles[i]);
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector3d tip_j =
          hand.fingertipPosition(j, state.finger_angles[j]);
      min_distance = std::min(min_distance, (tip_i - tip_j).norm());
    }
  }
  return min_distance;
}

}  // namespace flexhand
