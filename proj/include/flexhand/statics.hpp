#pragma once

#include <vector>

#include <Eigen/Core>

#include "flexhand/geometry.hpp"

namespace flexhand {

/// Torsional joint stiffnesses k_1..k_m [N m / rad], all strictly positive.
class StiffnessVector {
 public:
  explicit StiffnessVector(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int jointCount() const { return static_cast<int>(values_.size()); }

 private:
  Eigen::VectorXd values_;
};

/// Band tension, its resulting forces on the links, and the joint load
/// torques at one configuration.
struct LoadState {
  double tendon_tension = 0.0;                  // f_in [N]
  Eigen::Vector2d distal_force;                 // on the last link [N]
  std::vector<Eigen::Vector2d> normal_forces;   // on links 1..m-1 [N]
  Eigen::VectorXd load_torques;                 // u_1..u_m, signed z [N m]
};

/// Band bend angle at each joint: half the deflection from rest. The band is
/// printed co-aligned with the rest shape, so the print angle at joint 1 does
/// not bend it.
Eigen::VectorXd bandAngles(const JointConfiguration& q);

/// Band force on the last link, in the finger base frame. The direction
/// rotates with the link orientation and the magnitude is always the tension.
Eigen::Vector2d distalForce(double tension, const JointConfiguration& q);

/// Forces pressing the band into the routing point of each intermediate link,
/// magnitude tension * sin(band angle).
std::vector<Eigen::Vector2d> bandNormalForces(double tension,
                                              const JointConfiguration& q);

/// Restoring torques k_i * (theta_i - rest_i).
Eigen::VectorXd springTorques(const StiffnessVector& k,
                              const JointConfiguration& q);

/// Load torque on each joint from the band: the distal force acting on its
/// anchor lever plus, for non-distal joints, every band normal force distal
/// of the joint acting on its own routing lever.
Eigen::VectorXd jointLoadTorques(double tension, const JointConfiguration& q,
                                 const FingerGeometry& geom);

/// Convenience bundle of the above at one state.
LoadState evaluateLoads(double tension, const JointConfiguration& q,
                        const FingerGeometry& geom);

/// Torque balance residual per joint: load torque minus spring torque.
/// Zero exactly at a quasi-static equilibrium.
Eigen::VectorXd torqueResiduals(double tension, const JointConfiguration& q,
                                const StiffnessVector& k,
                                const FingerGeometry& geom);

}  // namespace flexhand
