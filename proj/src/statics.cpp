#include "flexhand/statics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

namespace flexhand {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

void requireTension(double tension) {
  if (tension < 0.0) {
    throw std::invalid_argument("tendon tension must be non-negative");
  }
  if (!std::isfinite(tension)) {
    throw std::invalid_argument("tendon tension must be finite");
  }
}

}  // namespace

StiffnessVector::StiffnessVector(Eigen::VectorXd values)
    : values_(std::move(values)) {
  if (values_.size() < 1) {
    throw std::invalid_argument("stiffness vector must not be empty");
  }
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0)) {
      throw std::invalid_argument("joint stiffness must be strictly positive");
    }
  }
}

Eigen::VectorXd bandAngles(const JointConfiguration& q) {
  return 0.5 * q.deflections();
}

Eigen::Vector2d distalForce(double tension, const JointConfiguration& q) {
  requireTension(tension);
  const int m = q.jointCount();
  const double delta_m = 0.5 * (q.angles()[m - 1] - q.restAngles()[m - 1]);
  const double link_angle = q.angles().sum();
  return tension * (Eigen::Rotation2Dd(link_angle) *
                    Eigen::Vector2d(-std::sin(delta_m), -std::cos(delta_m)));
}

std::vector<Eigen::Vector2d> bandNormalForces(double tension,
                                              const JointConfiguration& q) {
  requireTension(tension);
  const int m = q.jointCount();
  const Eigen::VectorXd delta = bandAngles(q);

  std::vector<Eigen::Vector2d> forces(m - 1);
  double link_angle = 0.0;
  for (int i = 0; i + 1 < m; ++i) {
    link_angle += q.angles()[i];
    forces[i] = tension * (Eigen::Rotation2Dd(link_angle) *
                           Eigen::Vector2d(0.0, -std::sin(delta[i])));
  }
  return forces;
}

Eigen::VectorXd springTorques(const StiffnessVector& k,
                              const JointConfiguration& q) {
  if (k.jointCount() != q.jointCount()) {
    throw std::invalid_argument("stiffness count does not match joint count");
  }
  return k.values().cwiseProduct(q.deflections());
}

Eigen::VectorXd jointLoadTorques(double tension, const JointConfiguration& q,
                                 const FingerGeometry& geom) {
  requireTension(tension);
  const int m = geom.joint_count;
  if (q.jointCount() != m) {
    throw std::invalid_argument("configuration does not match geometry");
  }

  const LeverVectors levers = leverVectors(geom, q);
  const Eigen::Vector2d f = distalForce(tension, q);
  const std::vector<Eigen::Vector2d> f_n = bandNormalForces(tension, q);

  Eigen::VectorXd u(m);
  for (int i = 0; i < m; ++i) {
    double torque = cross2(f, levers.d(i));
    for (int j = i; j + 1 < m; ++j) {
      torque += cross2(f_n[j], levers.r(i, j));
    }
    u[i] = torque;
  }
  return u;
}

LoadState evaluateLoads(double tension, const JointConfiguration& q,
                        const FingerGeometry& geom) {
  LoadState state;
  state.tendon_tension = tension;
  state.distal_force = distalForce(tension, q);
  state.normal_forces = bandNormalForces(tension, q);
  state.load_torques = jointLoadTorques(tension, q, geom);
  return state;
}

Eigen::VectorXd torqueResiduals(double tension, const JointConfiguration& q,
                                const StiffnessVector& k,
                                const FingerGeometry& geom) {
  return jointLoadTorques(tension, q, geom) - springTorques(k, q);
}

}  // namespace flexhand
