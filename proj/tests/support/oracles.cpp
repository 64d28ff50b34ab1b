#include "support/oracles.hpp"

#include <stdexcept>

namespace flexhand::testing {

Eigen::VectorXd fixedPointSolve(const FingerGeometry& geom,
                                const StiffnessVector& k, double tension,
                                double step, double tol, int max_iterations) {
  Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(
      geom.rest_angles.data(), geom.rest_angles.size());
  for (int i = 0; i < max_iterations; ++i) {
    const JointConfiguration q(geom, theta);
    const Eigen::VectorXd u = jointLoadTorques(tension, q, geom);
    const Eigen::VectorXd target =
        Eigen::Map<const Eigen::VectorXd>(geom.rest_angles.data(),
                                          geom.rest_angles.size()) +
        u.cwiseQuotient(k.values());
    const Eigen::VectorXd next = theta + step * (target - theta);
    const double update = (next - theta).lpNorm<Eigen::Infinity>();
    theta = next;
    if (update <= tol) return theta;
  }
  throw std::runtime_error("fixed-point oracle did not settle");
}

FingerGeometry randomGeometry(std::mt19937_64& rng, int max_joints) {
  std::uniform_int_distribution<int> joints(1, max_joints);
  std::uniform_real_distribution<double> length(0.01, 0.04);
  std::uniform_real_distribution<double> along(0.3, 0.7);
  std::uniform_real_distribution<double> lateral(0.05, 0.3);
  std::uniform_real_distribution<double> alpha(0.0, 1.0);

  FingerGeometry g;
  g.joint_count = joints(rng);
  for (int i = 0; i < g.joint_count; ++i) {
    const double len = length(rng);
    g.link_lengths.push_back(len);
    g.rest_angles.push_back(i == 0 ? alpha(rng) : 0.0);
    g.band_routing.push_back({along(rng) * len, lateral(rng) * len});
    g.pad_offsets.push_back(0.1 * len);
  }
  g.band_entry = {-g.band_routing[0].along, g.band_routing[0].lateral};
  g.reference_length = kReferenceFingerLength;
  g.scale = g.totalLength() / g.reference_length;
  g.validate();
  return g;
}

Eigen::VectorXd randomAngles(std::mt19937_64& rng, const FingerGeometry& geom,
                             double max_deflection) {
  std::uniform_real_distribution<double> deflection(0.0, max_deflection);
  Eigen::VectorXd angles(geom.joint_count);
  for (int i = 0; i < geom.joint_count; ++i) {
    angles[i] = geom.rest_angles[i] + deflection(rng);
  }
  return angles;
}

}  // namespace flexhand::testing
