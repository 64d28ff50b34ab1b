#pragma once

#include <random>

#include <Eigen/Core>

#include "flexhand/equilibrium.hpp"
#include "flexhand/geometry.hpp"
#include "flexhand/statics.hpp"

namespace flexhand::testing {

/// Independent equilibrium oracle: the naive damped fixed-point iteration
/// theta <- theta + step * (rest + u(theta) / k - theta), run until the
/// update stalls. Deliberately ignorant of the production solver.
Eigen::VectorXd fixedPointSolve(const FingerGeometry& geom,
                                const StiffnessVector& k, double tension,
                                double step = 0.05, double tol = 1e-12,
                                int max_iterations = 2000000);

/// Random valid finger geometry (1..max_joints joints).
FingerGeometry randomGeometry(std::mt19937_64& rng, int max_joints = 5);

/// Random configuration with deflections in [0, max_deflection].
Eigen::VectorXd randomAngles(std::mt19937_64& rng, const FingerGeometry& geom,
                             double max_deflection = 1.0);

}  // namespace flexhand::testing
