#pragma once

#include <vector>

#include <Eigen/Core>

#include "flexhand/geometry.hpp"
#include "flexhand/statics.hpp"

namespace flexhand {

struct SolverOptions {
  double residual_tolerance = 1e-10;  // [N m], infinity norm of the torque residual
  int max_iterations = 100;
  double fd_step = 1e-7;              // [rad] central-difference Jacobian step
  double min_step_scale = 1e-10;      // backtracking floor
  double fixed_point_damping = 0.3;   // fallback step factor
  double continuation_step = 5.0;     // [N] internal rescue ramp increment

  void validate() const;
};

struct EquilibriumSolution {
  Eigen::VectorXd angles;     // theta*
  int iterations = 0;
  double residual_norm = 0.0; // infinity norm at theta*
  bool boundary_active = false;  // some deflection pinned at zero
};

/// Solves the torque balance for the joint angles at the given tension.
/// Deflections are kept non-negative by projection; convergence means every
/// free joint balances to tolerance (a pinned joint may carry an
/// extension-side residual, reported via boundary_active).
///
/// Throws ConvergenceFailure (carrying the best iterate) or NumericalFailure.
EquilibriumSolution solveEquilibrium(const FingerGeometry& geom,
                                     const StiffnessVector& k, double tension,
                                     const Eigen::VectorXd& initial_angles,
                                     const SolverOptions& opts = {});

/// Cold start from the rest shape.
EquilibriumSolution solveEquilibrium(const FingerGeometry& geom,
                                     const StiffnessVector& k, double tension,
                                     const SolverOptions& opts = {});

/// Holds one joint at a fixed angle (zero-based index).
struct JointClamp {
  int joint = 0;
  double angle = 0.0;  // [rad], within [rest, pi]
};

using ClampSet = std::vector<JointClamp>;

struct ClampedSolution {
  Eigen::VectorXd angles;
  Eigen::VectorXd reaction_torques;  // at clamped joints, zero elsewhere [N m]
  int iterations = 0;
  double residual_norm = 0.0;
  bool boundary_active = false;
};

/// Equilibrium with some joints blocked (a grasped object or the
/// ball-constraint demonstration). Free joints balance to tolerance; the
/// reaction torque a clamp must supply is minus the residual there.
ClampedSolution solveWithClamps(const FingerGeometry& geom,
                                const StiffnessVector& k, double tension,
                                const ClampSet& clamps,
                                const SolverOptions& opts = {});

struct RampPoint {
  double tension = 0.0;       // [N]
  Eigen::VectorXd angles;     // equilibrium at that tension
  double excursion = 0.0;     // [m]
};

struct FlexionTrajectory {
  std::vector<RampPoint> points;
};

/// Solves a strictly increasing tension schedule, warm-starting each solve
/// from the previous solution. Solver failures are rethrown with the failing
/// schedule index.
FlexionTrajectory forceRamp(const FingerGeometry& geom, const StiffnessVector& k,
                            const std::vector<double>& schedule,
                            const SolverOptions& opts = {});

/// Shortening of the band path (entry -> routing points -> anchor) relative
/// to the rest shape; equals the cable payout on the actuator side.
double tendonExcursion(const FingerGeometry& geom, const JointConfiguration& q);

}  // namespace flexhand
