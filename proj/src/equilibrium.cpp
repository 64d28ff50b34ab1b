#include "flexhand/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "flexhand/errors.hpp"

namespace flexhand {

namespace {

void validateClamps(const FingerGeometry& geom, const ClampSet& clamps) {
  std::vector<bool> seen(geom.joint_count, false);
  for (const auto& c : clamps) {
    if (c.joint < 0 || c.joint >= geom.joint_count) {
      throw std::invalid_argument("clamp joint index out of range");
    }
    if (seen[c.joint]) {
      throw std::invalid_argument("duplicate clamp on joint " +
                                  std::to_string(c.joint + 1));
    }
    seen[c.joint] = true;
    const double rest = geom.rest_angles[c.joint];
    if (c.angle < rest - 1e-12 || c.angle > kPi) {
      throw std::invalid_argument("clamp angle must lie in [rest, pi]");
    }
  }
}

// Torque balance over the free joints, with clamped joints held fixed.
class ReducedSystem {
 public:
  ReducedSystem(const FingerGeometry& geom, const StiffnessVector& k,
                double tension, const ClampSet& clamps)
      : geom_(geom), k_(k), tension_(tension) {
    base_angles_ = Eigen::Map<const Eigen::VectorXd>(geom.rest_angles.data(),
                                                     geom.rest_angles.size());
    std::vector<bool> clamped(geom.joint_count, false);
    for (const auto& c : clamps) {
      clamped[c.joint] = true;
      base_angles_[c.joint] = c.angle;
    }
    for (int i = 0; i < geom.joint_count; ++i) {
      if (!clamped[i]) free_idx_.push_back(i);
    }
  }

  int freeCount() const { return static_cast<int>(free_idx_.size()); }

  Eigen::VectorXd fullAngles(const Eigen::VectorXd& free) const {
    Eigen::VectorXd full = base_angles_;
    for (int i = 0; i < freeCount(); ++i) full[free_idx_[i]] = free[i];
    return full;
  }

  Eigen::VectorXd fullResidual(const Eigen::VectorXd& free) const {
    const JointConfiguration q(geom_, fullAngles(free));
    return torqueResiduals(tension_, q, k_, geom_);
  }

  Eigen::VectorXd gather(const Eigen::VectorXd& full) const {
    Eigen::VectorXd out(freeCount());
    for (int i = 0; i < freeCount(); ++i) out[i] = full[free_idx_[i]];
    return out;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& free) const {
    return gather(fullResidual(free));
  }

  Eigen::VectorXd restFree() const {
    Eigen::VectorXd rest(freeCount());
    for (int i = 0; i < freeCount(); ++i) {
      rest[i] = geom_.rest_angles[free_idx_[i]];
    }
    return rest;
  }

  // One damped fixed-point target: theta = rest + u / k, free entries.
  Eigen::VectorXd fixedPointTarget(const Eigen::VectorXd& free) const {
    const JointConfiguration q(geom_, fullAngles(free));
    const Eigen::VectorXd u = jointLoadTorques(tension_, q, geom_);
    Eigen::VectorXd target(freeCount());
    for (int i = 0; i < freeCount(); ++i) {
      const int j = free_idx_[i];
      target[i] = geom_.rest_angles[j] + u[j] / k_[j];
    }
    return target;
  }

  Eigen::VectorXd project(Eigen::VectorXd free) const {
    const Eigen::VectorXd rest = restFree();
    for (int i = 0; i < freeCount(); ++i) free[i] = std::max(free[i], rest[i]);
    return free;
  }

 private:
  const FingerGeometry& geom_;
  const StiffnessVector& k_;
  double tension_;
  Eigen::VectorXd base_angles_;
  std::vector<int> free_idx_;
};

// Residual norm that tolerates extension-side torques on pinned joints: a
// joint at zero deflection cannot move further out, so a negative residual
// there is carried by the rest shape, not an unbalanced equation.
double activeNorm(const ReducedSystem& sys, const Eigen::VectorXd& free,
                  const Eigen::VectorXd& r) {
  const Eigen::VectorXd rest = sys.restFree();
  double norm = 0.0;
  for (int i = 0; i < free.size(); ++i) {
    const bool pinned = free[i] <= rest[i];
    const double contribution = (pinned && r[i] < 0.0) ? 0.0 : std::abs(r[i]);
    norm = std::max(norm, contribution);
  }
  return norm;
}

bool boundaryActive(const ReducedSystem& sys, const Eigen::VectorXd& free,
                    const Eigen::VectorXd& r, double tol) {
  const Eigen::VectorXd rest = sys.restFree();
  for (int i = 0; i < free.size(); ++i) {
    if (free[i] <= rest[i] && r[i] < -tol) return true;
  }
  return false;
}

struct ReducedSolution {
  Eigen::VectorXd free_angles;
  int iterations = 0;
  double residual_norm = 0.0;
  bool boundary_active = false;
};

ReducedSolution solveReduced(const ReducedSystem& sys, Eigen::VectorXd x,
                             const SolverOptions& opts) {
  x = sys.project(std::move(x));
  if (sys.freeCount() == 0) {
    return {x, 0, 0.0, false};
  }

  Eigen::VectorXd r = sys.residual(x);
  if (!r.allFinite()) {
    throw NumericalFailure("torque residual is not finite at the start point");
  }
  double merit = activeNorm(sys, x, r);
  Eigen::VectorXd best_x = x;
  double best_merit = merit;

  const int n = sys.freeCount();
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (merit <= opts.residual_tolerance) {
      return {x, iter, merit, boundaryActive(sys, x, r, opts.residual_tolerance)};
    }

    // Central-difference Jacobian of the reduced residual.
    Eigen::MatrixXd jac(n, n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += opts.fd_step;
      xm[j] -= opts.fd_step;
      jac.col(j) = (sys.residual(xp) - sys.residual(xm)) / (2.0 * opts.fd_step);
    }

    bool accepted = false;
    if (jac.allFinite()) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
      if (lu.isInvertible()) {
        const Eigen::VectorXd dx = lu.solve(-r);
        for (double scale = 1.0; scale >= opts.min_step_scale; scale *= 0.5) {
          const Eigen::VectorXd x_try = sys.project(x + scale * dx);
          const Eigen::VectorXd r_try = sys.residual(x_try);
          if (!r_try.allFinite()) continue;
          const double merit_try = activeNorm(sys, x_try, r_try);
          if (merit_try < (1.0 - 1e-4 * scale) * merit) {
            x = x_try;
            r = r_try;
            merit = merit_try;
            accepted = true;
            break;
          }
        }
      }
    }

    if (!accepted) {
      // Damped fixed-point step; rescues ill-conditioned Jacobians.
      const Eigen::VectorXd target = sys.fixedPointTarget(x);
      const Eigen::VectorXd x_try =
          sys.project(x + opts.fixed_point_damping * (target - x));
      const Eigen::VectorXd r_try = sys.residual(x_try);
      if (r_try.allFinite()) {
        const double merit_try = activeNorm(sys, x_try, r_try);
        if (merit_try < merit) {
          x = x_try;
          r = r_try;
          merit = merit_try;
          accepted = true;
        }
      }
    }

    if (merit < best_merit) {
      best_x = x;
      best_merit = merit;
    }
    if (!accepted) {
      throw ConvergenceFailure(
          "equilibrium iteration stalled at residual " + std::to_string(merit) +
              " N m",
          sys.fullAngles(best_x), best_merit);
    }
  }

  if (merit <= opts.residual_tolerance) {
    return {x, opts.max_iterations, merit,
            boundaryActive(sys, x, r, opts.residual_tolerance)};
  }
  throw ConvergenceFailure("equilibrium solve did not converge within " +
                               std::to_string(opts.max_iterations) +
                               " iterations (residual " + std::to_string(merit) +
                               " N m)",
                           sys.fullAngles(best_x), best_merit);
}

// Direct solve, with a tension-continuation rescue on failure.
ReducedSolution solveWithRescue(const FingerGeometry& geom,
                                const StiffnessVector& k, double tension,
                                const ClampSet& clamps,
                                const Eigen::VectorXd& initial_full,
                                const SolverOptions& opts) {
  const ReducedSystem sys(geom, k, tension, clamps);
  const Eigen::VectorXd init_free = sys.gather(initial_full);
  try {
    return solveReduced(sys, init_free, opts);
  } catch (const ConvergenceFailure&) {
    // Re-approach the requested tension from zero, warm-starting each step.
    int total_iterations = 0;
    const int steps = std::max(
        2, static_cast<int>(std::ceil(tension / opts.continuation_step)));
    ReducedSystem sys0(geom, k, 0.0, clamps);
    Eigen::VectorXd x = sys0.project(sys0.restFree());
    for (int s = 1; s <= steps; ++s) {
      const double f = tension * static_cast<double>(s) / steps;
      const ReducedSystem sys_s(geom, k, f, clamps);
      ReducedSolution sol = solveReduced(sys_s, x, opts);
      total_iterations += sol.iterations;
      x = sol.free_angles;
      if (s == steps) {
        sol.iterations = total_iterations;
        return sol;
      }
    }
    throw;  // unreachable; steps >= 2 always returns at s == steps
  }
}

}  // namespace

void SolverOptions::validate() const {
  if (!(residual_tolerance > 0.0)) {
    throw std::invalid_argument("residual tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("max iterations must be at least 1");
  }
  if (!(fd_step > 0.0) || !(continuation_step > 0.0)) {
    throw std::invalid_argument("solver steps must be positive");
  }
  if (!(fixed_point_damping > 0.0) || fixed_point_damping > 1.0) {
    throw std::invalid_argument("fixed-point damping must lie in (0, 1]");
  }
}

EquilibriumSolution solveEquilibrium(const FingerGeometry& geom,
                                     const StiffnessVector& k, double tension,
                                     const Eigen::VectorXd& initial_angles,
                                     const SolverOptions& opts) {
  opts.validate();
  geom.validate();
  if (tension < 0.0) {
    throw std::invalid_argument("tendon tension must be non-negative");
  }
  if (k.jointCount() != geom.joint_count ||
      initial_angles.size() != geom.joint_count) {
    throw std::invalid_argument("stiffness/configuration size mismatch");
  }

  const ReducedSolution sol =
      solveWithRescue(geom, k, tension, {}, initial_angles, opts);
  const ReducedSystem sys(geom, k, tension, {});
  return {sys.fullAngles(sol.free_angles), sol.iterations, sol.residual_norm,
          sol.boundary_active};
}

EquilibriumSolution solveEquilibrium(const FingerGeometry& geom,
                                     const StiffnessVector& k, double tension,
                                     const SolverOptions& opts) {
  const Eigen::VectorXd rest = Eigen::Map<const Eigen::VectorXd>(
      geom.rest_angles.data(), geom.rest_angles.size());
  return solveEquilibrium(geom, k, tension, rest, opts);
}

ClampedSolution solveWithClamps(const FingerGeometry& geom,
                                const StiffnessVector& k, double tension,
                                const ClampSet& clamps,
                                const SolverOptions& opts) {
  opts.validate();
  geom.validate();
  validateClamps(geom, clamps);
  if (tension < 0.0) {
    throw std::invalid_argument("tendon tension must be non-negative");
  }
  if (k.jointCount() != geom.joint_count) {
    throw std::invalid_argument("stiffness size mismatch");
  }

  const Eigen::VectorXd rest = Eigen::Map<const Eigen::VectorXd>(
      geom.rest_angles.data(), geom.rest_angles.size());
  const ReducedSolution sol = solveWithRescue(geom, k, tension, clamps, rest, opts);

  const ReducedSystem sys(geom, k, tension, clamps);
  ClampedSolution out;
  out.angles = sys.fullAngles(sol.free_angles);
  out.iterations = sol.iterations;
  out.residual_norm = sol.residual_norm;
  out.boundary_active = sol.boundary_active;

  const JointConfiguration q(geom, out.angles);
  const Eigen::VectorXd rho = torqueResiduals(tension, q, k, geom);
  out.reaction_torques = Eigen::VectorXd::Zero(geom.joint_count);
  for (const auto& c : clamps) {
    out.reaction_torques[c.joint] = -rho[c.joint];
  }
  return out;
}

FlexionTrajectory forceRamp(const FingerGeometry& geom, const StiffnessVector& k,
                            const std::vector<double>& schedule,
                            const SolverOptions& opts) {
  if (schedule.empty()) {
    throw std::invalid_argument("tension schedule must not be empty");
  }
  if (schedule.front() < 0.0) {
    throw std::invalid_argument("tension schedule must start at or above zero");
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i] > schedule[i - 1])) {
      throw std::invalid_argument("tension schedule must be strictly increasing");
    }
  }

  FlexionTrajectory traj;
  traj.points.reserve(schedule.size());
  Eigen::VectorXd warm = Eigen::Map<const Eigen::VectorXd>(
      geom.rest_angles.data(), geom.rest_angles.size());
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    try {
      const EquilibriumSolution sol =
          solveEquilibrium(geom, k, schedule[i], warm, opts);
      warm = sol.angles;
      const JointConfiguration q(geom, sol.angles);
      traj.points.push_back({schedule[i], sol.angles, tendonExcursion(geom, q)});
    } catch (const ConvergenceFailure& failure) {
      throw ConvergenceFailure("ramp step " + std::to_string(i) + " (tension " +
                                   std::to_string(schedule[i]) + " N): " +
                                   failure.what(),
                               failure.bestIterate(), failure.residualNorm());
    }
  }
  return traj;
}

double tendonExcursion(const FingerGeometry& geom, const JointConfiguration& q) {
  const auto path_length = [&](const FrameSet& fs) {
    double len = 0.0;
    Eigen::Vector2d prev = fs.entry;
    for (const auto& p : fs.routing) {
      len += (p - prev).norm();
      prev = p;
    }
    return len + (fs.anchor - prev).norm();
  };
  const FrameSet at_rest = forwardKinematics(geom, JointConfiguration::atRest(geom));
  const FrameSet at_q = forwardKinematics(geom, q);
  return path_length(at_rest) - path_length(at_q);
}

}  // namespace flexhand
