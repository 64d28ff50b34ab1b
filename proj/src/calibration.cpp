#include "flexhand/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "flexhand/errors.hpp"

namespace flexhand {

namespace {

// The load torques do not depend on the stiffness, so the objective is a
// separable quadratic in k:
//   O(k) = sum_i (a_i - 2 b_i k_i + c_i k_i^2),
// with a_i = sum_s u_si^2, b_i = sum_s u_si dtheta_si, c_i = sum_s dtheta_si^2.
struct QuadraticObjective {
  Eigen::VectorXd a, b, c;

  QuadraticObjective(const FlexionDataset& data, const FingerGeometry& geom) {
    const int m = geom.joint_count;
    a = Eigen::VectorXd::Zero(m);
    b = Eigen::VectorXd::Zero(m);
    c = Eigen::VectorXd::Zero(m);
    for (const auto& sample : data.samples()) {
      const JointConfiguration q(geom, sample.angles);
      const Eigen::VectorXd u = jointLoadTorques(sample.tension, q, geom);
      const Eigen::VectorXd dtheta = q.deflections();
      a += u.cwiseProduct(u);
      b += u.cwiseProduct(dtheta);
      c += dtheta.cwiseProduct(dtheta);
    }
  }

  double value(const Eigen::VectorXd& k) const {
    return (a - 2.0 * k.cwiseProduct(b) + k.cwiseProduct(k).cwiseProduct(c)).sum();
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& k) const {
    return 2.0 * (k.cwiseProduct(c) - b);
  }
};

void checkDimensions(const StiffnessVector& k, const FlexionDataset& data,
                     const FingerGeometry& geom) {
  if (data.jointCount() != geom.joint_count ||
      k.jointCount() != geom.joint_count) {
    throw std::invalid_argument(
        "dataset, stiffness and geometry joint counts must match");
  }
}

}  // namespace

FlexionDataset::FlexionDataset(int joint_count,
                               std::vector<FlexionSample> samples)
    : joint_count_(joint_count), samples_(std::move(samples)) {
  if (joint_count_ < 1) {
    throw std::invalid_argument("dataset needs at least one joint");
  }
  if (static_cast<int>(samples_.size()) < joint_count_) {
    throw std::invalid_argument(
        "dataset needs at least as many samples as joints");
  }
  for (const auto& s : samples_) {
    if (s.angles.size() != joint_count_) {
      throw std::invalid_argument("sample angle count does not match dataset");
    }
    if (s.tension < 0.0 || !std::isfinite(s.tension)) {
      throw std::invalid_argument("sample tension must be non-negative");
    }
  }
}

double residualObjective(const StiffnessVector& k, const FlexionDataset& data,
                         const FingerGeometry& geom) {
  checkDimensions(k, data, geom);
  double objective = 0.0;
  for (const auto& sample : data.samples()) {
    const JointConfiguration q(geom, sample.angles);
    objective += torqueResiduals(sample.tension, q, k, geom).squaredNorm();
  }
  return objective;
}

Eigen::VectorXd residualObjectiveGradient(const StiffnessVector& k,
                                          const FlexionDataset& data,
                                          const FingerGeometry& geom) {
  checkDimensions(k, data, geom);
  return QuadraticObjective(data, geom).gradient(k.values());
}

FitResult fitStiffness(const FlexionDataset& data, const FingerGeometry& geom,
                       const StiffnessVector& k_init, const FitOptions& opts) {
  checkDimensions(k_init, data, geom);
  geom.validate();
  const int m = geom.joint_count;

  const FlexionDataset* fit_data = &data;
  std::optional<FlexionDataset> filtered;
  if (opts.min_tension > 0.0) {
    std::vector<FlexionSample> kept;
    for (const auto& sample : data.samples()) {
      if (sample.tension >= opts.min_tension) kept.push_back(sample);
    }
    filtered.emplace(m, std::move(kept));  // re-checks N >= m
    fit_data = &*filtered;
  }
  const QuadraticObjective problem(*fit_data, geom);

  // BFGS on x = log k; the chain rule keeps every iterate strictly positive.
  const auto value_of = [&](const Eigen::VectorXd& x) {
    return problem.value(x.array().exp().matrix());
  };
  const auto gradient_of = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::VectorXd k = x.array().exp().matrix();
    return problem.gradient(k).cwiseProduct(k);
  };

  Eigen::VectorXd x = k_init.values().array().log().matrix();
  double fx = value_of(x);
  Eigen::VectorXd g = gradient_of(x);
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(m, m);

  const auto converged = [&]() {
    return g.lpNorm<Eigen::Infinity>() <=
           opts.gradient_tolerance * std::max(1.0, std::abs(fx));
  };

  // Cap each log-space move: far from the optimum the raw quasi-Newton step
  // can jump past k -> 0, where the log parameterization makes the gradient
  // vanish and strands the iteration.
  constexpr double kMaxLogStep = 2.0;

  int iterations = 0;
  bool stalled = false;  // line search hit the floor of double precision
  while (!converged() && iterations < opts.max_iterations) {
    Eigen::VectorXd direction = -h_inv * g;
    if (direction.dot(g) >= 0.0) {
      h_inv.setIdentity();  // restore descent if the update degenerated
      direction = -g;
    }
    const double direction_norm = direction.lpNorm<Eigen::Infinity>();
    if (direction_norm > kMaxLogStep) {
      direction *= kMaxLogStep / direction_norm;
    }

    double step = 1.0;
    const double slope = g.dot(direction);
    Eigen::VectorXd x_next;
    double f_next = fx;
    bool accepted = false;
    while (step > 1e-14) {
      x_next = x + step * direction;
      f_next = value_of(x_next);
      if (std::isfinite(f_next) && f_next <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      stalled = true;  // no measurable decrease left along the descent ray
      break;
    }

    const Eigen::VectorXd g_next = gradient_of(x_next);
    const Eigen::VectorXd s = x_next - x;
    const Eigen::VectorXd y = g_next - g;
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(m, m);
      const Eigen::MatrixXd v = identity - (s * y.transpose()) / sy;
      h_inv = v * h_inv * v.transpose() + (s * s.transpose()) / sy;
    }
    const double moved = s.lpNorm<Eigen::Infinity>();
    x = x_next;
    fx = f_next;
    g = g_next;
    ++iterations;
    if (moved < 1e-13) {
      stalled = true;
      break;
    }
  }

  if (!converged() && !stalled) {
    throw ConvergenceFailure("stiffness fit did not converge within " +
                                 std::to_string(opts.max_iterations) +
                                 " iterations",
                             x.array().exp().matrix(),
                             g.lpNorm<Eigen::Infinity>());
  }

  FitResult result;
  result.stiffness = x.array().exp().matrix();
  result.objective = fx;
  result.iterations = iterations;

  // Gauss-Newton curvature of the quadratic is diagonal: 2 sum_s dtheta^2.
  result.curvature_eigenvalues = 2.0 * problem.c;
  const double max_curv = result.curvature_eigenvalues.maxCoeff();
  const double min_curv = result.curvature_eigenvalues.minCoeff();
  result.identifiability_warning =
      max_curv <= 0.0 || min_curv < 1e-10 * max_curv;

  if (opts.evaluate_predictions) {
    const PredictionErrorReport report = predictionErrors(
        StiffnessVector(result.stiffness), data, geom, opts.solver);
    result.predicted_angles = report.predicted_angles;
    result.angle_error_mean_deg = report.mean_deg;
    result.angle_error_std_deg = report.std_deg;
  }
  return result;
}

PredictionErrorReport predictionErrors(const StiffnessVector& k,
                                       const FlexionDataset& data,
                                       const FingerGeometry& geom,
                                       const SolverOptions& opts) {
  checkDimensions(k, data, geom);
  const int n = data.size();
  const int m = geom.joint_count;

  PredictionErrorReport report;
  report.predicted_angles.setConstant(
      n, m, std::numeric_limits<double>::quiet_NaN());
  report.errors_deg.setConstant(n, m,
                                std::numeric_limits<double>::quiet_NaN());

  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(n) * m);
  for (int s = 0; s < n; ++s) {
    const auto& sample = data.samples()[s];
    try {
      const EquilibriumSolution sol =
          solveEquilibrium(geom, k, sample.tension, opts);
      report.predicted_angles.row(s) = sol.angles.transpose();
      for (int j = 0; j < m; ++j) {
        const double err_deg = radToDeg(std::abs(sol.angles[j] - sample.angles[j]));
        report.errors_deg(s, j) = err_deg;
        pooled.push_back(err_deg);
      }
    } catch (const ConvergenceFailure&) {
      ++report.failed_samples;
    }
  }

  if (!pooled.empty()) {
    double mean = 0.0;
    for (double e : pooled) mean += e;
    mean /= static_cast<double>(pooled.size());
    double var = 0.0;
    for (double e : pooled) var += (e - mean) * (e - mean);
    var = pooled.size() > 1 ? var / static_cast<double>(pooled.size() - 1) : 0.0;
    report.mean_deg = mean;
    report.std_deg = std::sqrt(var);
  }
  return report;
}

std::string PredictionErrorReport::formatted() const {
  return formatMeanStd(mean_deg, std_deg);
}

std::string formatMeanStd(double mean_deg, double std_deg) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f° ± %.2f°", mean_deg,
                std_deg);
  return buf;
}

FlexionDataset generateSyntheticDataset(const FingerGeometry& geom,
                                        const StiffnessVector& k,
                                        const std::vector<double>& tension_grid,
                                        double noise_std_deg,
                                        std::uint64_t seed, int cycles,
                                        const SolverOptions& opts) {
  if (cycles < 1) {
    throw std::invalid_argument("cycle count must be at least 1");
  }
  if (noise_std_deg < 0.0) {
    throw std::invalid_argument("noise level must be non-negative");
  }
  for (double f : tension_grid) {
    if (f < 0.0) {
      throw std::invalid_argument("tension grid must be non-negative");
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, degToRad(noise_std_deg));

  std::vector<FlexionSample> samples;
  samples.reserve(tension_grid.size() * static_cast<std::size_t>(cycles));
  for (int c = 0; c < cycles; ++c) {
    Eigen::VectorXd warm = Eigen::Map<const Eigen::VectorXd>(
        geom.rest_angles.data(), geom.rest_angles.size());
    for (double tension : tension_grid) {
      const EquilibriumSolution sol =
          solveEquilibrium(geom, k, tension, warm, opts);
      warm = sol.angles;
      Eigen::VectorXd measured = sol.angles;
      if (noise_std_deg > 0.0) {
        for (Eigen::Index j = 0; j < measured.size(); ++j) {
          measured[j] += noise(rng);
        }
      }
      samples.push_back({tension, std::move(measured), c});
    }
  }
  return FlexionDataset(geom.joint_count, std::move(samples));
}

}  // namespace flexhand
